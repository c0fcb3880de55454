#pragma once
#include <string>
#include <vector>

#include "bsv/grid.hpp"

namespace bsv {

// families[k] are the level-k cells of the decomposition. The reference
// measure in the defining inequality is m(region)^alpha.
struct RegularDomainCertificate {
  Region region = Region::intervals({{0, 1}});
  double alpha = 1;
  int k0 = 0;
  int max_level = 0;
  std::vector<std::vector<GridCell>> families;
  std::vector<double> level_sums;  // sum_{P in F^k} |P|^alpha
  double reference = 1;             // m(region)^alpha
  double C = 0, lambda = 0.5;
  int boundary_cells = 0;  // partial cells at max_level
};

// Coarsest-first greedy choice of maximal dyadic cells inside the region,
// then the smallest C for a lambda fitted to the tail of the level sums.
RegularDomainCertificate greedy_regular_decompose(const Region& r, double alpha, int max_level);

struct RegularVerdict {
  bool pass = false;
  int worst_level = -1;
  double worst_ratio = 0;  // max_k S_k / (C lambda^{k-k0} ref)
  std::string reason;
};
RegularVerdict verify_regular_domain(const RegularDomainCertificate& c);

std::string certificate_json(const RegularDomainCertificate& c);

}  // namespace bsv
