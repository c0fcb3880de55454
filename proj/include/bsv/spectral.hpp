#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bsv/besov.hpp"
#include "bsv/maps.hpp"
#include "bsv/transfer.hpp"

namespace bsv {

struct EigenResult {
  double lambda = 0;
  PiecewiseConstantFn v;
  int iterations = 0;
  double residual = 0;  // |A v - lambda v|_1 / |v|_1
  bool converged = false;
  bool cesaro = false;  // obtained through the lazy operator (A+I)/2
  std::vector<double> residual_history;
};
EigenResult leading_eigen(const SparseOperator& op, double tol = 1e-12, int max_iter = 200000);

struct SecondModulus {
  double modulus = 0;        // subspace-iteration estimate
  double dense = -1;         // dense solve, -1 when not run
  std::vector<double> ritz;  // moduli of the leading Ritz values
  int iterations = 0;
  bool converged = false;
};
SecondModulus second_modulus(const SparseOperator& op, const EigenResult& lead, std::size_t dense_max = 4096,
                             int block = 8, std::uint64_t seed = 1);
// All eigenvalue moduli of the dense matrix, sorted decreasing.
std::vector<double> dense_moduli(const SparseOperator& op);

struct ProbeSet {
  int dim = 1, level = 0;
  std::vector<PiecewiseConstantFn> f;
  std::vector<std::string> kind;
  std::string descriptor;
};
ProbeSet make_probes(int dim, int K, const BesovParams& bp, int n = 200, std::uint64_t seed = 12345);

struct LYFit {
  int j = 0, level = 0;
  double C = 0, lambda = 0, lambda_root = 0, slack = 0;
  BesovParams bp;
  std::string probes;
  int worst_probe = -1;
};
// Fits for j = 0..j_max from one pass of iterates.
std::vector<LYFit> ly_fit(const SparseOperator& op, const BesovParams& bp, int j_max, const ProbeSet& probes);
// Single fit from ratios a_i = |Phi^j f|/|f| and b_i = |f|_1/|f|.
LYFit ly_fit_ratios(const std::vector<double>& a, const std::vector<double>& b);

struct EssBound {
  std::string family, formula;
  double value = 0;
  std::map<std::string, double> ingredients;
};
// Throws std::domain_error for families with no bound formula (LY-only).
EssBound ess_bound(const MapSpec& m, const BesovParams& bp);
double htop_estimate(const MapSpec& m, int j = 12);

struct PartitionSum {
  double sum = 0, root = 0, root_p = 0;  // sum, sum^{1/j}, sum^{1/(j p')}
  std::uint64_t cells = 0;
};
PartitionSum markov_partition_sum(const MapSpec& m, int j, double s, double pconj);

}  // namespace bsv
