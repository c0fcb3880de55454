#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "bsv/besov.hpp"
#include "bsv/repr.hpp"

namespace bsv {

// OSC_1(f, 2^-i) for i = 0..K, windows clamped to [0,1].
std::vector<double> keller_osc(const PiecewiseConstantFn& f);
// max over dyadic eps of OSC_1(f,eps) / eps^s
double keller_var(const PiecewiseConstantFn& f, double s);

// |f|_1 + total variation of the piecewise-constant representative
double bv_norm(const PiecewiseConstantFn& f);
struct ButterleyValue {
  double value = 0;
  int worst_band = 0;                  // band attaining the sup
  std::vector<int> best_level;         // minimizing level per band 0..K+1
  std::vector<double> band_value;
};
// Upper bound from the family f_k = E_m f, m chosen per dyadic band of k.
ButterleyValue butterley_upper(const PiecewiseConstantFn& f, double s);

// Piecewise-linear test function on the level-K nodes, g[0..2^K].
struct TestFn {
  std::vector<double> g;
  std::string kind;
};
// Exact C^{1-s} seminorm of a node-interpolated piecewise-linear function.
double holder_seminorm(const std::vector<double>& g, double s);
// Fixed dictionary in a stable order; liverani_lower uses a prefix of it.
std::vector<TestFn> liverani_dictionary(int K, double s);
struct LiveraniValue {
  double value = 0;
  std::string best_kind;
  int evaluated = 0;
};
// Max of |int g' f| over the first dict_size fixed elements, plus the
// f-adapted Haar profiles when with_profiles is set.
LiveraniValue liverani_lower(const PiecewiseConstantFn& f, double s, int dict_size = -1, bool with_profiles = true);
LiveraniValue liverani_lower(const PiecewiseConstantFn& f, double s, const std::vector<TestFn>& dict,
                             int dict_size = -1, bool with_profiles = true);

struct NormReport {
  std::string id;
  double s = 0;
  int K = 0;
  double keller = 0, butterley = 0, liverani = 0, besov_haar = 0, besov_atomic = 0, besov_osc = 0, mean = 0;
};
NormReport norm_report(const PiecewiseConstantFn& f, double s, const std::string& id,
                       const std::vector<TestFn>* dict = nullptr);

struct InclusionRow {
  NormReport r;
  double slack_keller = 0, slack_liverani = 0, slack_butterley = 0;  // rhs - lhs
  bool pass = false;
};
struct InclusionResult {
  std::vector<InclusionRow> rows;
  bool pass = false;
  int failures = 0;
  double worst_keller = 0, worst_liverani = 0, worst_butterley = 0;  // max lhs/rhs
};
// besov_osc <= 2^s keller + |int f|; liverani <= atomic (1,1) cost;
// besov_osc <= 4 butterley; each with additive slack.
InclusionResult inclusion_suite(const std::vector<PiecewiseConstantFn>& corpus, const std::vector<std::string>& ids,
                                double s, double slack = 1e-9);
// Seeded corpus: indicators of dyadic and random intervals, constants,
// Haar-sparse functions, staircases.
void inclusion_corpus(int K, int n, std::uint64_t seed, std::vector<PiecewiseConstantFn>& fs,
                      std::vector<std::string>& ids);

}  // namespace bsv
