#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsv/besov.hpp"
#include "bsv/maps.hpp"
#include "bsv/spectral.hpp"
#include "bsv/transfer.hpp"

namespace bsv {

struct AcimResult {
  PiecewiseConstantFn density;
  double lambda = 0, residual = 0;
  bool converged = false, cesaro = false;
  // leading eigenvalue below 1 - tol: mass drains out of the domain
  bool drains = false;
  double besov_norm = -1;  // -1 when no parameters were requested
  std::string diagnostics;
};
AcimResult acim(const SparseOperator& op, double tol = 1e-10, std::optional<BesovParams> bp = std::nullopt);
AcimResult acim(const MapSpec& m, int K, double tol = 1e-10, std::optional<BesovParams> bp = std::nullopt);

struct Correlations {
  std::vector<double> C;  // n = 0..n_max
  double rate = 0;        // fitted geometric rate of the tail, 0 if C vanishes
  int fit_from = 0, fit_to = 0;
};
// C(n) = |int phi Phi^n(psi) dm - int phi rho dm int psi dm|.
Correlations correlations(const SparseOperator& op, const PiecewiseConstantFn& rho, const PiecewiseConstantFn& phi,
                          const PiecewiseConstantFn& psi, int n_max);
// Least-squares rate exp(slope of log C) over the usable tail.
double fit_decay_rate(const std::vector<double>& C, int& from, int& to);

struct EscapeReport {
  double alpha = 0, zeta = 0;
  int k0 = 0;
  std::uint64_t N = 0, T = 0, seed = 0;
  double threshold = 0;
  double escaped = 0, escaped_se = 0;
  double final_below = 0;  // fraction below the threshold at time T
  double mean_escape_time = 0;
  double drift = 0, drift_se = 0;
  std::uint64_t drift_steps = 0;
};
constexpr std::uint64_t kDefaultSeed = 20240917;
EscapeReport wild_escape(double alpha, double zeta, int k0, std::uint64_t N, std::uint64_t T,
                         double threshold = 0x1.0p-20, std::uint64_t seed = kDefaultSeed,
                         std::uint64_t drift_steps = 2000);

struct SupportReport {
  int dim = 1, level = 0;
  double floor = 0, measure = 0;
  std::vector<std::uint64_t> cells;  // flat indices with density > floor
};
// floor_rel is relative to the max density.
SupportReport support_report(const PiecewiseConstantFn& rho, double floor_rel = 1e-8);
struct SupportStability {
  bool stable = false;
  double max_rel_change = 0;
  std::vector<double> measures;
};
SupportStability support_stability(const std::vector<SupportReport>& reps, double tol = 0.02);
// Measure of support cells not met by the forward image of the support, and
// the allowed boundary-layer measure 4 |cell| (perimeter cells).
struct ForwardCheck {
  double uncovered = 0, allowed = 0;
  bool ok() const { return uncovered <= allowed + 1e-12; }
};
ForwardCheck support_forward_check(const MapSpec& m, const SupportReport& rep);

}  // namespace bsv
