// Acceptance checks 1-10. Each prints one PASS/FAIL line; tolerances are
// pinned below. Exit status is the number of failed checks.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bsv/besov.hpp"
#include "bsv/normcmp.hpp"
#include "bsv/regular.hpp"
#include "bsv/rng.hpp"
#include "bsv/spectral.hpp"
#include "bsv/stats.hpp"
#include "bsv/transfer.hpp"

using namespace bsv;

namespace {

// ---- pinned tolerances and budgets

constexpr double kMultiplierRelTol = 4e-16;
constexpr double kToyRatioTol = 0.02;
constexpr double kLambdaOneTol = 1e-6;
constexpr double kBoundSlack = 0.05;
constexpr double kConvergeRel = 0.10;
constexpr double kParsevalTol = 1e-12;
constexpr double kRoundtripTol = 1e-12;
constexpr double kHomogeneityTol = 1e-12;
constexpr double kTriangleTol = 1e-10;
constexpr double kPlateauFactor = 1.5;
constexpr double kEscapeHigh = 0.99, kEscapeLow = 0.01;
constexpr double kDriftTarget = 0.125, kDriftTol = 0.005;
constexpr double kWildLambdaMin = 0.999;
constexpr double kAspectFactor = 4;
constexpr double kLe2Tol = 1e-12;
constexpr double kMassTol = 1e-10;
constexpr double kInclusionSlack = 1e-9;

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string f6(double x) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g", x);
  return b;
}

int failures = 0;

void criterion(int id, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  double t0 = now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  double dt = now() - t0;
  o.require(dt < budget_s, "runtime " + f6(dt) + " s over budget " + f6(budget_s) + " s");
  if (!o.pass) ++failures;
  std::printf("criterion %d: %s (%.1f s) %s\n", id, o.pass ? "PASS" : "FAIL", dt, o.detail.c_str());
  std::fflush(stdout);
}

// ---- 1

void toy_model(Outcome& o) {
  double worst = 0;
  std::size_t atoms = 0;
  for (int l : {2, 3})
    for (double s : {0.25, 0.5, 0.75}) {
      BesovParams bp(s, 1, 1);
      double target = std::pow(double(l), -s);
      for (auto& a : exact_atom_action(linear_circle(l), bp, 12)) {
        if (a.level == 0) continue;
        worst = std::max(worst, std::abs(a.multiplier - target) / target);
        ++atoms;
      }
    }
  o.require(worst <= kMultiplierRelTol, "multiplier relative error " + f6(worst));
  o.note(std::to_string(atoms) + " atoms, max rel err " + f6(worst));

  BesovParams bp(0.5, 1, 1);
  const int K = 18;
  auto fits = ly_fit(ulam_matrix(linear_circle(2), K), bp, 9, make_probes(1, K, bp));
  std::string ratios;
  for (int j = 2; j <= 8; ++j) {
    double r = fits[j + 1].lambda / fits[j].lambda;
    o.require(std::abs(r - std::sqrt(0.5)) <= kToyRatioTol, "ratio at j=" + std::to_string(j) + " is " + f6(r));
    ratios += (ratios.empty() ? "" : ",") + f6(r);
  }
  o.note("lambda(j+1)/lambda(j), j=2..8: " + ratios);
}

// ---- 2

void tent_family(Outcome& o) {
  BesovParams bp(0.5, 1, 1);
  for (double t : {0.6, 0.7, 0.8, 0.9, 1.0}) {
    MapSpec m = tent(t);
    AcimResult a = acim(m, 12);
    o.require(a.converged && std::abs(a.lambda - 1) <= kLambdaOneTol, "acim for t=" + f6(t) + " lambda " + f6(a.lambda));
    const int K = 13;
    auto fits = ly_fit(ulam_matrix(m, K), bp, 8, make_probes(1, K, bp));
    double bound = std::pow(2 * t, -bp.s);
    o.require(fits[8].lambda_root <= bound + kBoundSlack, "t=" + f6(t) + " root " + f6(fits[8].lambda_root));
    o.note("t=" + f6(t) + " root8=" + f6(fits[8].lambda_root) + " bound=" + f6(bound));
  }
}

// ---- 3

void partition_sums(Outcome& o) {
  const double s = 0.5, pc = 2.0;
  double worst = 0;
  for (int l : {2, 3})
    for (int j = 1; j <= 8; ++j) {
      PartitionSum ps = markov_partition_sum(linear_circle(l), j, s, pc);
      worst = std::max(worst, std::abs(ps.root_p - std::pow(double(l), -s)));
    }
  o.require(worst <= 1e-12, "linear roots off by " + f6(worst));
  o.note("linear max err " + f6(worst));
  MapSpec mh = markov_holder(2, 0.1);
  std::vector<double> roots;
  for (int j = 1; j <= 8; ++j) roots.push_back(markov_partition_sum(mh, j, s, pc).root_p);
  double limit = roots.back(), bound = std::pow(mh.min_expansion(), -s);
  for (int j = 6; j <= 8; ++j)
    o.require(std::abs(roots[j - 1] - limit) <= kConvergeRel * limit, "holder root at j=" + std::to_string(j));
  o.require(limit <= bound, "holder limit " + f6(limit) + " above " + f6(bound));
  o.note("holder roots " + f6(roots.front()) + " -> " + f6(limit) + ", bound " + f6(bound));
}

// ---- 4

PiecewiseConstantFn random_fn(Philox4x32& g, int K) {
  PiecewiseConstantFn f(1, K);
  int kind = int(g() % 3);
  if (kind == 0) {
    for (double& v : f.values) v = 2 * g.uniform() - 1;
  } else if (kind == 1) {
    HaarCoeffs c = HaarCoeffs::zero(1, K);
    c.mean = 2 * g.uniform() - 1;
    for (int t = 0; t < 20; ++t) {
      int k = int(g() % K);
      c.set_detail(GridCell(1, k, std::uint32_t(g() % (1u << k))), 2 * g.uniform() - 1);
    }
    f = haar_synthesis(c);
  } else {
    double a = g.uniform(), b = 1 + 7 * g.uniform(), ph = g.uniform();
    f = project([=](double x) { return a + std::cos(b * x + ph) + (x > ph ? 1 : 0); }, K);
  }
  return f;
}

void haar_machinery(Outcome& o) {
  const int K = 12;
  BesovParams bp(0.5, 1, 1);
  Philox4x32 g(4, 0);
  double parseval = 0, roundtrip = 0, homog = 0, tri = 0, rmin = 1e300, rmax = 0;
  for (int t = 0; t < 1000; ++t) {
    PiecewiseConstantFn f = random_fn(g, K), h = random_fn(g, K);
    HaarCoeffs c = haar_analysis(f);
    double e = c.mean * c.mean;
    for (auto& lv : c.details)
      for (double d : lv) e += d * d;
    double l22 = f.l2() * f.l2();
    parseval = std::max(parseval, std::abs(e - l22) / std::max(1.0, l22));
    PiecewiseConstantFn r = haar_synthesis(c);
    for (std::size_t i = 0; i < f.size(); ++i) roundtrip = std::max(roundtrip, std::abs(r.values[i] - f.values[i]));
    double n = besov_norm_haar(f, bp), m = 2 * g.uniform() - 1;
    if (m == 0) m = 0.5;
    homog = std::max(homog, std::abs(besov_norm_haar(m * f, bp) - std::abs(m) * n) / std::max(1e-300, std::abs(m) * n));
    double no = besov_norm_osc(f, bp.s);
    homog = std::max(homog, std::abs(besov_norm_osc(m * f, bp.s) - std::abs(m) * no) / std::max(1e-300, std::abs(m) * no));
    double sum = besov_norm_haar(f + h, bp), rhs = n + besov_norm_haar(h, bp);
    tri = std::max(tri, (sum - rhs) / std::max(1.0, rhs));
    double so = besov_norm_osc(f + h, bp.s), ro = no + besov_norm_osc(h, bp.s);
    tri = std::max(tri, (so - ro) / std::max(1.0, ro));
    if (n > 0) {
      rmin = std::min(rmin, no / n);
      rmax = std::max(rmax, no / n);
    }
  }
  o.require(parseval <= kParsevalTol, "parseval " + f6(parseval));
  o.require(roundtrip <= kRoundtripTol, "roundtrip " + f6(roundtrip));
  o.require(homog <= kHomogeneityTol, "homogeneity " + f6(homog));
  o.require(tri <= kTriangleTol, "triangle " + f6(tri));
  o.require(std::isfinite(rmax / rmin) && rmin > 0, "equivalence factor not finite");
  o.note("parseval " + f6(parseval) + ", roundtrip " + f6(roundtrip) + ", osc/haar in [" + f6(rmin) + "," + f6(rmax) +
         "], factor " + f6(rmax / rmin));
}

// ---- 5

void remark_potential_sums(Outcome& o) {
  const int K = 16;
  const double p = 2;
  auto f = project([](double x) { return std::max(0.0, remark_potential(x)); }, K);
  InfChain ic = inf_chain_level_sums(f, p);
  double early = 0, late = 0;
  for (int k = 1; k <= K; ++k) (k <= 11 ? early : late) = std::max(k <= 11 ? early : late, ic.level_sums[k]);
  o.require(std::isfinite(ic.sup), "level sums not finite");
  o.require(late <= kPlateauFactor * early, "levels 12..16 max " + f6(late) + " vs levels 1..11 max " + f6(early));
  double C = ic.sup * (1 - std::pow(2.0, 1 - p));
  o.note("sup level sum " + f6(ic.sup) + " at k=" + std::to_string(ic.argsup) + ", empirical C " + f6(C));
}

// ---- 6

void wild_transition(Outcome& o) {
  EscapeReport a = wild_escape(1, 1, 4, 10000, 100000);
  o.require(a.escaped >= kEscapeHigh, "alpha=1 escaped " + f6(a.escaped));
  double exact = std::abs(skew_drift_exact());
  o.require(std::abs(std::abs(a.drift) - kDriftTarget) <= kDriftTol, "drift " + f6(a.drift));
  o.require(std::abs(exact - kDriftTarget) <= 1e-15, "exact drift " + f6(exact));
  // T = 1e3: the onto branches reach [0,2^-20) with probability about 1e-6 per step
  EscapeReport b = wild_escape(8, 1, 16, 10000, 1000);
  o.require(b.escaped <= kEscapeLow, "alpha=8 escaped " + f6(b.escaped));
  WildOptions opt;
  opt.i_max = 30;
  AcimResult r = acim(wild_family(8, 1, 16, opt), 14);
  o.require(r.lambda >= kWildLambdaMin, "alpha=8 lambda1 " + f6(r.lambda));
  o.note("alpha=1 escaped " + f6(a.escaped) + " drift " + f6(a.drift) + "+-" + f6(a.drift_se) + " exact " + f6(exact) +
         "; alpha=8 escaped " + f6(b.escaped) + " lambda1 " + f6(r.lambda));
}

// ---- 7

void regular_domains(Outcome& o) {
  std::vector<Interval> iv;
  for (int r : {0, 2, 3, 5, 8}) iv.push_back({std::ldexp(1.0, -(r + 1)), std::ldexp(1.0, -r)});
  for (double alpha : {0.5, 0.75}) {
    auto c = greedy_regular_decompose(Region::intervals(iv), alpha, 16);
    auto v = verify_regular_domain(c);
    o.require(v.pass && c.lambda < 1, "union region alpha=" + f6(alpha) + ": " + v.reason);
    o.note("union alpha=" + f6(alpha) + " C=" + f6(c.C) + " lambda=" + f6(c.lambda));
  }
  for (double sp : {0.1, 0.25}) {
    double lo = 1e300, hi = 0;
    for (double asp : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      auto c = greedy_regular_decompose(Region::rects({{0, 0.5, 0, 0.5 / asp}}), 1 - sp, 14);
      auto v = verify_regular_domain(c);
      o.require(v.pass && c.lambda < 1, "rectangle aspect " + f6(asp) + ": " + v.reason);
      double ratio = c.C / std::pow(asp, sp);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      o.require(ratio <= kAspectFactor && ratio >= 1 / kAspectFactor, "aspect " + f6(asp) + " ratio " + f6(ratio));
    }
    o.note("sp=" + f6(sp) + " C/aspect^sp in [" + f6(lo) + "," + f6(hi) + "]");
  }
}

// ---- 8

void lorenz_suite(Outcome& o) {
  Philox4x32 g(8, 0);
  double sup = 0;
  for (int t = 0; t < 1000; ++t) {
    double gam = 0.05 + 3 * g.uniform();
    double x[3] = {g.uniform(), g.uniform(), g.uniform()};
    std::sort(x, x + 3);
    if (!(x[0] < x[1])) continue;
    sup = std::max(sup, le2_quotient(gam, x[0], x[1], x[2]));
  }
  o.require(sup <= 1 + kLe2Tol, "le2 sup " + f6(sup));
  o.note("le2 sup " + f6(sup));
  for (double gam : {0.5, 1.0, 2.0}) {
    // the atom bound needs s < min(1, gamma), the LY bound the same
    BesovParams bp(gam < 1 ? 0.25 : 0.5, 1, 1);
    Calibration cal = calibrate_lorenz(gam, bp, 1);
    int bad = 0;
    for (auto& a : lorenz_corpus(gam, 2, 50)) bad += !lorenz_atom_bound(a, bp, cal.constant).ok();
    o.require(bad == 0, std::to_string(bad) + " atom bounds violated for gamma=" + f6(gam));
    MapSpec m = lorenz_map(gam);
    const int K = 13;
    auto fits = ly_fit(ulam_matrix(m, K), bp, 8, make_probes(1, K, bp));
    double bound = std::pow(m.min_expansion(), -bp.s);
    o.require(fits[8].lambda_root <= bound + kBoundSlack, "gamma=" + f6(gam) + " root " + f6(fits[8].lambda_root));
    o.note("gamma=" + f6(gam) + " s=" + f6(bp.s) + " root8=" + f6(fits[8].lambda_root) + " bound=" + f6(bound));
  }
}

// ---- 9

void winky(Outcome& o) {
  MapSpec m = winky_face(3, winky_default_targets(3));
  BesovParams bp(0.3, 1, 1);
  std::vector<SupportReport> reps;
  SparseOperator last;
  for (int K : {6, 7, 8}) {
    SparseOperator op = ulam_matrix(m, K);
    o.require(op.mass_defect() <= kMassTol, "mass defect " + f6(op.mass_defect()) + " at K=" + std::to_string(K));
    AcimResult a = acim(op);
    o.require(a.converged && std::abs(a.lambda - 1) <= kLambdaOneTol, "acim at K=" + std::to_string(K));
    reps.push_back(support_report(a.density));
    if (K == 8) {
      ForwardCheck fc = support_forward_check(m, reps.back());
      o.require(fc.ok(), "support not forward invariant: " + f6(fc.uncovered));
      last = std::move(op);
    }
  }
  SupportStability st = support_stability(reps);
  o.require(st.stable, "support changes by " + f6(st.max_rel_change));
  auto fits = ly_fit(last, bp, 8, make_probes(2, 8, bp));
  double bound = std::pow(m.min_expansion(), -2 * bp.s);
  double worst = 0;
  for (int j = 1; j <= 8; ++j) worst = std::max(worst, fits[j].lambda_root);
  o.require(fits[8].lambda_root <= bound + kBoundSlack, "root " + f6(fits[8].lambda_root));
  o.note("support " + f6(reps[0].measure) + "," + f6(reps[1].measure) + "," + f6(reps[2].measure) + "; root8 " +
         f6(fits[8].lambda_root) + " (max over j " + f6(worst) + ") bound " + f6(bound));
}

// ---- 10

void inclusions(Outcome& o) {
  std::vector<PiecewiseConstantFn> fs;
  std::vector<std::string> ids;
  inclusion_corpus(10, 100, 777, fs, ids);
  InclusionResult r = inclusion_suite(fs, ids, 0.5, kInclusionSlack);
  o.require(fs.size() == 100, "corpus size " + std::to_string(fs.size()));
  o.require(r.pass, std::to_string(r.failures) + " violations");
  o.note("worst lhs/rhs keller " + f6(r.worst_keller) + ", liverani " + f6(r.worst_liverani) + ", butterley " +
         f6(r.worst_butterley));
}

}  // namespace

int main() {
  criterion(1, 10, toy_model);
  criterion(2, 120, tent_family);
  criterion(3, 30, partition_sums);
  criterion(4, 30, haar_machinery);
  criterion(5, 20, remark_potential_sums);
  criterion(6, 300, wild_transition);
  criterion(7, 60, regular_domains);
  criterion(8, 120, lorenz_suite);
  criterion(9, 180, winky);
  criterion(10, 60, inclusions);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
