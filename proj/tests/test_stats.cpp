#include <cmath>

#include "bsv/rng.hpp"
#include "bsv/stats.hpp"
#include "doctest.h"

using namespace bsv;

TEST_CASE("Philox known answers") {
  auto z = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(z == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  const std::uint32_t o = 0xffffffffu;
  auto w = Philox4x32::block({o, o, o, o}, {o, o});
  CHECK(w == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  Philox4x32 a(5, 9), b(5, 9), c(5, 10);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0);
    CHECK(u < 1);
    differs |= u != c.uniform();
  }
  CHECK(differs);
}

TEST_CASE("acim of the doubling map") {
  AcimResult a = acim(linear_circle(2), 8, 1e-10, BesovParams(0.5, 1, 1));
  CHECK(a.converged);
  CHECK_FALSE(a.drains);
  CHECK(a.density.integral() == doctest::Approx(1));
  CHECK(a.besov_norm == doctest::Approx(1));
}

TEST_CASE("acim of a beta map is bounded away from zero") {
  AcimResult a = acim(beta_map(2.5), 10);
  CHECK(a.converged);
  double mn = 1e300;
  for (double v : a.density.values) mn = std::min(mn, v);
  CHECK(mn > 0.1);
}

TEST_CASE("correlations") {
  SparseOperator op = ulam_matrix(linear_circle(2), 8);
  PiecewiseConstantFn rho(1, 8, 1.0), phi = project([](double x) { return x * x; }, 8);
  auto cst = correlations(op, rho, phi, PiecewiseConstantFn(1, 8, 2.0), 6);
  for (double c : cst.C) CHECK(c < 1e-14);
  PiecewiseConstantFn h = haar_fn(GridCell(1, 1, 0), 8);
  auto hc = correlations(op, rho, phi, h, 5);
  CHECK(hc.C[0] == doctest::Approx(std::abs(inner(phi, h) - phi.integral() * h.integral())));
  for (int n = 2; n <= 5; ++n) CHECK(hc.C[n] < 1e-14);
}

TEST_CASE("correlation decay rate for tent 0.8 is at most the second modulus") {
  SparseOperator op = ulam_matrix(tent(0.8), 10);
  EigenResult e = leading_eigen(op);
  SecondModulus s = second_modulus(op, e, 0);
  AcimResult a = acim(op);
  PiecewiseConstantFn phi = project([](double x) { return x; }, 10), psi = project([](double x) { return std::cos(3 * x); }, 10);
  PiecewiseConstantFn pr = psi;
  for (std::size_t i = 0; i < pr.size(); ++i) pr.values[i] *= a.density.values[i];
  auto c = correlations(op, a.density, phi, pr, 40);
  CHECK(c.rate <= s.modulus + 0.05);
}

TEST_CASE("decay rate fit recovers a geometric sequence") {
  std::vector<double> C;
  for (int n = 0; n < 30; ++n) C.push_back(3 * std::pow(0.6, n));
  int from = 0, to = 0;
  CHECK(fit_decay_rate(C, from, to) == doctest::Approx(0.6));
  CHECK(to > from);
}

TEST_CASE("wild escape is reproducible and drifts up") {
  EscapeReport a = wild_escape(1, 1, 4, 300, 200, 0x1.0p-20, 11, 2000);
  EscapeReport b = wild_escape(1, 1, 4, 300, 200, 0x1.0p-20, 11, 2000);
  CHECK(a.escaped == b.escaped);
  CHECK(a.drift == b.drift);
  CHECK(a.escaped >= 0);
  CHECK(a.escaped <= 1);
  CHECK(std::abs(a.drift - skew_drift_exact()) < 6 * a.drift_se + 1e-3);
}

TEST_CASE("support reports") {
  PiecewiseConstantFn r(1, 4, 0.0);
  for (int i = 0; i < 8; ++i) r.values[i] = 2;
  SupportReport rep = support_report(r);
  CHECK(rep.measure == doctest::Approx(0.5));
  CHECK(rep.cells.size() == 8);
  SupportReport r2 = rep, r3 = rep;
  r2.measure = 0.505;
  r3.measure = 0.6;
  CHECK(support_stability({rep, r2}).stable);
  CHECK_FALSE(support_stability({rep, r3}).stable);
  SupportReport full = support_report(PiecewiseConstantFn(1, 6, 1.0));
  CHECK(support_forward_check(linear_circle(2), full).uncovered == doctest::Approx(0));
}
