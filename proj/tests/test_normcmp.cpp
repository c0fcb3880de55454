#include <cmath>

#include "bsv/normcmp.hpp"
#include "doctest.h"

using namespace bsv;

namespace {
PiecewiseConstantFn indicator(double a, double b, int K) { return project_indicator(Region::intervals({{a, b}}), K); }
PiecewiseConstantFn staircase(int n, int K) {
  return project([n](double x) { return std::floor(x * n) / n; }, K);
}
}  // namespace

TEST_CASE("Keller variation") {
  CHECK(keller_var(PiecewiseConstantFn(1, 8, 3.0), 0.5) == doctest::Approx(0));
  CHECK(keller_var(indicator(0, 0.5, 8), 0.5) == doctest::Approx(std::sqrt(2.0)));
  for (int n : {4, 16, 64}) CHECK(keller_var(staircase(n, 10), 0.5) < 4);
  auto o = keller_osc(indicator(0, 0.5, 6));
  CHECK(o.size() == 7);
}

TEST_CASE("BV and the Butterley bound") {
  CHECK(bv_norm(indicator(0.25, 0.5, 6)) == doctest::Approx(2.25));
  CHECK(butterley_upper(PiecewiseConstantFn(1, 8, 3.0), 0.5).value == doctest::Approx(3));
  auto b = butterley_upper(indicator(0, 0.5, 8), 0.5);
  CHECK(b.band_value.size() == 10);
  CHECK(b.value >= 1);
}

TEST_CASE("Holder seminorm of node functions") {
  std::vector<double> lin(65);
  for (int i = 0; i <= 64; ++i) lin[i] = i / 64.0;
  CHECK(holder_seminorm(lin, 0.5) == doctest::Approx(1));
  CHECK(holder_seminorm(std::vector<double>(65, 2.0), 0.5) == 0);
}

TEST_CASE("Liverani lower bound") {
  PiecewiseConstantFn c(1, 8, -1.5);
  CHECK(liverani_lower(c, 0.5).value <= 1.5 + 1e-12);
  PiecewiseConstantFn f = indicator(0.2, 0.7, 8), g = -1.0 * f;
  CHECK(liverani_lower(f, 0.5).value == doctest::Approx(liverani_lower(g, 0.5).value));
  auto dict = liverani_dictionary(8, 0.5);
  double a = liverani_lower(f, 0.5, dict, 10, false).value, b = liverani_lower(f, 0.5, dict, 40, false).value;
  CHECK(a <= b + 1e-15);
}

TEST_CASE("inclusions on a small corpus") {
  std::vector<PiecewiseConstantFn> fs;
  std::vector<std::string> ids;
  inclusion_corpus(8, 40, 1, fs, ids);
  CHECK(fs.size() == 40);
  CHECK(ids.size() == 40);
  InclusionResult r = inclusion_suite(fs, ids, 0.5);
  CHECK(r.pass);
  CHECK(r.failures == 0);
}
