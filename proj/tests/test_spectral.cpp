#include <cmath>

#include "bsv/spectral.hpp"
#include "doctest.h"

using namespace bsv;

TEST_CASE("doubling map: invariant density and vanishing second modulus") {
  SparseOperator op = ulam_matrix(linear_circle(2), 8);
  EigenResult e = leading_eigen(op);
  CHECK(e.converged);
  CHECK(e.lambda == doctest::Approx(1).epsilon(1e-12));
  for (double v : e.v.values) CHECK(v == doctest::Approx(1).epsilon(1e-9));
  SecondModulus s = second_modulus(op, e, 512);
  CHECK(s.modulus < 1e-8);
}

TEST_CASE("full tent is uniform") {
  EigenResult e = leading_eigen(ulam_matrix(tent(1.0), 8));
  CHECK(e.converged);
  for (double v : e.v.values) CHECK(v == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("tent 0.8 has a spectral gap that is stable in K") {
  std::vector<double> mods;
  for (int K : {8, 9, 10}) {
    SparseOperator op = ulam_matrix(tent(0.8), K);
    EigenResult e = leading_eigen(op);
    REQUIRE(e.converged);
    SecondModulus s = second_modulus(op, e, K <= 8 ? 4096 : 0);
    CHECK(s.modulus < 1);
    if (s.dense >= 0) CHECK(std::abs(s.dense - s.modulus) < 1e-6);
    mods.push_back(s.modulus);
  }
  CHECK(std::abs(mods[2] - mods[1]) < 0.05);
  CHECK(std::abs(mods[1] - mods[0]) < 0.05);
}

TEST_CASE("dense moduli are sorted") {
  auto m = dense_moduli(ulam_matrix(tent(0.8), 5));
  CHECK(m.size() == 32);
  for (std::size_t i = 1; i < m.size(); ++i) CHECK(m[i] <= m[i - 1] + 1e-15);
  CHECK(m[0] == doctest::Approx(1).epsilon(1e-10));
}

TEST_CASE("LY fit from ratios is a valid bound") {
  std::vector<double> a{0.5, 0.2, 0.9, 0.1}, b{1.0, 0.1, 2.0, 0.05};
  LYFit f = ly_fit_ratios(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] <= f.lambda + f.C * b[i] + 1e-12);
  CHECK(f.lambda <= 0.9);
  LYFit z = ly_fit_ratios({0.3, 0.3}, {0.0, 0.0});
  CHECK(z.lambda == doctest::Approx(0.3));
}

TEST_CASE("LY fit for the doubling map") {
  BesovParams bp(0.5, 1, 1);
  SparseOperator op = ulam_matrix(linear_circle(2), 10);
  ProbeSet ps = make_probes(1, 10, bp, 40, 3);
  CHECK(ps.f.size() == 40);
  auto fits = ly_fit(op, bp, 4, ps);
  REQUIRE(fits.size() == 5);
  CHECK(fits[0].lambda <= 1 + 1e-9);
  CHECK(fits[4].lambda_root < 0.75);
}

TEST_CASE("essential bound formulas") {
  BesovParams bp(0.5, 1, 1);
  CHECK(ess_bound(tent(0.8), bp).value == doctest::Approx(0.790569).epsilon(1e-5));
  CHECK(ess_bound(linear_circle(2), bp).value == doctest::Approx(std::sqrt(0.5)));
  MapSpec w = winky_face(3, winky_default_targets(3));
  BesovParams b2(0.3, 1, 1);
  CHECK(ess_bound(w, b2).value == doctest::Approx(std::pow(w.min_expansion(), -0.6)));
  CHECK(ess_bound(lorenz_map(1.0), bp).value == doctest::Approx(std::pow(1.5, -0.5)));
  CHECK_THROWS_AS(ess_bound(wild_family(1, 1, 4, {20, false}), bp), std::domain_error);
  CHECK_THROWS_AS(ess_bound(besov_jacobian_family(besov_jacobian_default(0.1), 12), bp), std::domain_error);
}

TEST_CASE("topological entropy of tents") {
  CHECK(htop_estimate(tent(1.0)) == doctest::Approx(std::log(2.0)).epsilon(0.03));
  CHECK(htop_estimate(tent(0.8)) == doctest::Approx(std::log(1.6)).epsilon(0.05));
}

TEST_CASE("partition sums of linear maps are exact") {
  for (int l : {2, 3})
    for (int j : {1, 2, 4}) {
      PartitionSum ps = markov_partition_sum(linear_circle(l), j, 0.5, 2.0);
      CHECK(ps.root_p == doctest::Approx(std::pow(l, -0.5)).epsilon(1e-12));
    }
}
