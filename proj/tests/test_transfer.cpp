#include <cmath>

#include "bsv/transfer.hpp"
#include "doctest.h"

using namespace bsv;

TEST_CASE("Ulam matrix of the doubling map") {
  SparseOperator op = ulam_matrix(linear_circle(2), 4);
  CHECK(op.n() == 16);
  CHECK(op.mass_defect() < 1e-14);
  // Q = [0,1/16) has preimages [0,1/32) and [1/2,1/2+1/32)
  CHECK(op.at(0, 0) == doctest::Approx(0.5));
  CHECK(op.at(0, 8) == doctest::Approx(0.5));
  PiecewiseConstantFn one(1, 4, 1.0);
  auto r = apply(op, one);
  for (double v : r.values) CHECK(v == doctest::Approx(1));
}

TEST_CASE("mass balance across the bestiary") {
  for (auto m : {tent(0.8), lorenz_map(1.0), markov_holder(2, 0.2), beta_map(2.5)}) CHECK(ulam_matrix(m, 10).mass_defect() < 1e-10);
  CHECK(ulam_matrix(winky_face(3, winky_default_targets(3)), 6).mass_defect() < 1e-10);
  // only the cell at 0 loses the omitted mass
  MapSpec wm = wild_family(8, 1, 16, {20, false});
  SparseOperator w = ulam_matrix(wm, 10);
  CHECK(w.mass_defect() <= wm.omitted_mass * 1024 * (1 + 1e-9));
  auto cm = w.column_mass();
  for (std::size_t c = 1; c < cm.size(); ++c) CHECK(std::abs(cm[c] - 1.0 / 1024) < 1e-12);
}

TEST_CASE("Haar details move down one level under f2") {
  SparseOperator op = ulam_matrix(linear_circle(2), 8);
  auto h = apply(op, haar_fn(GridCell(1, 3, 5), 8));
  HaarCoeffs c = haar_analysis(h);
  double other = 0;
  for (int k = 0; k < 8; ++k)
    for (std::size_t i = 0; i < c.details[k].size(); ++i)
      if (!(k == 2 && i == 1)) other += std::abs(c.details[k][i]);
  CHECK(other < 1e-13);
  CHECK(std::abs(c.details[2][1]) == doctest::Approx(std::sqrt(0.5)));
  auto z = apply(op, haar_fn(GridCell(1, 0, 0), 8));
  CHECK(z.l1() < 1e-14);
}

TEST_CASE("exact atom action multiplier") {
  for (int l : {2, 3}) {
    BesovParams bp(0.5, 1, 1);
    auto acts = exact_atom_action(linear_circle(l), bp, 6);
    for (auto& a : acts)
      if (a.level > 0) CHECK(a.multiplier == doctest::Approx(std::pow(l, -0.5)).epsilon(1e-14));
  }
  CHECK_THROWS(exact_atom_action(tent(0.8), BesovParams(0.5, 1, 1), 4));
}

TEST_CASE("weighted matrix with tau = 1 matches Ulam") {
  MapSpec m = markov_holder(2, 0.2);
  SparseOperator a = ulam_matrix(m, 7), b = weighted_matrix(m, 1.0, 7, 8);
  double d = 0;
  for (std::size_t r = 0; r < a.n(); ++r)
    for (std::size_t c = 0; c < a.n(); ++c) d = std::max(d, std::abs(a.at(r, c) - b.at(r, c)));
  CHECK(d < 1e-8);
}

TEST_CASE("COO export") {
  std::string s = export_coo(ulam_matrix(linear_circle(2), 2));
  CHECK(s.find("\nrow,col,weight\n") != std::string::npos);
}
