#include <cmath>

#include "bsv/regular.hpp"
#include "doctest.h"

using namespace bsv;

TEST_CASE("single dyadic cell") {
  auto c = greedy_regular_decompose(Region::intervals({{0.25, 0.5}}), 0.5, 10);
  CHECK(c.k0 == 2);
  CHECK(c.families[2].size() == 1);
  CHECK(c.C == doctest::Approx(1));
  CHECK(verify_regular_domain(c).pass);
}

TEST_CASE("union of L_r intervals is regular with lambda < 1") {
  std::vector<Interval> iv;
  for (int r : {0, 2, 3, 5, 8}) iv.push_back({std::ldexp(1.0, -(r + 1)), std::ldexp(1.0, -r)});
  auto c = greedy_regular_decompose(Region::intervals(iv), 0.5, 16);
  auto v = verify_regular_domain(c);
  CHECK(v.pass);
  CHECK(c.lambda < 1);
}

TEST_CASE("duplicate cell is rejected") {
  auto c = greedy_regular_decompose(Region::rects({{0, 0.5, 0, 0.125}}), 0.8, 8);
  REQUIRE(verify_regular_domain(c).pass);
  c.families[c.k0].push_back(c.families[c.k0].front());
  CHECK_FALSE(verify_regular_domain(c).pass);
}

TEST_CASE("rectangle constants grow with aspect ratio") {
  double sp = 0.25, prev = 0;
  for (double a : {2.0, 4.0, 8.0}) {
    auto c = greedy_regular_decompose(Region::rects({{0, 0.5, 0, 0.5 / a}}), 1 - sp, 12);
    CHECK(verify_regular_domain(c).pass);
    CHECK(c.C >= prev);
    prev = c.C;
  }
}

TEST_CASE("polygon certificate and JSON") {
  auto c = greedy_regular_decompose(Region::polygon({{0.1, 0.1}, {0.9, 0.2}, {0.4, 0.8}}), 0.9, 9);
  CHECK(verify_regular_domain(c).pass);
  std::string j = certificate_json(c);
  CHECK(j.find("\"families\"") != std::string::npos);
  CHECK(j.find("\"lambda\"") != std::string::npos);
  CHECK_THROWS(greedy_regular_decompose(Region::intervals({{0.3, 0.3}}), 0.5, 8));
}
