#include <cmath>

#include "bsv/grid.hpp"
#include "doctest.h"

using namespace bsv;

TEST_CASE("cell geometry and flat indexing") {
  GridCell c(2, 3, 5, 6);
  CHECK(c.measure() == doctest::Approx(1.0 / 64));
  CHECK(c.lo(0) == 5.0 / 8);
  CHECK(c.hi(1) == 7.0 / 8);
  CHECK(c.flat() == 6u * 8 + 5);
  CHECK(GridCell::from_flat(2, 3, c.flat()) == c);
  auto ch = c.children();
  CHECK(ch.size() == 4);
  for (auto& k : ch) {
    CHECK(k.parent() == c);
    CHECK(c.contains(k));
  }
  CHECK(GridCell(1, 5, 17).ancestor(2) == GridCell(1, 2, 2));
  CHECK(cells_at(2, 4) == 256u);
}

TEST_CASE("cell validation") {
  CHECK_THROWS_AS(GridCell(1, 3, 8), std::invalid_argument);
  CHECK_THROWS_AS(GridCell(3, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(GridCell(1, kMaxLevel + 1, 0), std::invalid_argument);
  CHECK_THROWS(GridCell(1, 0, 0).parent());
}

TEST_CASE("half-open location") {
  CHECK(locate1(0.5, 1).idx[0] == 1);
  CHECK(locate1(0.4999, 1).idx[0] == 0);
  CHECK(locate({0.25, 0.75}, 2) == GridCell(2, 2, 1, 3));
  CHECK_THROWS(locate1(1.0, 3));
}

TEST_CASE("exact region measures") {
  Region iv = Region::intervals({{0, 0.5}, {0.25, 0.75}});
  CHECK(iv.measure() == doctest::Approx(0.75).epsilon(1e-15));
  Region rc = Region::rects({{0, 0.5, 0, 0.5}, {0.25, 0.75, 0.25, 0.75}});
  CHECK(rc.measure() == doctest::Approx(0.4375).epsilon(1e-15));
  Region tri = Region::polygon({{0, 0}, {1, 0}, {0, 1}});
  CHECK(tri.measure() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tri.overlap(GridCell(2, 1, 0, 0)) == doctest::Approx(0.25));
  CHECK(polygon_area(clip_to_box({{0, 0}, {1, 0}, {0, 1}}, 0.5, 1, 0, 1)) == doctest::Approx(0.125));
}

TEST_CASE("cover classification") {
  Cover a = cover(Region::intervals({{0, 0.5}}), 1);
  REQUIRE(a.inner.size() == 1);
  CHECK(a.inner[0] == GridCell(1, 1, 0));
  CHECK(a.boundary.empty());
  // dyadic rectangle: every cell is either inside or disjoint
  Cover r = cover(Region::rects({{0, 0.5, 0, 0.25}}), 2);
  CHECK(r.inner.size() == 2);
  CHECK(r.boundary.empty());
  Cover t = cover(Region::polygon({{0, 0}, {1, 0}, {0, 1}}), 4);
  double inner = 0, bd = 0;
  for (auto& c : t.inner) inner += c.measure();
  for (auto& c : t.boundary) bd += c.measure();
  CHECK(inner <= 0.5);
  CHECK(inner + bd >= 0.5);
  CHECK(t.boundary.size() == 16);
}
