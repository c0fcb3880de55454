#pragma once
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsv {

constexpr int kMaxLevel = 30;

// Dyadic cell [i 2^-k, (i+1) 2^-k) per axis.
struct GridCell {
  int dim = 1;
  int level = 0;
  std::array<std::uint32_t, 2> idx{0, 0};

  GridCell() = default;
  GridCell(int d, int k, std::uint32_t ix, std::uint32_t iy = 0);

  double side() const;
  double measure() const;
  double lo(int axis) const;
  double hi(int axis) const;
  std::vector<GridCell> children() const;
  GridCell parent() const;
  GridCell ancestor(int k) const;
  bool contains(const GridCell& c) const;
  // iy * 2^k + ix; the ordering used by every level-k array.
  std::uint64_t flat() const;
  static GridCell from_flat(int dim, int level, std::uint64_t f);

  bool operator==(const GridCell& o) const {
    return dim == o.dim && level == o.level && idx == o.idx;
  }
  bool operator<(const GridCell& o) const;
  std::string str() const;
};

std::uint64_t cells_at(int dim, int level);

GridCell locate(const std::vector<double>& point, int level);
GridCell locate1(double x, int level);

struct Interval {
  double a, b;
};
struct Rect {
  double x0, x1, y0, y1;
};
struct Pt {
  double x, y;
};

// Finite union of intervals (dim 1), of axis-aligned rectangles, or one
// simple polygon (dim 2). Components may overlap; measure handles that.
class Region {
 public:
  static Region intervals(std::vector<Interval> iv);
  static Region rects(std::vector<Rect> r);
  static Region polygon(std::vector<Pt> verts);

  int dim() const { return dim_; }
  double measure() const;
  // Measure of region ∩ box, exact up to rounding.
  double overlap(double x0, double x1, double y0 = 0, double y1 = 1) const;
  double overlap(const GridCell& c) const;
  bool contains_point(double x, double y = 0) const;
  std::string kind() const;
  const std::vector<Interval>& ivs() const { return iv_; }
  const std::vector<Rect>& rcs() const { return rc_; }
  const std::vector<Pt>& poly() const { return poly_; }

 private:
  int dim_ = 1;
  int kind_ = 0;  // 0 intervals, 1 rects, 2 polygon
  std::vector<Interval> iv_;
  std::vector<Rect> rc_;
  std::vector<Pt> poly_;
};

struct Cover {
  std::vector<GridCell> inner, boundary;
};

// Cells fully inside (up to a relative 1e-12 of cell measure) go to inner,
// cells meeting the region on positive measure go to boundary.
Cover cover(const Region& r, int level);

double polygon_area(const std::vector<Pt>& p);
// Sutherland-Hodgman against an axis-aligned box.
std::vector<Pt> clip_to_box(const std::vector<Pt>& p, double x0, double x1,
                            double y0, double y1);

}  // namespace bsv
