#include "bsv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bsv {

GridCell::GridCell(int d, int k, std::uint32_t ix, std::uint32_t iy)
    : dim(d), level(k), idx{ix, d == 2 ? iy : 0u} {
  if (d != 1 && d != 2) throw std::invalid_argument("GridCell: dim must be 1 or 2");
  if (k < 0 || k > kMaxLevel) throw std::invalid_argument("GridCell: level out of range");
  std::uint64_t n = 1ull << k;
  if (ix >= n || (d == 2 && iy >= n)) throw std::invalid_argument("GridCell: index out of range");
}

double GridCell::side() const { return std::ldexp(1.0, -level); }
double GridCell::measure() const { return std::ldexp(1.0, -level * dim); }
double GridCell::lo(int axis) const { return std::ldexp(double(idx[axis]), -level); }
double GridCell::hi(int axis) const { return std::ldexp(double(idx[axis]) + 1.0, -level); }

std::vector<GridCell> GridCell::children() const {
  if (level >= kMaxLevel) throw std::out_of_range("GridCell: level cap reached");
  std::vector<GridCell> out;
  if (dim == 1) {
    out.emplace_back(1, level + 1, 2 * idx[0]);
    out.emplace_back(1, level + 1, 2 * idx[0] + 1);
  } else {
    for (std::uint32_t cy = 0; cy < 2; ++cy)
      for (std::uint32_t cx = 0; cx < 2; ++cx)
        out.emplace_back(2, level + 1, 2 * idx[0] + cx, 2 * idx[1] + cy);
  }
  return out;
}

GridCell GridCell::parent() const {
  if (level == 0) throw std::out_of_range("GridCell: root has no parent");
  return GridCell(dim, level - 1, idx[0] >> 1, idx[1] >> 1);
}

GridCell GridCell::ancestor(int k) const {
  if (k > level || k < 0) throw std::out_of_range("GridCell: bad ancestor level");
  int sh = level - k;
  return GridCell(dim, k, idx[0] >> sh, idx[1] >> sh);
}

bool GridCell::contains(const GridCell& c) const {
  if (c.dim != dim || c.level < level) return false;
  return c.ancestor(level) == *this;
}

std::uint64_t GridCell::flat() const {
  if (dim == 1) return idx[0];
  return (std::uint64_t(idx[1]) << level) + idx[0];
}

GridCell GridCell::from_flat(int dim, int level, std::uint64_t f) {
  if (dim == 1) return GridCell(1, level, std::uint32_t(f));
  std::uint64_t mask = (1ull << level) - 1;
  return GridCell(2, level, std::uint32_t(f & mask), std::uint32_t(f >> level));
}

bool GridCell::operator<(const GridCell& o) const {
  if (dim != o.dim) return dim < o.dim;
  if (level != o.level) return level < o.level;
  if (idx[1] != o.idx[1]) return idx[1] < o.idx[1];
  return idx[0] < o.idx[0];
}

std::string GridCell::str() const {
  std::ostringstream os;
  os << "(" << level << ":" << idx[0];
  if (dim == 2) os << "," << idx[1];
  os << ")";
  return os.str();
}

std::uint64_t cells_at(int dim, int level) { return 1ull << (level * dim); }

namespace {
std::uint32_t axis_index(double x, int level) {
  if (!(x >= 0.0 && x < 1.0)) throw std::out_of_range("locate: point outside [0,1)");
  // ldexp is exact, so floor gives the half-open cell.
  double v = std::floor(std::ldexp(x, level));
  std::uint64_t n = 1ull << level;
  std::uint64_t i = std::uint64_t(v);
  return std::uint32_t(std::min<std::uint64_t>(i, n - 1));
}
}  // namespace

GridCell locate1(double x, int level) { return GridCell(1, level, axis_index(x, level)); }

GridCell locate(const std::vector<double>& p, int level) {
  if (p.size() == 1) return locate1(p[0], level);
  if (p.size() == 2) return GridCell(2, level, axis_index(p[0], level), axis_index(p[1], level));
  throw std::invalid_argument("locate: point must have 1 or 2 coordinates");
}

// ---- regions

namespace {
bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

double union_length(std::vector<Interval> iv) {
  std::sort(iv.begin(), iv.end(), [](auto& a, auto& b) { return a.a < b.a; });
  double tot = 0, ca = 0, cb = -1;
  bool open = false;
  for (auto& v : iv) {
    if (v.b <= v.a) continue;
    if (!open || v.a > cb) {
      if (open) tot += cb - ca;
      ca = v.a;
      cb = v.b;
      open = true;
    } else {
      cb = std::max(cb, v.b);
    }
  }
  if (open) tot += cb - ca;
  return tot;
}
}  // namespace

Region Region::intervals(std::vector<Interval> iv) {
  if (iv.empty()) throw std::invalid_argument("Region: empty interval list");
  for (auto& v : iv)
    if (!(in_unit(v.a) && in_unit(v.b) && v.b > v.a))
      throw std::invalid_argument("Region: interval must satisfy 0<=a<b<=1");
  Region r;
  r.dim_ = 1;
  r.kind_ = 0;
  r.iv_ = std::move(iv);
  return r;
}

Region Region::rects(std::vector<Rect> rc) {
  if (rc.empty()) throw std::invalid_argument("Region: empty rectangle list");
  for (auto& v : rc)
    if (!(in_unit(v.x0) && in_unit(v.x1) && in_unit(v.y0) && in_unit(v.y1) && v.x1 > v.x0 &&
          v.y1 > v.y0))
      throw std::invalid_argument("Region: rectangle outside unit square or degenerate");
  Region r;
  r.dim_ = 2;
  r.kind_ = 1;
  r.rc_ = std::move(rc);
  return r;
}

Region Region::polygon(std::vector<Pt> verts) {
  if (verts.size() < 3) throw std::invalid_argument("Region: polygon needs 3 vertices");
  for (auto& p : verts)
    if (!(in_unit(p.x) && in_unit(p.y))) throw std::invalid_argument("Region: vertex outside unit square");
  if (std::abs(polygon_area(verts)) <= 0) throw std::invalid_argument("Region: polygon of zero area");
  Region r;
  r.dim_ = 2;
  r.kind_ = 2;
  r.poly_ = std::move(verts);
  return r;
}

std::string Region::kind() const {
  return kind_ == 0 ? "intervals" : kind_ == 1 ? "rects" : "polygon";
}

double Region::measure() const { return overlap(0, 1, 0, 1); }

double Region::overlap(const GridCell& c) const {
  if (c.dim != dim_) throw std::invalid_argument("Region: dimension mismatch");
  if (dim_ == 1) return overlap(c.lo(0), c.hi(0));
  return overlap(c.lo(0), c.hi(0), c.lo(1), c.hi(1));
}

double Region::overlap(double x0, double x1, double y0, double y1) const {
  if (kind_ == 0) {
    std::vector<Interval> cl;
    for (auto& v : iv_) cl.push_back({std::max(v.a, x0), std::min(v.b, x1)});
    return union_length(cl);
  }
  if (kind_ == 1) {
    std::vector<Rect> cl;
    std::vector<double> xs;
    for (auto& v : rc_) {
      Rect c{std::max(v.x0, x0), std::min(v.x1, x1), std::max(v.y0, y0), std::min(v.y1, y1)};
      if (c.x1 > c.x0 && c.y1 > c.y0) {
        cl.push_back(c);
        xs.push_back(c.x0);
        xs.push_back(c.x1);
      }
    }
    if (cl.empty()) return 0.0;
    if (cl.size() == 1) return (cl[0].x1 - cl[0].x0) * (cl[0].y1 - cl[0].y0);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double area = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      double xm = 0.5 * (xs[i] + xs[i + 1]);
      std::vector<Interval> ys;
      for (auto& c : cl)
        if (c.x0 <= xm && xm < c.x1) ys.push_back({c.y0, c.y1});
      area += (xs[i + 1] - xs[i]) * union_length(ys);
    }
    return area;
  }
  return std::abs(polygon_area(clip_to_box(poly_, x0, x1, y0, y1)));
}

bool Region::contains_point(double x, double y) const {
  if (kind_ == 0) {
    for (auto& v : iv_)
      if (v.a <= x && x < v.b) return true;
    return false;
  }
  if (kind_ == 1) {
    for (auto& v : rc_)
      if (v.x0 <= x && x < v.x1 && v.y0 <= y && y < v.y1) return true;
    return false;
  }
  bool in = false;
  std::size_t n = poly_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Pt &a = poly_[i], &b = poly_[j];
    if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

double polygon_area(const std::vector<Pt>& p) {
  double s = 0;
  std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Pt &a = p[i], &b = p[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

std::vector<Pt> clip_to_box(const std::vector<Pt>& poly, double x0, double x1, double y0,
                            double y1) {
  std::vector<Pt> out = poly;
  // edge e: 0 x>=x0, 1 x<=x1, 2 y>=y0, 3 y<=y1
  auto inside = [&](const Pt& p, int e) {
    switch (e) {
      case 0: return p.x >= x0;
      case 1: return p.x <= x1;
      case 2: return p.y >= y0;
      default: return p.y <= y1;
    }
  };
  auto cut = [&](const Pt& a, const Pt& b, int e) {
    double t;
    if (e < 2) {
      double c = e == 0 ? x0 : x1;
      t = (c - a.x) / (b.x - a.x);
      return Pt{c, a.y + t * (b.y - a.y)};
    }
    double c = e == 2 ? y0 : y1;
    t = (c - a.y) / (b.y - a.y);
    return Pt{a.x + t * (b.x - a.x), c};
  };
  for (int e = 0; e < 4 && !out.empty(); ++e) {
    std::vector<Pt> in = std::move(out);
    out.clear();
    std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Pt& cur = in[i];
      const Pt& prev = in[(i + n - 1) % n];
      bool ci = inside(cur, e), pi = inside(prev, e);
      if (ci) {
        if (!pi) out.push_back(cut(prev, cur, e));
        out.push_back(cur);
      } else if (pi) {
        out.push_back(cut(prev, cur, e));
      }
    }
  }
  return out;
}

namespace {
void cover_rec(const Region& r, const GridCell& c, int level, Cover& out) {
  double ov = r.overlap(c);
  double m = c.measure();
  if (ov <= 1e-12 * m) return;
  if (ov >= m * (1 - 1e-12)) {
    // whole subtree inside
    int sh = level - c.level;
    std::uint64_t n = 1ull << sh;
    if (c.dim == 1) {
      for (std::uint64_t i = 0; i < n; ++i)
        out.inner.emplace_back(1, level, std::uint32_t((std::uint64_t(c.idx[0]) << sh) + i));
    } else {
      for (std::uint64_t j = 0; j < n; ++j)
        for (std::uint64_t i = 0; i < n; ++i)
          out.inner.emplace_back(2, level, std::uint32_t((std::uint64_t(c.idx[0]) << sh) + i),
                                 std::uint32_t((std::uint64_t(c.idx[1]) << sh) + j));
    }
    return;
  }
  if (c.level == level) {
    out.boundary.push_back(c);
    return;
  }
  for (auto& ch : c.children()) cover_rec(r, ch, level, out);
}
}  // namespace

Cover cover(const Region& r, int level) {
  if (level < 0 || level > kMaxLevel) throw std::invalid_argument("cover: bad level");
  Cover out;
  cover_rec(r, GridCell(r.dim(), 0, 0, 0), level, out);
  std::sort(out.inner.begin(), out.inner.end());
  std::sort(out.boundary.begin(), out.boundary.end());
  return out;
}

}  // namespace bsv
