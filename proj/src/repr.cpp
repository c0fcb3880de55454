#include "bsv/repr.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <stdexcept>

namespace bsv {

PiecewiseConstantFn::PiecewiseConstantFn(int d, int k, double fill)
    : dim(d), level(k), values(cells_at(d, k), fill) {
  if (d != 1 && d != 2) throw std::invalid_argument("PiecewiseConstantFn: dim must be 1 or 2");
}

PiecewiseConstantFn::PiecewiseConstantFn(int d, int k, std::vector<double> v)
    : dim(d), level(k), values(std::move(v)) {
  if (values.size() != cells_at(d, k))
    throw std::invalid_argument("PiecewiseConstantFn: value count does not match level");
}

double PiecewiseConstantFn::cell_measure() const { return std::ldexp(1.0, -level * dim); }

double PiecewiseConstantFn::integral() const {
  double s = 0;
  for (double v : values) s += v;
  return s * cell_measure();
}

double PiecewiseConstantFn::l1() const {
  double s = 0;
  for (double v : values) s += std::abs(v);
  return s * cell_measure();
}

double PiecewiseConstantFn::l2() const {
  double s = 0;
  for (double v : values) s += v * v;
  return std::sqrt(s * cell_measure());
}

double PiecewiseConstantFn::operator()(double x, double y) const {
  GridCell c = dim == 1 ? locate1(x, level) : locate({x, y}, level);
  return values[c.flat()];
}

PiecewiseConstantFn& PiecewiseConstantFn::operator+=(const PiecewiseConstantFn& o) {
  if (o.dim != dim || o.level != level) throw std::invalid_argument("PiecewiseConstantFn: shape mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

PiecewiseConstantFn& PiecewiseConstantFn::operator*=(double c) {
  for (double& v : values) v *= c;
  return *this;
}

PiecewiseConstantFn PiecewiseConstantFn::coarsen_to(int k) const {
  if (k > level || k < 0) throw std::invalid_argument("coarsen_to: level must not exceed current");
  PiecewiseConstantFn out(dim, k, 0.0);
  int sh = level - k;
  double scale = std::ldexp(1.0, -sh * dim);
  std::uint64_t n = 1ull << level;
  if (dim == 1) {
    for (std::uint64_t i = 0; i < n; ++i) out.values[i >> sh] += values[i] * scale;
  } else {
    for (std::uint64_t j = 0; j < n; ++j)
      for (std::uint64_t i = 0; i < n; ++i)
        out.values[((j >> sh) << k) + (i >> sh)] += values[(j << level) + i] * scale;
  }
  return out;
}

PiecewiseConstantFn PiecewiseConstantFn::refine_to(int k) const {
  if (k < level) throw std::invalid_argument("refine_to: level must not be below current");
  PiecewiseConstantFn out(dim, k, 0.0);
  int sh = k - level;
  std::uint64_t n = 1ull << k;
  if (dim == 1) {
    for (std::uint64_t i = 0; i < n; ++i) out.values[i] = values[i >> sh];
  } else {
    for (std::uint64_t j = 0; j < n; ++j)
      for (std::uint64_t i = 0; i < n; ++i)
        out.values[(j << k) + i] = values[((j >> sh) << level) + (i >> sh)];
  }
  return out;
}

PiecewiseConstantFn PiecewiseConstantFn::expect(int k) const { return coarsen_to(k).refine_to(level); }

PiecewiseConstantFn operator+(PiecewiseConstantFn a, const PiecewiseConstantFn& b) {
  a += b;
  return a;
}
PiecewiseConstantFn operator-(PiecewiseConstantFn a, const PiecewiseConstantFn& b) {
  a += -1.0 * b;
  return a;
}
PiecewiseConstantFn operator*(double c, PiecewiseConstantFn a) {
  a *= c;
  return a;
}

double inner(const PiecewiseConstantFn& a, const PiecewiseConstantFn& b) {
  if (a.dim != b.dim || a.level != b.level) throw std::invalid_argument("inner: shape mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s * a.cell_measure();
}

// ---- quadrature

namespace {
template <int N>
GLRule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  GLRule r;
  auto a = G::abscissa();
  auto w = G::weights();
  // boost stores the non-negative half of the symmetric rule on [-1,1]
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.5);
      r.w.push_back(0.5 * w[i]);
      continue;
    }
    r.x.push_back(0.5 * (1 - a[i]));
    r.w.push_back(0.5 * w[i]);
    r.x.push_back(0.5 * (1 + a[i]));
    r.w.push_back(0.5 * w[i]);
  }
  return r;
}
}  // namespace

const GLRule& gl_rule(int order) {
  static const GLRule r2 = make_rule<2>(), r4 = make_rule<4>(), r8 = make_rule<8>(),
                      r16 = make_rule<16>(), r32 = make_rule<32>();
  switch (order) {
    case 2: return r2;
    case 4: return r4;
    case 8: return r8;
    case 16: return r16;
    case 32: return r32;
    default: throw std::invalid_argument("gl_rule: order must be 2, 4, 8, 16 or 32");
  }
}

namespace {
double check_finite(double v) {
  if (!std::isfinite(v)) throw std::domain_error("project: non-finite sample");
  return v;
}
}  // namespace

PiecewiseConstantFn project(const Fn1& f, int K, int order) {
  const GLRule& g = gl_rule(order);
  PiecewiseConstantFn out(1, K);
  double h = std::ldexp(1.0, -K);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double a = double(i) * h, s = 0;
    for (std::size_t q = 0; q < g.x.size(); ++q) s += g.w[q] * check_finite(f(a + h * g.x[q]));
    out.values[i] = s;
  }
  return out;
}

PiecewiseConstantFn project2(const Fn2& f, int K, int order) {
  const GLRule& g = gl_rule(order);
  PiecewiseConstantFn out(2, K);
  double h = std::ldexp(1.0, -K);
  std::uint64_t n = 1ull << K;
  for (std::uint64_t j = 0; j < n; ++j)
    for (std::uint64_t i = 0; i < n; ++i) {
      double x0 = double(i) * h, y0 = double(j) * h, s = 0;
      for (std::size_t a = 0; a < g.x.size(); ++a)
        for (std::size_t b = 0; b < g.x.size(); ++b)
          s += g.w[a] * g.w[b] * check_finite(f(x0 + h * g.x[a], y0 + h * g.x[b]));
      out.values[(j << K) + i] = s;
    }
  return out;
}

PiecewiseConstantFn project_restricted(const Fn1& f, double a, double b, int K, int order) {
  const GLRule& g = gl_rule(order);
  PiecewiseConstantFn out(1, K, 0.0);
  double h = std::ldexp(1.0, -K);
  if (!(b > a)) return out;
  std::uint64_t n = 1ull << K;
  std::uint64_t i0 = std::uint64_t(std::max(0.0, std::floor(a / h)));
  std::uint64_t i1 = std::min<std::uint64_t>(n, std::uint64_t(std::ceil(b / h)));
  for (std::uint64_t i = i0; i < i1; ++i) {
    double lo = std::max(a, double(i) * h), hi = std::min(b, double(i + 1) * h);
    if (hi <= lo) continue;
    double s = 0;
    for (std::size_t q = 0; q < g.x.size(); ++q) s += g.w[q] * check_finite(f(lo + (hi - lo) * g.x[q]));
    out.values[i] = s * (hi - lo) / h;
  }
  return out;
}

PiecewiseConstantFn project_indicator(const Region& r, int K) {
  PiecewiseConstantFn out(r.dim(), K, 0.0);
  Cover c = cover(r, K);
  for (auto& q : c.inner) out.values[q.flat()] = 1.0;
  for (auto& q : c.boundary) out.values[q.flat()] = r.overlap(q) / q.measure();
  return out;
}

// ---- Haar

HaarCoeffs HaarCoeffs::zero(int dim, int K) {
  HaarCoeffs c;
  c.dim = dim;
  c.max_level = K;
  c.details.resize(K);
  for (int k = 0; k < K; ++k) c.details[k].assign(cells_at(dim, k) * c.per_cell(), 0.0);
  return c;
}

double HaarCoeffs::detail(const GridCell& q, int comp) const {
  return details.at(q.level).at(q.flat() * per_cell() + comp);
}

void HaarCoeffs::set_detail(const GridCell& q, double v, int comp) {
  details.at(q.level).at(q.flat() * per_cell() + comp) = v;
}

HaarCoeffs haar_analysis(const PiecewiseConstantFn& f) {
  int K = f.level;
  HaarCoeffs c = HaarCoeffs::zero(f.dim, K);
  std::vector<double> cur = f.values, next;
  for (int k = K - 1; k >= 0; --k) {
    double halfm = std::sqrt(std::ldexp(1.0, -k * f.dim));  // |Q|^{1/2}
    std::uint64_t n = 1ull << k;
    if (f.dim == 1) {
      next.assign(n, 0.0);
      for (std::uint64_t i = 0; i < n; ++i) {
        double a1 = cur[2 * i], a2 = cur[2 * i + 1];
        next[i] = 0.5 * (a1 + a2);
        c.details[k][i] = halfm * (a1 - a2) * 0.5;
      }
    } else {
      next.assign(n * n, 0.0);
      std::uint64_t m = 2 * n;
      for (std::uint64_t j = 0; j < n; ++j)
        for (std::uint64_t i = 0; i < n; ++i) {
          double a00 = cur[(2 * j) * m + 2 * i], a10 = cur[(2 * j) * m + 2 * i + 1];
          double a01 = cur[(2 * j + 1) * m + 2 * i], a11 = cur[(2 * j + 1) * m + 2 * i + 1];
          std::uint64_t fl = j * n + i;
          next[fl] = 0.25 * (a00 + a10 + a01 + a11);
          c.details[k][3 * fl + 0] = 0.25 * halfm * (a00 - a10 + a01 - a11);
          c.details[k][3 * fl + 1] = 0.25 * halfm * (a00 + a10 - a01 - a11);
          c.details[k][3 * fl + 2] = 0.25 * halfm * (a00 - a10 - a01 + a11);
        }
    }
    cur.swap(next);
  }
  c.mean = cur[0];
  return c;
}

PiecewiseConstantFn haar_synthesis(const HaarCoeffs& c) {
  std::vector<double> cur{c.mean}, next;
  for (int k = 0; k < c.max_level; ++k) {
    double ih = 1.0 / std::sqrt(std::ldexp(1.0, -k * c.dim));  // |Q|^{-1/2}
    std::uint64_t n = 1ull << k;
    const auto& d = c.details[k];
    if (c.dim == 1) {
      next.assign(2 * n, 0.0);
      for (std::uint64_t i = 0; i < n; ++i) {
        next[2 * i] = cur[i] + d[i] * ih;
        next[2 * i + 1] = cur[i] - d[i] * ih;
      }
    } else {
      std::uint64_t m = 2 * n;
      next.assign(m * m, 0.0);
      for (std::uint64_t j = 0; j < n; ++j)
        for (std::uint64_t i = 0; i < n; ++i) {
          std::uint64_t fl = j * n + i;
          double v = cur[fl], dx = d[3 * fl] * ih, dy = d[3 * fl + 1] * ih, dd = d[3 * fl + 2] * ih;
          next[(2 * j) * m + 2 * i] = v + dx + dy + dd;
          next[(2 * j) * m + 2 * i + 1] = v - dx + dy - dd;
          next[(2 * j + 1) * m + 2 * i] = v + dx - dy - dd;
          next[(2 * j + 1) * m + 2 * i + 1] = v - dx - dy + dd;
        }
    }
    cur.swap(next);
  }
  return PiecewiseConstantFn(c.dim, c.max_level, std::move(cur));
}

double SouzaAtom::value() const { return std::pow(cell.measure(), s - 1.0 / p); }

PiecewiseConstantFn atom_as_fn(const SouzaAtom& a, int K) {
  if (K < a.cell.level) throw std::invalid_argument("atom_as_fn: level too coarse for the atom");
  PiecewiseConstantFn coarse(a.cell.dim, a.cell.level, 0.0);
  coarse.values[a.cell.flat()] = a.value();
  return coarse.refine_to(K);
}

PiecewiseConstantFn haar_fn(const GridCell& q, int K, int comp) {
  if (K <= q.level) throw std::invalid_argument("haar_fn: level must exceed the cell level");
  HaarCoeffs c = HaarCoeffs::zero(q.dim, K);
  c.set_detail(q, 1.0, comp);
  return haar_synthesis(c);
}

}  // namespace bsv
