#include "bsv/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bsv/parallel.hpp"

namespace bsv {

void SparseOperator::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  std::size_t N = n();
  if (x.size() != N) throw std::invalid_argument("SparseOperator: vector length mismatch");
  y.assign(N, 0.0);
  parallel_for(N, [&](std::size_t r) {
    double s = 0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }, 4096);
}

double SparseOperator::at(std::size_t r, std::size_t c) const {
  for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
    if (col[k] == c) return val[k];
  return 0.0;
}

std::vector<double> SparseOperator::column_mass() const {
  std::vector<double> m(n(), 0.0);
  double cm = std::ldexp(1.0, -level * dim);
  for (std::size_t r = 0; r < n(); ++r)
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) m[col[k]] += cm * val[k];
  return m;
}

double SparseOperator::mass_defect() const {
  auto m = column_mass();
  double cm = std::ldexp(1.0, -level * dim), w = 0;
  for (double v : m) w = std::max(w, std::abs(v - cm) / cm);
  return w;
}

PiecewiseConstantFn apply(const SparseOperator& op, const PiecewiseConstantFn& f) {
  if (f.level != op.level || f.dim != op.dim) throw std::invalid_argument("apply: level mismatch");
  PiecewiseConstantFn out(f.dim, f.level);
  op.multiply(f.values, out.values);
  return out;
}

namespace {
using RowEntries = std::vector<std::pair<std::uint32_t, double>>;

SparseOperator assemble(int dim, int K, std::vector<RowEntries>& rows, const std::string& name,
                        const std::string& mode) {
  SparseOperator op;
  op.level = K;
  op.dim = dim;
  op.map_name = name;
  op.mode = mode;
  op.row_ptr.assign(rows.size() + 1, 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& e = rows[r];
    std::sort(e.begin(), e.end());
    // merge duplicates (several branches hitting the same column)
    RowEntries m;
    for (auto& p : e) {
      if (!m.empty() && m.back().first == p.first) m.back().second += p.second;
      else m.push_back(p);
    }
    e.clear();
    for (auto& p : m)
      if (p.second > 1e-15) e.push_back(p);
    op.row_ptr[r + 1] = op.row_ptr[r] + e.size();
  }
  op.col.reserve(op.row_ptr.back());
  op.val.reserve(op.row_ptr.back());
  for (auto& e : rows)
    for (auto& p : e) {
      op.col.push_back(p.first);
      op.val.push_back(p.second);
    }
  return op;
}

// Distribute the interval [x0,x1) over level-K columns, weight per unit length w.
void spread(double x0, double x1, int K, double w, RowEntries& e) {
  if (!(x1 > x0)) return;
  double N = std::ldexp(1.0, K), h = 1.0 / N;
  std::int64_t n = std::int64_t(N);
  std::int64_t i0 = std::clamp<std::int64_t>(std::int64_t(std::floor(x0 * N)), 0, n - 1);
  std::int64_t i1 = std::clamp<std::int64_t>(std::int64_t(std::ceil(x1 * N)), 1, n);
  for (std::int64_t i = i0; i < i1; ++i) {
    double lo = std::max(x0, double(i) * h), hi = std::min(x1, double(i + 1) * h);
    if (hi > lo) e.push_back({std::uint32_t(i), w * (hi - lo)});
  }
}

// Branch indices whose image meets [y0,y1), from an image-sorted index.
struct ImageIndex {
  std::vector<std::size_t> order;
  std::vector<double> cmax;  // running max of image end along the order
  const std::vector<Branch1D>* b;
  explicit ImageIndex(const std::vector<Branch1D>& br) : b(&br) {
    order.resize(br.size());
    for (std::size_t i = 0; i < br.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return br[x].c < br[y].c; });
  }
  template <class F>
  void each(double y0, double y1, F&& f) const {
    for (std::size_t k : order) {
      const Branch1D& br = (*b)[k];
      if (br.c >= y1) break;
      if (br.d > y0) f(br);
    }
  }
};
}  // namespace

SparseOperator ulam_matrix(const MapSpec& m, int K) {
  if (K < 0 || K > 24) throw std::invalid_argument("ulam_matrix: level out of range");
  std::size_t N = std::size_t(cells_at(m.dim, K));
  std::vector<RowEntries> rows(N);
  double h = std::ldexp(1.0, -K);
  if (m.dim == 1) {
    ImageIndex idx(m.b1);
    parallel_for(N, [&](std::size_t r) {
      double q0 = double(r) * h, q1 = q0 + h;
      idx.each(q0, q1, [&](const Branch1D& br) {
        double y0 = std::max(q0, br.c), y1 = std::min(q1, br.d);
        if (!(y1 > y0)) return;
        double x0 = br.inv(y0), x1 = br.inv(y1);
        if (x0 > x1) std::swap(x0, x1);
        x0 = std::max(x0, br.a);
        x1 = std::min(x1, br.b);
        spread(x0, x1, K, 1.0 / h, rows[r]);
      });
    }, 256);
  } else {
    std::uint64_t n = 1ull << K;
    parallel_for(N, [&](std::size_t r) {
      GridCell q = GridCell::from_flat(2, K, r);
      double qx0 = q.lo(0), qx1 = q.hi(0), qy0 = q.lo(1), qy1 = q.hi(1);
      for (auto& br : m.b2) {
        double ix0 = std::max(qx0, br.img.x0), ix1 = std::min(qx1, br.img.x1);
        double iy0 = std::max(qy0, br.img.y0), iy1 = std::min(qy1, br.img.y1);
        if (!(ix1 > ix0 && iy1 > iy0)) continue;
        Pt p0 = br.inv({ix0, iy0}), p1 = br.inv({ix1, iy1});
        RowEntries ex, ey;
        spread(p0.x, p1.x, K, 1.0, ex);
        spread(p0.y, p1.y, K, 1.0, ey);
        for (auto& a : ey)
          for (auto& b : ex)
            rows[r].push_back({std::uint32_t(std::uint64_t(a.first) * n + b.first), a.second * b.second / (h * h)});
      }
    }, 64);
  }
  SparseOperator op = assemble(m.dim, K, rows, m.name, "exact-measure");
  op.tol = 1e-13;
  return op;
}

SparseOperator weighted_matrix(const MapSpec& m, double tau, int K, int order) {
  if (!(tau >= 1)) throw std::invalid_argument("weighted_matrix: need tau >= 1");
  if (m.dim == 2) {
    // constant jacobians: scale the Ulam entries branch by branch
    std::size_t N = std::size_t(cells_at(2, K));
    std::vector<RowEntries> rows(N);
    double h = std::ldexp(1.0, -K);
    std::uint64_t n = 1ull << K;
    for (std::size_t r = 0; r < N; ++r) {
      GridCell q = GridCell::from_flat(2, K, r);
      for (auto& br : m.b2) {
        double ix0 = std::max(q.lo(0), br.img.x0), ix1 = std::min(q.hi(0), br.img.x1);
        double iy0 = std::max(q.lo(1), br.img.y0), iy1 = std::min(q.hi(1), br.img.y1);
        if (!(ix1 > ix0 && iy1 > iy0)) continue;
        Pt p0 = br.inv({ix0, iy0}), p1 = br.inv({ix1, iy1});
        RowEntries ex, ey;
        spread(p0.x, p1.x, K, 1.0, ex);
        spread(p0.y, p1.y, K, 1.0, ey);
        double sc = std::pow(br.inv_jac(), tau - 1);
        for (auto& a : ey)
          for (auto& b : ex)
            rows[r].push_back({std::uint32_t(std::uint64_t(a.first) * n + b.first), sc * a.second * b.second / (h * h)});
      }
    }
    SparseOperator op = assemble(2, K, rows, m.name, "quadrature");
    op.quad_order = order;
    return op;
  }
  const GLRule& g1 = gl_rule(order);
  std::size_t N = std::size_t(cells_at(1, K));
  std::vector<RowEntries> rows(N);
  double h = std::ldexp(1.0, -K);
  ImageIndex idx(m.b1);
  auto quad = [&](const Branch1D& br, double a, double b) {
    double s = 0;
    for (std::size_t q = 0; q < g1.x.size(); ++q) s += g1.w[q] * std::pow(br.inv_jac(a + (b - a) * g1.x[q]), tau);
    return s * (b - a);
  };
  parallel_for(N, [&](std::size_t r) {
    double q0 = double(r) * h, q1 = q0 + h;
    idx.each(q0, q1, [&](const Branch1D& br) {
      double y0 = std::max(q0, br.c), y1 = std::min(q1, br.d);
      if (!(y1 > y0)) return;
      double x0 = br.inv(y0), x1 = br.inv(y1);
      if (x0 > x1) std::swap(x0, x1);
      std::int64_t i0 = std::max<std::int64_t>(0, std::int64_t(std::floor(x0 / h)));
      std::int64_t i1 = std::min<std::int64_t>(std::int64_t(N), std::int64_t(std::ceil(x1 / h)));
      for (std::int64_t i = i0; i < i1; ++i) {
        double p0 = std::max(x0, double(i) * h), p1 = std::min(x1, double(i + 1) * h);
        if (!(p1 > p0)) continue;
        // y-interval whose preimage is [p0,p1)
        double u0, u1;
        if (p0 == x0 && p1 == x1) u0 = y0, u1 = y1;
        else {
          u0 = p0 == x0 ? (br.increasing ? y0 : y1) : br.fwd(p0);
          u1 = p1 == x1 ? (br.increasing ? y1 : y0) : br.fwd(p1);
        }
        if (u0 > u1) std::swap(u0, u1);
        u0 = std::max(u0, y0);
        u1 = std::min(u1, y1);
        if (!(u1 > u0)) continue;
        double c = quad(br, u0, u1);
        double mid = 0.5 * (u0 + u1);
        double fine = quad(br, u0, mid) + quad(br, mid, u1);
        double v = std::abs(fine - c) <= 1e-12 * std::abs(fine) ? c : fine;
        rows[r].push_back({std::uint32_t(i), v / h});
      }
    });
  }, 256);
  SparseOperator op = assemble(1, K, rows, m.name, "quadrature");
  op.quad_order = order;
  op.tol = 1e-12;
  return op;
}

std::vector<AtomImage> exact_atom_action(const MapSpec& m, const BesovParams& bp, int depth) {
  if (m.dim != 1 || m.b1.empty()) throw std::invalid_argument("exact_atom_action: need a 1D map");
  std::size_t n = m.b1.size();
  for (std::size_t r = 0; r < n; ++r) {
    const Branch1D& b = m.b1[r];
    double a = double(r) / n, e = double(r + 1) / n;
    if (b.reg != Regularity::Affine || !b.increasing || std::abs(b.a - a) > 1e-15 || std::abs(b.b - e) > 1e-15 ||
        b.c != 0 || b.d != 1)
      throw std::invalid_argument("exact_atom_action: map must be affine with equal full branches");
  }
  std::vector<AtomImage> out;
  // the root is covered n times: Phi 1 = sum_r g_r = 1
  double root = 0;
  for (auto& b : m.b1) root += 1.0 / b.slope;
  out.push_back({0, 0, 0, 0, root});
  std::uint64_t cnt = n;
  for (int k = 1; k <= depth; ++k, cnt *= n) {
    std::uint64_t sub = cnt / n;
    double len = std::pow(double(n), -k);
    for (std::uint64_t i = 0; i < cnt; ++i) {
      const Branch1D& b = m.b1[i / sub];
      double lo = b.fwd(double(i) * len), img = b.slope * len;
      // Phi(|P|^{s-1/p} 1_P) = g |P|^{s-1/p} 1_{fP} = g (|P|/|fP|)^{s-1/p} a_{fP}
      double g = 1.0 / b.slope;
      double mult = g * std::pow(len / img, bp.s - 1.0 / bp.p);
      auto j = std::uint64_t(std::llround(lo / (len * double(n))));
      out.push_back({k, i, k - 1, j, mult});
    }
  }
  return out;
}

std::string export_coo(const SparseOperator& op) {
  std::ostringstream os;
  os.precision(17);
  os << "# map=" << op.map_name << " K=" << op.level << " dim=" << op.dim << " mode=" << op.mode
     << " nnz=" << op.nnz() << "\n";
  os << "row,col,weight\n";
  for (std::size_t r = 0; r < op.n(); ++r)
    for (std::size_t k = op.row_ptr[r]; k < op.row_ptr[r + 1]; ++k) os << r << "," << op.col[k] << "," << op.val[k] << "\n";
  return os.str();
}

}  // namespace bsv
