#include "bsv/besov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bsv {

BesovParams::BesovParams(double s_, double p_, double q_) : s(s_), p(p_), q(q_) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("BesovParams: need 1 <= p < inf");
  if (!(q >= 1.0)) throw std::invalid_argument("BesovParams: need q >= 1");
  if (!(s > 0.0 && s * p < 1.0)) throw std::invalid_argument("BesovParams: need 0 < s < 1/p");
}

double BesovParams::pconj() const { return p == 1.0 ? kInf : p / (p - 1.0); }

std::string BesovParams::str() const {
  std::ostringstream os;
  os << "s=" << s << " p=" << p << " q=" << (std::isinf(q) ? std::string("inf") : std::to_string(q));
  return os.str();
}

std::vector<double> besov_level_sums(const HaarCoeffs& c, const BesovParams& bp) {
  std::vector<double> L(c.max_level, 0.0);
  for (int k = 0; k < c.max_level; ++k) {
    double w = std::pow(std::ldexp(1.0, -k * c.dim), 1.0 / bp.p - bp.s - 0.5);
    double acc = 0;
    if (bp.p == 1.0) {
      for (double d : c.details[k]) acc += std::abs(d);
      acc *= w;
    } else {
      for (double d : c.details[k]) acc += std::pow(std::abs(d) * w, bp.p);
    }
    L[k] = acc;
  }
  return L;
}

double besov_seminorm_haar(const HaarCoeffs& c, const BesovParams& bp) {
  auto L = besov_level_sums(c, bp);
  if (std::isinf(bp.q)) {
    double m = 0;
    for (double v : L) m = std::max(m, std::pow(v, 1.0 / bp.p));
    return m;
  }
  double acc = 0;
  for (double v : L) acc += std::pow(v, bp.q / bp.p);
  return std::pow(acc, 1.0 / bp.q);
}

double besov_norm_haar(const HaarCoeffs& c, const BesovParams& bp) {
  return std::abs(c.mean) + besov_seminorm_haar(c, bp);
}

// Same value as besov_norm_haar(haar_analysis(f)), fused: details are summed
// level by level without being stored.
double besov_norm_haar(const PiecewiseConstantFn& f, const BesovParams& bp) {
  int K = f.level, D = f.dim;
  std::vector<double> cur = f.values, next, L(K, 0.0);
  auto add = [&](double& acc, double d, double w) { acc += bp.p == 1.0 ? std::abs(d) : std::pow(std::abs(d) * w, bp.p); };
  for (int k = K - 1; k >= 0; --k) {
    double halfm = std::sqrt(std::ldexp(1.0, -k * D));
    double w = std::pow(std::ldexp(1.0, -k * D), 1.0 / bp.p - bp.s - 0.5);
    std::uint64_t n = 1ull << k;
    double acc = 0;
    if (D == 1) {
      next.resize(n);
      for (std::uint64_t i = 0; i < n; ++i) {
        double a1 = cur[2 * i], a2 = cur[2 * i + 1];
        next[i] = 0.5 * (a1 + a2);
        add(acc, halfm * (a1 - a2) * 0.5, w);
      }
    } else {
      next.resize(n * n);
      std::uint64_t m = 2 * n;
      for (std::uint64_t j = 0; j < n; ++j)
        for (std::uint64_t i = 0; i < n; ++i) {
          double a00 = cur[(2 * j) * m + 2 * i], a10 = cur[(2 * j) * m + 2 * i + 1];
          double a01 = cur[(2 * j + 1) * m + 2 * i], a11 = cur[(2 * j + 1) * m + 2 * i + 1];
          next[j * n + i] = 0.25 * (a00 + a10 + a01 + a11);
          add(acc, 0.25 * halfm * (a00 - a10 + a01 - a11), w);
          add(acc, 0.25 * halfm * (a00 + a10 - a01 - a11), w);
          add(acc, 0.25 * halfm * (a00 - a10 - a01 + a11), w);
        }
    }
    L[k] = bp.p == 1.0 ? acc * w : acc;
    cur.swap(next);
  }
  double semi = 0;
  if (std::isinf(bp.q)) {
    for (double v : L) semi = std::max(semi, std::pow(v, 1.0 / bp.p));
  } else {
    for (double v : L) semi += std::pow(v, bp.q / bp.p);
    semi = std::pow(semi, 1.0 / bp.q);
  }
  return std::abs(cur[0]) + semi;
}

double besov_atomic_cost(const HaarCoeffs& c, const BesovParams& bp) {
  return std::abs(c.mean) + std::pow(2.0, c.dim * bp.s) * besov_seminorm_haar(c, bp);
}

// ---- oscillation

namespace {
// values of f inside level-i cell q, copied into buf
void gather(const PiecewiseConstantFn& f, const GridCell& q, std::vector<double>& buf) {
  int sh = f.level - q.level;
  std::uint64_t n = 1ull << sh;
  buf.clear();
  if (f.dim == 1) {
    std::uint64_t b = std::uint64_t(q.idx[0]) << sh;
    buf.assign(f.values.begin() + b, f.values.begin() + b + n);
  } else {
    std::uint64_t bx = std::uint64_t(q.idx[0]) << sh, by = std::uint64_t(q.idx[1]) << sh;
    for (std::uint64_t j = 0; j < n; ++j)
      for (std::uint64_t i = 0; i < n; ++i) buf.push_back(f.values[((by + j) << f.level) + bx + i]);
  }
}

double osc_of(std::vector<double>& buf, double cellm) {
  if (buf.size() <= 1) return 0.0;
  // any point between the two middle order statistics minimises the L1 loss
  auto mid = buf.begin() + buf.size() / 2;
  std::nth_element(buf.begin(), mid, buf.end());
  double med = *mid, s = 0;
  for (double v : buf) s += std::abs(v - med);
  return s * cellm;
}
}  // namespace

double osc1(const PiecewiseConstantFn& f, const GridCell& q) {
  if (q.level > f.level) return 0.0;
  std::vector<double> buf;
  gather(f, q, buf);
  return osc_of(buf, f.cell_measure());
}

std::vector<double> osc_level_sums(const PiecewiseConstantFn& f, double s) {
  std::vector<double> out(f.level + 1, 0.0);
  std::vector<double> buf;
  for (int i = 0; i < f.level; ++i) {
    double w = std::pow(std::ldexp(1.0, -i * f.dim), -s);
    double acc = 0;
    std::uint64_t n = cells_at(f.dim, i);
    for (std::uint64_t fl = 0; fl < n; ++fl) {
      gather(f, GridCell::from_flat(f.dim, i, fl), buf);
      acc += osc_of(buf, f.cell_measure());
    }
    out[i] = w * acc;
  }
  return out;
}

double besov_norm_osc(const PiecewiseConstantFn& f, double s) {
  auto L = osc_level_sums(f, s);
  return std::abs(f.integral()) + *std::max_element(L.begin(), L.end());
}

// ---- atom bounds

double restricted_norm(const Fn1& g, double a, double b, const BesovParams& bp, int depth) {
  return besov_norm_haar(project_restricted(g, a, b, depth), bp);
}

AtomBound holder_atom_bound(const HolderAtom& a, const BesovParams& bp, double C) {
  double w = a.w1 - a.w0;
  if (!(w > 0)) throw std::invalid_argument("holder_atom_bound: empty W");
  if (a.hold_const * std::pow(w, bp.s + a.eps) > a.sup_g * (1 + 1e-12))
    throw std::invalid_argument("holder_atom_bound: Holder constant too large for sup_g on W");
  AtomBound r;
  r.constant = C;
  r.bound = 2.0 * C * a.sup_g * std::pow(w, 1.0 / bp.p - bp.s);
  r.direct = restricted_norm(a.g, a.w0, a.w1, bp);
  return r;
}

std::vector<HolderAtom> holder_corpus(const BesovParams& bp, double eps, std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> lev(1, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<HolderAtom> out;
  double th = std::min(1.0, bp.s + eps);
  for (int t = 0; t < n; ++t) {
    int k = lev(rng);
    std::uint32_t i = std::uint32_t(u(rng) * double(1u << k)) % (1u << k);
    double w0 = std::ldexp(double(i), -k), w1 = std::ldexp(double(i) + 1, -k), w = w1 - w0;
    double A = 0.1 + 2.0 * u(rng);
    double x0 = w0 + u(rng) * w;
    double sgn = u(rng) < 0.5 ? -1.0 : 1.0;
    double c0 = A * std::pow(w, th) * (1.0 + 2.0 * u(rng));
    HolderAtom h;
    h.g = [=](double x) { return c0 + sgn * A * std::pow(std::abs(x - x0), th); };
    h.w0 = w0;
    h.w1 = w1;
    h.eps = th - bp.s;
    h.hold_const = A;
    h.sup_g = c0 + (sgn > 0 ? A * std::pow(std::max(x0 - w0, w1 - x0), th) : 0.0);
    out.push_back(std::move(h));
  }
  return out;
}

Calibration calibrate_holder(const BesovParams& bp, double eps, std::uint64_t seed, int n) {
  Calibration c;
  c.seed = seed;
  for (auto& a : holder_corpus(bp, eps, seed, n)) {
    double shape = 2.0 * a.sup_g * std::pow(a.w1 - a.w0, 1.0 / bp.p - bp.s);
    c.max_ratio = std::max(c.max_ratio, restricted_norm(a.g, a.w0, a.w1, bp) / shape);
    ++c.samples;
  }
  c.constant = c.margin * c.max_ratio;
  return c;
}

double pvariation(const std::vector<double>& v, double r) {
  if (v.size() < 2) return 0.0;
  // only local extrema (and the ends) can matter for r >= 1
  std::vector<double> e;
  for (double x : v)
    if (e.empty() || x != e.back()) e.push_back(x);
  std::vector<double> ex;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i == 0 || i + 1 == e.size() || (e[i] - e[i - 1]) * (e[i + 1] - e[i]) < 0) ex.push_back(e[i]);
  }
  std::size_t m = ex.size();
  if (m < 2) return 0.0;
  std::vector<double> best(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    double b = 0;
    for (std::size_t j = 0; j < i; ++j) b = std::max(b, best[j] + std::pow(std::abs(ex[i] - ex[j]), r));
    best[i] = b;
  }
  return std::pow(*std::max_element(best.begin(), best.end()), 1.0 / r);
}

double pbv_variation(const Fn1& g, double w0, double w1, double beta, int depth) {
  PiecewiseConstantFn f = project_restricted(g, w0, w1, depth);
  double h = std::ldexp(1.0, -depth);
  std::vector<double> v;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double lo = double(i) * h, hi = lo + h;
    if (hi > w0 && lo < w1 && lo >= w0 && hi <= w1) v.push_back(f.values[i]);
  }
  return pvariation(v, 1.0 / beta);
}

AtomBound pbv_atom_bound(const PbvAtom& a, const BesovParams& bp, double C) {
  AtomBound r;
  r.constant = C;
  r.bound = C * (a.var + a.sup_g) * std::pow(a.w1 - a.w0, 1.0 / bp.p - bp.s);
  r.direct = restricted_norm(a.g, a.w0, a.w1, bp);
  return r;
}

std::vector<PbvAtom> pbv_corpus(const BesovParams& bp, std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> lev(1, 7);
  std::uniform_int_distribution<int> jumps(1, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PbvAtom> out;
  for (int t = 0; t < n; ++t) {
    int k = lev(rng);
    std::uint32_t i = std::uint32_t(u(rng) * double(1u << k)) % (1u << k);
    double w0 = std::ldexp(double(i), -k), w1 = std::ldexp(double(i) + 1, -k), w = w1 - w0;
    int nj = jumps(rng);
    std::vector<double> at, h;
    double base = 0.2 + u(rng);
    for (int j = 0; j < nj; ++j) {
      at.push_back(w0 + u(rng) * w);
      h.push_back((u(rng) - 0.5));
    }
    auto g = [=](double x) {
      double v = base;
      for (std::size_t j = 0; j < at.size(); ++j)
        if (x >= at[j]) v += h[j];
      return v;
    };
    PbvAtom a;
    a.g = g;
    a.w0 = w0;
    a.w1 = w1;
    a.var = pbv_variation(g, w0, w1, bp.s);
    double sup = 0;
    for (int j = 0; j <= 512; ++j) sup = std::max(sup, std::abs(g(w0 + w * j / 513.0)));
    a.sup_g = sup;
    out.push_back(std::move(a));
  }
  return out;
}

Calibration calibrate_pbv(const BesovParams& bp, std::uint64_t seed, int n) {
  Calibration c;
  c.seed = seed;
  for (auto& a : pbv_corpus(bp, seed, n)) {
    double shape = (a.var + a.sup_g) * std::pow(a.w1 - a.w0, 1.0 / bp.p - bp.s);
    c.max_ratio = std::max(c.max_ratio, restricted_norm(a.g, a.w0, a.w1, bp) / shape);
    ++c.samples;
  }
  c.constant = c.margin * c.max_ratio;
  return c;
}

double lorenz_shape(const LorenzAtom& a, const BesovParams& bp) {
  double e = 1.0 / (1.0 + a.gamma);
  double c = std::pow(a.q0, e), d = std::pow(a.q1, e);
  return std::pow(a.w1 - a.w0, 1.0 / bp.p - bp.s) * (a.q1 - a.q0) / (d - c);
}

namespace {
void check_lorenz(const LorenzAtom& a, const BesovParams& bp) {
  if (!(a.gamma > 0)) throw std::invalid_argument("lorenz_atom_bound: gamma must be positive");
  if (bp.s >= std::min(1.0, a.gamma)) throw std::invalid_argument("lorenz_atom_bound: need beta < min(1, gamma)");
  double e = 1.0 / (1.0 + a.gamma);
  double c = std::pow(a.q0, e), d = std::pow(a.q1, e);
  if (!(a.q0 >= 0 && a.q1 <= 1 && a.q1 > a.q0)) throw std::invalid_argument("lorenz_atom_bound: bad Q");
  if (a.w0 < c - 1e-15 || a.w1 > d + 1e-15 || !(a.w1 > a.w0))
    throw std::invalid_argument("lorenz_atom_bound: W must lie in h^{-1}(Q)");
}
double lorenz_direct(const LorenzAtom& a, const BesovParams& bp) {
  double g1 = 1.0 + a.gamma, gm = a.gamma;
  return restricted_norm([=](double x) { return g1 * std::pow(x, gm); }, a.w0, a.w1, bp);
}
}  // namespace

AtomBound lorenz_atom_bound(const LorenzAtom& a, const BesovParams& bp, double C) {
  check_lorenz(a, bp);
  AtomBound r;
  r.constant = C;
  r.bound = C * lorenz_shape(a, bp);
  r.direct = lorenz_direct(a, bp);
  return r;
}

std::vector<LorenzAtom> lorenz_corpus(double gamma, std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LorenzAtom> out;
  double e = 1.0 / (1.0 + gamma);
  for (int t = 0; t < n; ++t) {
    LorenzAtom a;
    a.gamma = gamma;
    // a third of the samples touch the singular end
    double len = std::pow(2.0, -1.0 - 8.0 * u(rng));
    a.q0 = (t % 3 == 0) ? 0.0 : u(rng) * (1.0 - len);
    a.q1 = a.q0 + len;
    double c = std::pow(a.q0, e), d = std::pow(a.q1, e);
    double f0 = u(rng), f1 = u(rng);
    if (f0 > f1) std::swap(f0, f1);
    f1 = std::max(f1, f0 + 0.05);
    f1 = std::min(f1, 1.0);
    f0 = std::min(f0, f1 - 0.05);
    a.w0 = c + f0 * (d - c);
    a.w1 = c + f1 * (d - c);
    out.push_back(a);
  }
  return out;
}

Calibration calibrate_lorenz(double gamma, const BesovParams& bp, std::uint64_t seed, int n) {
  Calibration c;
  c.seed = seed;
  for (auto& a : lorenz_corpus(gamma, seed, n)) {
    check_lorenz(a, bp);
    c.max_ratio = std::max(c.max_ratio, lorenz_direct(a, bp) / lorenz_shape(a, bp));
    ++c.samples;
  }
  c.constant = c.margin * c.max_ratio;
  return c;
}

double le2_quotient(double gamma, double c, double b, double d) {
  if (!(0 <= c && c < b && b <= d)) throw std::invalid_argument("le2_quotient: need 0 <= c < b <= d");
  return std::pow(b, gamma) * (d - c) / (std::pow(d, 1 + gamma) - std::pow(c, 1 + gamma));
}

double le1_quotient(double gamma, double x, double y) {
  if (x == y) return 0.0;
  double e = std::min(gamma, 1.0);
  return std::abs(std::pow(x, gamma) - std::pow(y, gamma)) / std::pow(std::abs(x - y), e);
}

}  // namespace bsv

namespace bsv {
InfChain inf_chain_level_sums(const PiecewiseConstantFn& f, double p) {
  InfChain r;
  int K = f.level;
  std::vector<double> cur = f.values;  // infima at the current level
  std::vector<std::vector<double>> inf(K + 1);
  inf[K] = cur;
  for (int k = K; k > 0; --k) {
    std::size_t n = cells_at(f.dim, k - 1);
    std::vector<double> up(n, 1e300);
    std::uint64_t side = 1ull << k;
    for (std::size_t i = 0; i < inf[k].size(); ++i) {
      std::size_t par = f.dim == 1 ? i / 2 : ((i / side) / 2) * (side / 2) + (i % side) / 2;
      up[par] = std::min(up[par], inf[k][i]);
    }
    inf[k - 1] = std::move(up);
  }
  r.level_sums.assign(K + 1, 0.0);
  for (int k = 1; k <= K; ++k) {
    std::uint64_t side = 1ull << k;
    double acc = 0;
    for (std::size_t i = 0; i < inf[k].size(); ++i) {
      std::size_t par = f.dim == 1 ? i / 2 : ((i / side) / 2) * (side / 2) + (i % side) / 2;
      acc += std::pow(std::abs(inf[k][i] - inf[k - 1][par]), p);
    }
    r.level_sums[k] = acc;
    if (acc > r.sup) r.sup = acc, r.argsup = k;
  }
  return r;
}
}  // namespace bsv
