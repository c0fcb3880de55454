#include "bsv/maps.hpp"

#include <algorithm>
#include <math.h>
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bsv/repr.hpp"

namespace bsv {

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::Affine: return "affine";
    case Regularity::C1Holder: return "C1+Holder";
    case Regularity::Lorenz: return "Lorenz";
    case Regularity::PBV: return "pBV";
    case Regularity::BesovJacobian: return "besov-jacobian";
  }
  return "?";
}

Branch1D affine_branch(double a, double b, double c, double d, bool inc) {
  if (!(b > a && d > c)) throw std::invalid_argument("affine_branch: empty domain or image");
  Branch1D br;
  br.a = a;
  br.b = b;
  br.c = c;
  br.d = d;
  br.increasing = inc;
  double k = (d - c) / (b - a);
  br.slope = inc ? k : -k;
  br.offset = inc ? c - k * a : d + k * a;
  double sl = br.slope, of = br.offset, g = 1.0 / k;
  br.fwd = [sl, of](double x) { return sl * x + of; };
  br.inv = [sl, of](double y) { return (y - of) / sl; };
  br.inv_jac = [g](double) { return g; };
  br.reg = Regularity::Affine;
  br.expansion_lb = k;
  return br;
}

Pt Branch2D::fwd(Pt p) const {
  return {img.x0 + (p.x - dom.x0) * sx(), img.y0 + (p.y - dom.y0) * sy()};
}
Pt Branch2D::inv(Pt p) const {
  return {dom.x0 + (p.x - img.x0) / sx(), dom.y0 + (p.y - img.y0) / sy()};
}

int MapSpec::find(double x) const {
  auto it = std::upper_bound(b1.begin(), b1.end(), x, [](double v, const Branch1D& b) { return v < b.a; });
  if (it == b1.begin()) return -1;
  --it;
  if (x < it->b) return int(it - b1.begin());
  return -1;
}

double MapSpec::eval(double x) const {
  int i = find(x);
  if (i < 0) throw std::out_of_range("MapSpec::eval: point outside branch domains");
  return b1[i].fwd(x);
}

Pt MapSpec::eval2(Pt p) const {
  for (auto& b : b2)
    if (b.dom.x0 <= p.x && p.x < b.dom.x1 && b.dom.y0 <= p.y && p.y < b.dom.y1) return b.fwd(p);
  throw std::out_of_range("MapSpec::eval2: point outside branch domains");
}

bool MapSpec::full_branch() const {
  if (dim == 1) {
    for (auto& b : b1)
      if (b.c > 1e-15 || b.d < 1 - 1e-15) return false;
    return true;
  }
  for (auto& b : b2)
    if (b.img.x0 > 0 || b.img.x1 < 1 || b.img.y0 > 0 || b.img.y1 < 1) return false;
  return true;
}

double MapSpec::min_expansion() const {
  double m = 1e300;
  if (dim == 1)
    for (auto& b : b1) m = std::min(m, b.expansion_lb);
  else
    for (auto& b : b2) m = std::min({m, b.sx(), b.sy()});
  return m;
}

namespace {
void sort_branches(MapSpec& m) {
  std::sort(m.b1.begin(), m.b1.end(), [](auto& x, auto& y) { return x.a < y.a; });
  for (std::size_t i = 1; i < m.b1.size(); ++i)
    if (m.b1[i].a < m.b1[i - 1].b - 1e-15) throw std::invalid_argument("MapSpec: overlapping branch domains");
}
}  // namespace

MapSpec linear_circle(int l) {
  if (l < 2) throw std::invalid_argument("linear_circle: need l >= 2");
  MapSpec m;
  m.name = "linear_circle";
  m.family = "markov-affine";
  m.params["l"] = l;
  for (int r = 0; r < l; ++r) m.b1.push_back(affine_branch(double(r) / l, double(r + 1) / l, 0, 1));
  m.b1.back().b = 1.0;
  return m;
}

MapSpec beta_map(double beta) {
  if (!(beta > 1 && beta <= 16)) throw std::invalid_argument("beta_map: need 1 < beta <= 16");
  MapSpec m;
  m.name = "beta_map";
  m.family = "pbv";
  m.params["beta"] = beta;
  int full = int(std::floor(beta));
  if (full == beta) --full;
  for (int r = 0; r < full; ++r) m.b1.push_back(affine_branch(r / beta, (r + 1) / beta, 0, 1));
  m.b1.push_back(affine_branch(full / beta, 1, 0, beta - full));
  return m;
}

MapSpec tent(double t) {
  if (!(t > 0.5 && t <= 1.0)) throw std::invalid_argument("tent: need 1/2 < t <= 1");
  MapSpec m;
  m.name = "tent";
  m.family = "tent";
  m.params["t"] = t;
  m.note = "presented on [0,1] through y=(x+1)/2";
  m.b1.push_back(affine_branch(0, 0.5, 0, t, true));
  m.b1.push_back(affine_branch(0.5, 1, 0, t, false));
  return m;
}

MapSpec markov_holder(int n, double A) {
  if (n < 2) throw std::invalid_argument("markov_holder: need n >= 2");
  if (!(A >= 0 && A < 1)) throw std::invalid_argument("markov_holder: need 0 <= amplitude < 1");
  if (n * (1 - A) <= 1) throw std::invalid_argument("markov_holder: expansion n(1-A) must exceed 1");
  if (A == 0) {
    MapSpec m = linear_circle(n);
    m.name = "markov_holder";
    m.family = "markov";
    m.params = {{"n", n}, {"amplitude", 0}};
    return m;
  }
  MapSpec m;
  m.name = "markov_holder";
  m.family = "markov";
  m.params = {{"n", n}, {"amplitude", A}};
  const double tp = 2 * std::numbers::pi;
  auto phi = [A, tp](double u) { return u + A * std::sin(tp * u) / tp; };
  auto dphi = [A, tp](double u) { return 1 + A * std::cos(tp * u); };
  auto phinv = [phi, dphi](double v) {
    double lo = 0, hi = 1, u = v;
    for (int it = 0; it < 100; ++it) {
      double r = phi(u) - v;
      if (r > 0) hi = u; else lo = u;
      if (std::abs(r) < 1e-16) break;
      double un = u - r / dphi(u);
      if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
      if (std::abs(un - u) < 1e-17) { u = un; break; }
      u = un;
    }
    return u;
  };
  for (int r = 0; r < n; ++r) {
    Branch1D b;
    b.a = double(r) / n;
    b.b = r + 1 == n ? 1.0 : double(r + 1) / n;
    b.c = 0;
    b.d = 1;
    double a0 = b.a;
    b.fwd = [=](double x) { return phi(n * (x - a0)); };
    b.inv = [=](double y) { return a0 + phinv(y) / n; };
    b.inv_jac = [=](double y) { return 1.0 / (n * dphi(phinv(y))); };
    b.reg = Regularity::C1Holder;
    b.expansion_lb = n * (1 - A);
    b.slope = n;
    m.b1.push_back(b);
  }
  return m;
}

std::vector<LorenzPiece> lorenz_default_layout(double gamma) {
  double c = 1.0 / (2.0 + gamma);
  return {{0, c, true, true}, {c, 1, false, false}};
}

MapSpec lorenz_map(double gamma) { return lorenz_map(gamma, lorenz_default_layout(gamma)); }

MapSpec lorenz_map(double gamma, const std::vector<LorenzPiece>& layout) {
  if (!(gamma > 0)) throw std::invalid_argument("lorenz_map: need gamma > 0");
  if (layout.empty()) throw std::invalid_argument("lorenz_map: empty layout");
  MapSpec m;
  m.name = "lorenz";
  m.family = "lorenz";
  m.params["gamma"] = gamma;
  double g1 = 1 + gamma, e = 1 / g1;
  for (auto& pc : layout) {
    if (!(pc.b > pc.a && pc.a >= 0 && pc.b <= 1)) throw std::invalid_argument("lorenz_map: bad piece");
    if (!pc.lorenz) {
      m.b1.push_back(affine_branch(pc.a, pc.b, 0, 1));
      continue;
    }
    Branch1D b;
    b.a = pc.a;
    b.b = pc.b;
    b.c = 0;
    b.d = 1;
    double a = pc.a, w = pc.b - pc.a, bb = pc.b;
    if (pc.singular_left) {
      b.fwd = [=](double x) { return std::pow((x - a) / w, e); };
      b.inv = [=](double y) { return a + w * std::pow(y, g1); };
      b.inv_jac = [=](double y) { return w * g1 * std::pow(y, gamma); };
    } else {
      b.fwd = [=](double x) { return 1 - std::pow((bb - x) / w, e); };
      b.inv = [=](double y) { return bb - w * std::pow(1 - y, g1); };
      b.inv_jac = [=](double y) { return w * g1 * std::pow(1 - y, gamma); };
    }
    b.reg = Regularity::Lorenz;
    b.expansion_lb = 1 / (g1 * w);
    b.slope = 1 / w;
    m.b1.push_back(b);
  }
  sort_branches(m);
  double cov = 0;
  for (auto& b : m.b1) cov += b.b - b.a;
  m.omitted_mass = std::max(0.0, 1 - cov);
  m.params["alpha"] = m.min_expansion();
  return m;
}

MapSpec piecewise_map(const std::vector<PieceSpec>& pieces) {
  if (pieces.empty()) throw std::invalid_argument("piecewise_map: no pieces");
  MapSpec m;
  m.name = "piecewise";
  m.family = "pbv";
  for (auto& pc : pieces) {
    if (!(pc.a >= 0 && pc.b <= 1 && pc.b > pc.a && pc.c >= 0 && pc.d <= 1 && pc.d > pc.c))
      throw std::invalid_argument("piecewise_map: piece outside [0,1] or empty");
    if (!pc.power) {
      if (!((pc.d - pc.c) > (pc.b - pc.a))) throw std::invalid_argument("piecewise_map: affine piece is not expanding");
      m.b1.push_back(affine_branch(pc.a, pc.b, pc.c, pc.d, pc.increasing));
      continue;
    }
    if (!(pc.gamma > 0)) throw std::invalid_argument("piecewise_map: need gamma > 0");
    double g1 = 1 + pc.gamma, e = 1 / g1, gam = pc.gamma;
    double a = pc.a, bb = pc.b, w = pc.b - pc.a, c = pc.c, L = pc.d - pc.c;
    if (!(L / (g1 * w) > 1)) throw std::invalid_argument("piecewise_map: power piece is not expanding");
    Branch1D b;
    b.a = a, b.b = bb, b.c = c, b.d = pc.d;
    if (pc.singular_left) {
      b.fwd = [=](double x) { return c + L * std::pow((x - a) / w, e); };
      b.inv = [=](double y) { return a + w * std::pow((y - c) / L, g1); };
      b.inv_jac = [=](double y) { return w * g1 / L * std::pow((y - c) / L, gam); };
    } else {
      b.fwd = [=](double x) { return c + L - L * std::pow((bb - x) / w, e); };
      b.inv = [=](double y) { return bb - w * std::pow((c + L - y) / L, g1); };
      b.inv_jac = [=](double y) { return w * g1 / L * std::pow((c + L - y) / L, gam); };
    }
    b.reg = Regularity::Lorenz;
    b.expansion_lb = L / (g1 * w);
    b.slope = L / w;
    m.b1.push_back(b);
    m.family = "lorenz";
  }
  sort_branches(m);
  double cov = 0;
  for (auto& b : m.b1) cov += b.b - b.a;
  m.omitted_mass = std::max(0.0, 1 - cov);
  m.params["pieces"] = double(pieces.size());
  return m;
}

// ---- wild family

int wild_i0(double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("wild_family: need alpha > 0");
  int i = 0;
  while (alpha * std::ldexp(1.0, -i + 1) > 1.0) ++i;
  return i;
}

namespace {
// slopes in x and the three pieces in u = 2^i x, for level i
struct WildPieces {
  double s[3];
  double u0[3], u1[3];
  double off[3];
};
WildPieces wild_pieces(double alpha, double zeta, int i, bool verbatim) {
  WildPieces w;
  w.s[0] = alpha * (3.5 - 13 * zeta / 6);
  w.s[1] = alpha * (3.5 - 5 * zeta / 6);
  w.s[2] = alpha * (3.5 + 9 * zeta / 2);
  w.u0[0] = 0.5, w.u1[0] = 11.0 / 16;
  w.u0[1] = 11.0 / 16, w.u1[1] = 7.0 / 8;
  w.u0[2] = 7.0 / 8, w.u1[2] = 1.0;
  double h = std::ldexp(1.0, -i);
  // value at the left end of each piece
  w.off[0] = alpha * h / 4;
  w.off[1] = verbatim ? alpha * (h / 2 - 13 * zeta * h / 32) : alpha * h * (29 - 13 * zeta) / 32;
  w.off[2] = alpha * 2 * h - w.s[2] * h / 8;
  return w;
}
}  // namespace

MapSpec wild_family(double alpha, double zeta, int k0, WildOptions opt) {
  if (!(zeta >= 0 && zeta <= 1)) throw std::invalid_argument("wild_family: need zeta in [0,1]");
  if (k0 < 1) throw std::invalid_argument("wild_family: need k0 >= 1");
  int i0 = wild_i0(alpha);
  if (opt.i_max < i0) throw std::invalid_argument("wild_family: i_max below i0");
  if (opt.i_max > 60) throw std::invalid_argument("wild_family: i_max above 60");
  MapSpec m;
  m.name = "wild";
  m.family = "wild";
  m.params = {{"alpha", alpha}, {"zeta", zeta}, {"k0", k0}, {"i0", i0}, {"i_max", opt.i_max},
              {"verbatim", opt.verbatim ? 1 : 0}};
  double lo = std::ldexp(1.0, -i0), w = (1 - lo) / k0;
  for (int r = 0; r < k0; ++r) {
    Branch1D b = affine_branch(lo + r * w, r + 1 == k0 ? 1.0 : lo + (r + 1) * w, 0, 1);
    b.tag = -1;
    m.b1.push_back(b);
  }
  for (int i = i0; i <= opt.i_max; ++i) {
    WildPieces wp = wild_pieces(alpha, zeta, i, opt.verbatim);
    double h = std::ldexp(1.0, -i);
    for (int j = 0; j < 3; ++j) {
      double a = wp.u0[j] * h, b = wp.u1[j] * h;
      double c = wp.off[j], d = wp.off[j] + wp.s[j] * (b - a);
      Branch1D br = affine_branch(a, b, c, d);
      br.tag = i;
      m.b1.push_back(br);
    }
  }
  sort_branches(m);
  m.omitted_mass = std::ldexp(1.0, -(opt.i_max + 1));
  return m;
}

double wild_step(double x, double alpha, double zeta, int k0, int i0, int i_max, bool verbatim) {
  double lo = std::ldexp(1.0, -i0);
  if (x >= lo) {
    double w = (1 - lo) / k0;
    int r = std::min(k0 - 1, int((x - lo) / w));
    double a = lo + r * w;
    return std::min((x - a) / w, std::nextafter(1.0, 0.0));
  }
  int e;
  std::frexp(x, &e);
  int i = -e;
  if (i > i_max || x <= 0) return -1;
  double h = std::ldexp(1.0, -i), u = x / h;
  WildPieces wp = wild_pieces(alpha, zeta, i, verbatim);
  int j = u < 11.0 / 16 ? 0 : (u < 7.0 / 8 ? 1 : 2);
  return wp.off[j] + wp.s[j] * (x - wp.u0[j] * h);
}

// ---- besov-jacobian family

double remark_potential(double x) {
  if (x <= 0 || x > 0.5) return 0.0;
  return std::sin(2 * std::numbers::pi * std::log2(x));
}

std::vector<BJBranch> besov_jacobian_default(double frac) {
  double theta = 0.5;
  double amp = frac * theta;
  auto al = [amp](double x) { return amp * remark_potential(x); };
  return {{0, 0.5, 0, 1, al}, {0.5, 1, 0, 1, al}};
}

MapSpec besov_jacobian_family(const std::vector<BJBranch>& brs, int table_log2) {
  if (brs.empty()) throw std::invalid_argument("besov_jacobian_family: no branches");
  MapSpec m;
  m.name = "besov_jacobian";
  m.family = "besov-jacobian";
  const GLRule& gl = gl_rule(4);
  std::size_t N = std::size_t(1) << table_log2;
  for (std::size_t r = 0; r < brs.size(); ++r) {
    const BJBranch& B = brs[r];
    double lenI = B.b - B.a, lenJ = B.d - B.c;
    if (!(lenI > 0 && lenJ > 0)) throw std::invalid_argument("besov_jacobian_family: empty interval");
    double theta = lenI / lenJ;
    if (!(theta < 1)) throw std::invalid_argument("besov_jacobian_family: need |I_r| < |J_r|");
    double dx = lenJ / double(N);
    // cumulative integral of alpha on the table, then remove the mean
    std::vector<double> cum(N + 1, 0.0);
    double amax = 0;
    for (std::size_t k = 0; k < N; ++k) {
      double x0 = B.c + dx * double(k), s = 0;
      for (std::size_t q = 0; q < gl.x.size(); ++q) s += gl.w[q] * B.alpha(x0 + dx * gl.x[q]);
      cum[k + 1] = cum[k] + s * dx;
    }
    double mean = cum[N] / lenJ;
    auto al = B.alpha;
    for (std::size_t k = 0; k <= 4 * N; ++k) {
      double x = B.c + lenJ * double(k) / double(4 * N);
      amax = std::max(amax, std::abs(al(x) - mean));
    }
    if (amax >= std::min(1 - theta, theta))
      throw std::invalid_argument("besov_jacobian_family: |alpha_r| must stay below min(theta, 1-theta)");
    std::vector<double> xs(N + 1), ys(N + 1);
    for (std::size_t k = 0; k <= N; ++k) {
      xs[k] = B.c + dx * double(k);
      ys[k] = B.a + cum[k] - mean * (xs[k] - B.c) + theta * (xs[k] - B.c);
    }
    xs[N] = B.d;
    ys[N] = B.b;
    auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(xs), std::move(ys));
    Branch1D br;
    br.a = B.a;
    br.b = B.b;
    br.c = B.c;
    br.d = B.d;
    double c = B.c, d = B.d;
    br.inv = [spline, c, d](double y) { return (*spline)(std::clamp(y, c, d)); };
    br.inv_jac = [al, mean, theta](double y) { return al(y) - mean + theta; };
    br.fwd = [spline, c, d](double x) {
      double lo = c, hi = d;
      for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        if ((*spline)(mid) <= x) lo = mid; else hi = mid;
      }
      return 0.5 * (lo + hi);
    };
    br.reg = Regularity::BesovJacobian;
    br.expansion_lb = 1.0 / (theta + amax);
    br.slope = 1 / theta;
    m.b1.push_back(br);
    m.params["theta" + std::to_string(r)] = theta;
    m.params["alpha_sup" + std::to_string(r)] = amax;
  }
  sort_branches(m);
  double cov = 0;
  for (auto& b : m.b1) cov += b.b - b.a;
  m.omitted_mass = std::max(0.0, 1 - cov);
  return m;
}

// ---- winky face

std::vector<Rect> winky_default_targets(int k0) {
  if (k0 < 3) throw std::invalid_argument("winky_face: default layout needs k0 >= 3");
  return {{0, 0.25, 0, 1},     {0.75, 1, 0, 1},     {0.25, 0.75, 0, 0.25},
          {0.25, 0.75, 0.75, 1}, {0.25, 0.75, 0.25, 0.5}, {0.5, 0.75, 0.5, 0.75}};
}

MapSpec winky_face(int k0, const std::vector<Rect>& targets) {
  if (k0 < 0 || k0 > 10) throw std::invalid_argument("winky_face: need 0 <= k0 <= 10");
  if (targets.empty()) throw std::invalid_argument("winky_face: no targets");
  MapSpec m;
  m.name = "winky_face";
  m.family = "winky";
  m.dim = 2;
  m.params["k0"] = k0;
  std::uint64_t n = cells_at(2, k0);
  bool per_cell = targets.size() == n;
  for (std::uint64_t f = 0; f < n; ++f) {
    GridCell c = GridCell::from_flat(2, k0, f);
    Branch2D b;
    b.dom = {c.lo(0), c.hi(0), c.lo(1), c.hi(1)};
    b.img = per_cell ? targets[f] : targets[f % targets.size()];
    const Rect& t = b.img;
    if (!(t.x0 >= 0 && t.x1 <= 1 && t.y0 >= 0 && t.y1 <= 1 && t.x1 > t.x0 && t.y1 > t.y0))
      throw std::invalid_argument("winky_face: target outside the unit square");
    if (k0 > 0 && !(b.sx() > 1 && b.sy() > 1))
      throw std::invalid_argument("winky_face: branch is not expanding in both axes");
    m.b2.push_back(b);
  }
  return m;
}

// ---- skew product

double skew_g(double x) {
  if (x < 11.0 / 16) return 8 * x / 3 - 5.0 / 6;
  if (x < 7.0 / 8) return 8 * x / 3 - 4.0 / 3;
  return 4 * x - 3;
}

int skew_psi(double x, int sign) {
  int v = x < 11.0 / 16 ? -1 : (x < 7.0 / 8 ? 0 : 1);
  return sign * v;
}

int wild_psi_sign() {
  static const int sign = [] {
    const int i = 30, i0 = 1, k0 = 4;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.5, 1.0);
    double err[2] = {0, 0};
    const int cand[2] = {1, -1};
    for (int t = 0; t < 2000; ++t) {
      double x = u(rng);
      double lhs = wild_step(std::ldexp(x, -i), 1, 1, k0, i0, 60);
      for (int c = 0; c < 2; ++c) {
        double rhs = std::ldexp(skew_g(x), -(i + skew_psi(x, cand[c])));
        err[c] = std::max(err[c], std::abs(lhs - rhs) / std::ldexp(1.0, -i));
      }
    }
    return err[0] <= err[1] ? cand[0] : cand[1];
  }();
  return sign;
}

std::pair<double, int> skew_product_step(double x, int i) {
  if (!(x >= 0.5 && x < 1.0)) throw std::invalid_argument("skew_product_step: need x in [1/2,1)");
  return {skew_g(x), i + skew_psi(x, wild_psi_sign())};
}

double skew_drift_exact() {
  // normalised lengths 3/8, 3/8, 1/4 of the three pieces
  int sg = wild_psi_sign();
  return (3.0 / 8) * skew_psi(0.6, sg) + (3.0 / 8) * skew_psi(0.8, sg) + 0.25 * skew_psi(0.9, sg);
}

// ---- checks

bool BranchCheck::ok(double ti, double tj) const {
  return inverse_err <= ti && jacobian_err <= tj && expansion_ratio >= 1 - 1e-9;
}

BranchCheck check_branches(const MapSpec& m, int samples, unsigned seed) {
  BranchCheck r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (m.dim == 2) {
    for (auto& b : m.b2) {
      for (int t = 0; t < samples; ++t) {
        Pt y{b.img.x0 + u(rng) * (b.img.x1 - b.img.x0), b.img.y0 + u(rng) * (b.img.y1 - b.img.y0)};
        Pt z = b.fwd(b.inv(y));
        r.inverse_err = std::max(r.inverse_err, std::hypot(z.x - y.x, z.y - y.y));
      }
      double area_img = (b.img.x1 - b.img.x0) * (b.img.y1 - b.img.y0);
      double area_dom = (b.dom.x1 - b.dom.x0) * (b.dom.y1 - b.dom.y0);
      r.jacobian_err = std::max(r.jacobian_err, std::abs(b.inv_jac() * area_img - area_dom));
      r.expansion_ratio = std::min(r.expansion_ratio, std::min(b.sx(), b.sy()) / m.min_expansion());
    }
    return r;
  }
  const GLRule& gl = gl_rule(16);
  for (auto& b : m.b1) {
    double len = b.d - b.c;
    for (int t = 0; t < samples; ++t) {
      double y = b.c + u(rng) * len;
      double z = b.fwd(b.inv(y));
      r.inverse_err = std::max(r.inverse_err, std::abs(z - y));
      double x1 = b.a + u(rng) * (b.b - b.a), x2 = b.a + u(rng) * (b.b - b.a);
      if (std::abs(x1 - x2) > 1e-9 * (b.b - b.a)) {
        double q = std::abs(b.fwd(x1) - b.fwd(x2)) / std::abs(x1 - x2);
        r.expansion_ratio = std::min(r.expansion_ratio, q / b.expansion_lb);
      }
    }
    // panels graded geometrically toward both ends, where Lorenz jacobians are singular
    std::vector<double> t{0.0};
    for (int k = 40; k >= 2; --k) t.push_back(std::ldexp(1.0, -k));
    t.push_back(0.5);
    for (int k = 2; k <= 40; ++k) t.push_back(1 - std::ldexp(1.0, -k));
    t.push_back(1.0);
    double s = 0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      double c0 = b.c + len * t[k], c1 = b.c + len * t[k + 1];
      for (std::size_t q = 0; q < gl.x.size(); ++q) s += gl.w[q] * (c1 - c0) * b.inv_jac(c0 + (c1 - c0) * gl.x[q]);
    }
    r.jacobian_err = std::max(r.jacobian_err, std::abs(s - (b.b - b.a)) / (b.b - b.a));
  }
  return r;
}

}  // namespace bsv
