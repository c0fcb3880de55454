#include "bsv/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bsv/parallel.hpp"

namespace bsv {

namespace {
double l1(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += std::abs(x);
  return s;
}
double sum(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

// power iteration on (A + shift I)/(1 + shift), shift = 0 or 1
bool power(const SparseOperator& op, double shift, double tol, int max_iter, EigenResult& r) {
  std::size_t n = op.n();
  std::vector<double> v(n, 1.0), w;
  double lam = 0;
  r.residual_history.clear();
  for (int it = 1; it <= max_iter; ++it) {
    op.multiply(v, w);
    double sv = sum(v);
    // Rayleigh-type estimate for a positive vector: mass ratio
    lam = sum(w) / sv;
    double res = 0;
    for (std::size_t i = 0; i < n; ++i) res += std::abs(w[i] - lam * v[i]);
    res /= l1(v);
    r.residual_history.push_back(res);
    r.iterations = it;
    r.lambda = lam;
    r.residual = res;
    if (res <= tol) {
      r.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) w[i] = (w[i] + shift * v[i]) / (1 + shift);
    double m = l1(w);
    if (m == 0) break;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / m;
  }
  double sv = sum(v);
  for (double& x : v) x /= sv;
  double cm = std::ldexp(1.0, -op.level * op.dim);
  // as a density: integral one
  for (double& x : v) x /= cm;
  r.v = PiecewiseConstantFn(op.dim, op.level, std::move(v));
  return r.converged;
}
}  // namespace

EigenResult leading_eigen(const SparseOperator& op, double tol, int max_iter) {
  EigenResult r;
  if (power(op, 0.0, tol, max_iter / 4, r)) return r;
  EigenResult lazy;
  if (power(op, 1.0, tol, max_iter, lazy)) {
    lazy.cesaro = true;
    return lazy;
  }
  // report whichever ended closer
  lazy.cesaro = true;
  return lazy.residual < r.residual ? lazy : r;
}

std::vector<double> dense_moduli(const SparseOperator& op) {
  std::size_t n = op.n();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = op.row_ptr[r]; k < op.row_ptr[r + 1]; ++k) A(r, op.col[k]) = op.val[k];
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::abs(es.eigenvalues()[i]));
  std::sort(out.rbegin(), out.rend());
  return out;
}

SecondModulus second_modulus(const SparseOperator& op, const EigenResult& lead, std::size_t dense_max, int block,
                             std::uint64_t seed) {
  SecondModulus out;
  std::size_t n = op.n();
  int m = int(std::min<std::size_t>(block, n > 1 ? n - 1 : 1));
  const std::vector<double>& v1 = lead.v.values;
  double iv1 = sum(v1);
  // P x = x - v1 (sum x)/(sum v1) kills the leading direction
  auto deflate = [&](Eigen::VectorXd& x) {
    double s = x.sum() / iv1;
    for (std::size_t i = 0; i < n; ++i) x[i] -= s * v1[i];
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd X(n, m);
  for (Eigen::Index c = 0; c < m; ++c)
    for (std::size_t i = 0; i < n; ++i) X(i, c) = nd(rng);
  std::vector<double> xin(n), yout;
  auto applyPA = [&](const Eigen::MatrixXd& Q) {
    Eigen::MatrixXd Y(n, Q.cols());
    for (Eigen::Index c = 0; c < Q.cols(); ++c) {
      for (std::size_t i = 0; i < n; ++i) xin[i] = Q(i, c);
      op.multiply(xin, yout);
      Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(yout.data(), n);
      deflate(y);
      Y.col(c) = y;
    }
    return Y;
  };
  for (Eigen::Index c = 0; c < m; ++c) {
    Eigen::VectorXd x = X.col(c);
    deflate(x);
    X.col(c) = x;
  }
  double prev = -1;
  int stable = 0;
  const int max_iter = 3000;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    Eigen::MatrixXd Qf = qr.householderQ() * Eigen::MatrixXd::Identity(n, X.cols());
    // columns that became dependent are numerical noise, typically from a
    // nilpotent part of the deflated operator; drop them
    Eigen::VectorXd rd = qr.matrixQR().diagonal().cwiseAbs();
    double rmax = rd.size() ? rd.maxCoeff() : 0;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < rd.size(); ++c)
      if (rd[c] > 1e-12 * rmax) keep.push_back(c);
    Eigen::MatrixXd Q(n, Eigen::Index(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) Q.col(Eigen::Index(c)) = Qf.col(keep[c]);
    Eigen::MatrixXd Y = applyPA(Q);
    double scale = Y.norm();
    out.iterations = it;
    if (keep.empty() || scale < 1e-12 || !std::isfinite(scale)) {
      out.modulus = 0;
      out.ritz.assign(m, 0.0);
      out.converged = std::isfinite(scale);
      break;
    }
    if (it % 5 == 0 || it == max_iter) {
      Eigen::MatrixXd H = Q.transpose() * Y;
      Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(H, true);
      // a Ritz pair counts once its own residual |PA Q z - theta Q z| is small;
      // an unconverged trailing column can carry a spurious large Ritz value
      Eigen::MatrixXcd QZ = Q.cast<std::complex<double>>() * es.eigenvectors();
      Eigen::MatrixXcd YZ = Y.cast<std::complex<double>>() * es.eigenvectors();
      std::vector<double> mods;
      double top = -1, loose = 0;
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        std::complex<double> th = es.eigenvalues()[i];
        double a = std::abs(th);
        mods.push_back(a);
        loose = std::max(loose, a);
        double rn = (YZ.col(i) - th * QZ.col(i)).norm() / std::max(1e-300, QZ.col(i).norm());
        if (rn <= 1e-9 * std::max(1.0, a)) top = std::max(top, a);
      }
      std::sort(mods.rbegin(), mods.rend());
      out.ritz = mods;
      out.modulus = top >= 0 ? top : loose;
      if (top >= 0 && std::abs(top - prev) <= 1e-11 * std::max(1.0, top)) {
        if (++stable >= 2) {
          out.converged = true;
          break;
        }
      } else {
        stable = 0;
      }
      if (loose < 1e-14) {
        out.modulus = loose;
        out.converged = true;
        break;
      }
      prev = top;
    }
    X = Y / scale;
  }
  if (n <= dense_max) {
    auto mods = dense_moduli(op);
    // drop the eigenvalue matching lambda_1
    std::size_t drop = 0;
    double best = 1e300;
    for (std::size_t i = 0; i < mods.size(); ++i)
      if (std::abs(mods[i] - std::abs(lead.lambda)) < best) best = std::abs(mods[i] - std::abs(lead.lambda)), drop = i;
    mods.erase(mods.begin() + drop);
    out.dense = mods.empty() ? 0 : mods[0];
  }
  return out;
}

// ---- probes

ProbeSet make_probes(int dim, int K, const BesovParams& bp, int n, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("make_probes: empty probe set");
  ProbeSet ps;
  ps.dim = dim;
  ps.level = K;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd;
  int pc = dim == 1 ? 1 : 3;
  auto rand_cell = [&](int k) {
    std::uint64_t side = 1ull << k;
    std::uint32_t ix = std::uint32_t(std::min<std::uint64_t>(side - 1, std::uint64_t(u(rng) * double(side))));
    std::uint32_t iy = std::uint32_t(std::min<std::uint64_t>(side - 1, std::uint64_t(u(rng) * double(side))));
    return GridCell(dim, k, ix, iy);
  };
  ps.f.push_back(PiecewiseConstantFn(dim, K, 1.0));
  ps.kind.push_back("constant");
  int n_det = n / 4, n_atom = n / 5, n_sparse = (7 * n) / 20;
  for (int t = 0; t < n_det; ++t) {
    // a third of the details sit on the two finest levels
    int k = t % 3 == 0 ? K - 1 - (t / 3) % 2 : int(u(rng) * K);
    k = std::clamp(k, 0, K - 1);
    ps.f.push_back(haar_fn(rand_cell(k), K, int(u(rng) * pc) % pc));
    ps.kind.push_back("haar");
  }
  for (int t = 0; t < n_atom; ++t) {
    int k = std::clamp(int(u(rng) * (K + 1)), 0, K);
    ps.f.push_back(atom_as_fn({rand_cell(k), bp.s, bp.p}, K));
    ps.kind.push_back("atom");
  }
  for (int t = 0; t < n_sparse; ++t) {
    HaarCoeffs c = HaarCoeffs::zero(dim, K);
    c.mean = nd(rng) * 0.3;
    int terms = 3 + int(u(rng) * 18);
    for (int q = 0; q < terms; ++q) {
      int k = std::clamp(int(u(rng) * K), 0, K - 1);
      c.set_detail(rand_cell(k), nd(rng), int(u(rng) * pc) % pc);
    }
    ps.f.push_back(haar_synthesis(c));
    ps.kind.push_back("sparse");
  }
  while (int(ps.f.size()) < n) {
    int M = 1 + int(u(rng) * 6);
    std::vector<double> amp, fr, ph, amp2, fr2;
    for (int q = 0; q < M; ++q) {
      amp.push_back(nd(rng) / (1 + q));
      fr.push_back(1 + q + int(u(rng) * 4));
      ph.push_back(2 * std::numbers::pi * u(rng));
      fr2.push_back(1 + int(u(rng) * 4));
    }
    double c0 = nd(rng);
    const double tp = 2 * std::numbers::pi;
    if (dim == 1) {
      // exact cell averages from the antiderivative sin(w x + ph) / w at the nodes
      PiecewiseConstantFn g(1, K, c0);
      std::size_t N = g.size();
      double h = 1.0 / double(N);
      for (int q = 0; q < M; ++q) {
        double w = tp * fr[q];
        double prev = std::sin(ph[q]);
        for (std::size_t j = 0; j < N; ++j) {
          double nx = std::sin(w * double(j + 1) * h + ph[q]);
          g.values[j] += amp[q] * (nx - prev) / (w * h);
          prev = nx;
        }
      }
      ps.f.push_back(std::move(g));
    } else {
      ps.f.push_back(project2([=](double x, double y) {
        double v = c0;
        for (int q = 0; q < M; ++q) v += amp[q] * std::cos(tp * fr[q] * x + ph[q]) * std::cos(tp * fr2[q] * y);
        return v;
      }, K, 2));
    }
    ps.kind.push_back("smooth");
  }
  ps.descriptor = "n=" + std::to_string(ps.f.size()) + " seed=" + std::to_string(seed) +
                  " mix=constant,haar,atom,sparse,smooth";
  return ps;
}

// ---- Lasota-Yorke fitting

LYFit ly_fit_ratios(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || a.size() != b.size()) throw std::invalid_argument("ly_fit: empty probe set");
  double bmin = 1e300;
  for (double x : b)
    if (x > 0) bmin = std::min(bmin, x);
  LYFit best;
  double best_obj = 1e300;
  for (int t = -1; t <= 800; ++t) {
    double C = t < 0 ? 0.0 : std::pow(10.0, -4.0 + 8.0 * t / 800.0);
    double lam = 0;
    int worst = -1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double v = a[i] - C * b[i];
      if (v > lam) lam = v, worst = int(i);
    }
    double obj = lam + C * bmin;
    if (obj < best_obj - 1e-12 * std::max(1.0, best_obj)) {
      best_obj = obj;
      best.C = C;
      best.lambda = lam;
      best.worst_probe = worst;
    }
  }
  return best;
}

std::vector<LYFit> ly_fit(const SparseOperator& op, const BesovParams& bp, int j_max, const ProbeSet& ps) {
  if (ps.f.empty()) throw std::invalid_argument("ly_fit: empty probe set");
  if (ps.level != op.level || ps.dim != op.dim) throw std::invalid_argument("ly_fit: probe level mismatch");
  std::size_t P = ps.f.size();
  std::vector<std::vector<double>> a(j_max + 1, std::vector<double>(P)), b(j_max + 1, std::vector<double>(P));
  parallel_for(P, [&](std::size_t i) {
    const PiecewiseConstantFn& f0 = ps.f[i];
    double nf = besov_norm_haar(f0, bp), l1 = f0.l1();
    PiecewiseConstantFn cur = f0;
    for (int j = 0; j <= j_max; ++j) {
      if (j > 0) cur = apply(op, cur);
      a[j][i] = nf > 0 ? besov_norm_haar(cur, bp) / nf : 0;
      b[j][i] = nf > 0 ? l1 / nf : 0;
    }
  }, 1);
  std::vector<LYFit> out;
  for (int j = 0; j <= j_max; ++j) {
    LYFit f = ly_fit_ratios(a[j], b[j]);
    f.j = j;
    f.level = op.level;
    f.bp = bp;
    f.probes = ps.descriptor;
    f.lambda_root = j > 0 ? std::pow(f.lambda, 1.0 / j) : f.lambda;
    // invariant check: residual over all probes, in units of the probe norm
    double slack = 0;
    for (std::size_t i = 0; i < P; ++i) slack = std::max(slack, a[j][i] - f.C * b[j][i] - f.lambda);
    f.slack = slack;
    out.push_back(f);
  }
  return out;
}

// ---- essential spectral radius bounds

// Lap-count growth: log(N_j / N_{j-1}), N_j the number of monotone pieces of f^j.
double htop_estimate(const MapSpec& m, int j) {
  if (m.dim != 1) throw std::invalid_argument("htop_estimate: 1D maps only");
  j = std::clamp(j, 2, 24);
  std::vector<std::pair<double, double>> imgs;
  for (auto& b : m.b1) imgs.push_back({b.c, b.d});
  double prev = 1, cur = double(imgs.size());
  for (int step = 1; step < j; ++step) {
    std::vector<std::pair<double, double>> next;
    for (auto& y : imgs)
      for (auto& b : m.b1) {
        double lo = std::max(y.first, b.a), hi = std::min(y.second, b.b);
        if (hi - lo <= 1e-14) continue;
        double u = b.fwd(lo), v = b.fwd(std::nextafter(hi, lo));
        if (u > v) std::swap(u, v);
        next.push_back({u, v});
      }
    imgs.swap(next);
    prev = cur;
    cur = double(imgs.size());
    if (imgs.size() > 4000000) break;
  }
  return std::log(cur / prev);
}

EssBound ess_bound(const MapSpec& m, const BesovParams& bp) {
  EssBound e;
  e.family = m.family;
  double s = bp.s, pc = bp.pconj();
  double infd = m.min_expansion();
  e.ingredients["inf_expansion"] = infd;
  e.ingredients["s"] = s;
  e.ingredients["p_conj"] = std::isinf(pc) ? -1 : pc;
  if (m.family == "markov-affine" || m.family == "markov") {
    e.formula = "(inf w)^-s";
    e.value = std::pow(infd, -s);
  } else if (m.family == "tent") {
    double t = m.params.at("t");
    e.formula = "(2t)^-s";
    e.value = std::pow(2 * t, -s);
    double h = htop_estimate(m, 12);
    e.ingredients["h_top"] = h;
    double ip = std::isinf(pc) ? 0.0 : 1.0 / pc;
    e.ingredients["c1plus_formula"] = std::exp(h * ip) * std::pow(infd, -(ip + s));
  } else if (m.family == "c1plus") {
    double h = htop_estimate(m, 12);
    double ip = std::isinf(pc) ? 0.0 : 1.0 / pc;
    e.ingredients["h_top"] = h;
    e.formula = "exp(h_top/p') (inf|f'|)^-(1/p'+s)";
    e.value = std::exp(h * ip) * std::pow(infd, -(ip + s));
  } else if (m.family == "pbv") {
    e.formula = "(inf|f'|)^-s";
    e.value = std::pow(infd, -s);
  } else if (m.family == "lorenz") {
    e.formula = "alpha^-s";
    e.value = std::pow(infd, -s);
  } else if (m.family == "winky") {
    e.formula = "(min singular value)^-Ds";
    e.value = std::pow(infd, -2 * s);
    e.ingredients["D"] = 2;
  } else {
    throw std::domain_error("ess_bound: no bound formula for family '" + m.family + "' (LY-only)");
  }
  return e;
}

PartitionSum markov_partition_sum(const MapSpec& m, int j, double s, double pc) {
  if (m.dim != 1 || !m.full_branch()) throw std::invalid_argument("markov_partition_sum: need a 1D full-branch Markov map");
  if (j < 0 || j > 16) throw std::invalid_argument("markov_partition_sum: depth out of range");
  PartitionSum r;
  std::vector<std::pair<double, double>> cyl{{0.0, 1.0}}, next;
  for (int k = 0; k < j; ++k) {
    next.clear();
    for (auto& c : cyl)
      for (auto& b : m.b1) {
        double u = b.inv(c.first), v = b.inv(c.second);
        if (u > v) std::swap(u, v);
        next.push_back({u, v});
      }
    cyl.swap(next);
  }
  double e = 1 + s * pc;
  for (auto& c : cyl) r.sum += std::pow(c.second - c.first, e);
  r.cells = cyl.size();
  r.root = j > 0 ? std::pow(r.sum, 1.0 / j) : r.sum;
  r.root_p = std::pow(r.root, 1.0 / pc);
  return r;
}

}  // namespace bsv
