#include "bsv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bsv/parallel.hpp"
#include "bsv/rng.hpp"

namespace bsv {

AcimResult acim(const SparseOperator& op, double tol, std::optional<BesovParams> bp) {
  AcimResult r;
  EigenResult e = leading_eigen(op, tol);
  r.lambda = e.lambda;
  r.residual = e.residual;
  r.converged = e.converged;
  r.cesaro = e.cesaro;
  r.density = std::move(e.v);
  for (double& v : r.density.values) v = std::max(v, 0.0);
  double I = r.density.integral();
  if (I > 0) r.density *= 1.0 / I;
  r.drains = r.lambda < 1 - std::max(tol, 1e-9);
  if (bp) r.besov_norm = besov_norm_haar(r.density, *bp);
  std::ostringstream os;
  os.precision(12);
  os << "lambda1=" << r.lambda << " residual=" << r.residual << " iterations=" << e.iterations
     << (r.cesaro ? " cesaro" : "") << (r.drains ? " drains" : "");
  r.diagnostics = os.str();
  return r;
}

AcimResult acim(const MapSpec& m, int K, double tol, std::optional<BesovParams> bp) {
  return acim(ulam_matrix(m, K), tol, bp);
}

double fit_decay_rate(const std::vector<double>& C, int& from, int& to) {
  from = to = 0;
  if (C.size() < 3) return 0;
  double cmax = *std::max_element(C.begin(), C.end());
  if (!(cmax > 0)) return 0;
  int end = 1;
  while (end < int(C.size()) && C[end] > 1e-13 * cmax && C[end] > 1e-300) ++end;
  // usable points are 1..end-1
  if (end - 1 < 2) {
    from = to = 1;
    return end > 1 && C[0] > 0 ? C[1] / C[0] : 0;
  }
  from = std::max(1, end / 2);
  to = end - 1;
  if (to - from < 1) from = to - 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int i = from; i <= to; ++i) {
    double y = std::log(C[i]);
    sx += i, sy += y, sxx += double(i) * i, sxy += i * y, ++n;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::exp(slope);
}

Correlations correlations(const SparseOperator& op, const PiecewiseConstantFn& rho, const PiecewiseConstantFn& phi,
                          const PiecewiseConstantFn& psi, int n_max) {
  if (rho.size() != op.n() || phi.size() != op.n() || psi.size() != op.n())
    throw std::invalid_argument("correlations: observables must live at the operator level");
  if (!(rho.integral() > 0)) throw std::domain_error("correlations: no acim");
  Correlations out;
  double mu_phi = inner(phi, rho) / rho.integral(), m_psi = psi.integral();
  PiecewiseConstantFn cur = psi;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) cur = apply(op, cur);
    out.C.push_back(std::abs(inner(phi, cur) - mu_phi * m_psi));
  }
  out.rate = fit_decay_rate(out.C, out.fit_from, out.fit_to);
  return out;
}

EscapeReport wild_escape(double alpha, double zeta, int k0, std::uint64_t N, std::uint64_t T, double threshold,
                         std::uint64_t seed, std::uint64_t drift_steps) {
  if (N == 0) throw std::invalid_argument("wild_escape: need N >= 1");
  if (!(threshold > 0 && threshold < 1)) throw std::invalid_argument("wild_escape: threshold in (0,1)");
  // validates the parameters
  (void)wild_family(alpha, zeta, k0, WildOptions{60, false});
  int i0 = wild_i0(alpha);
  EscapeReport r;
  r.alpha = alpha, r.zeta = zeta, r.k0 = k0, r.N = N, r.T = T, r.threshold = threshold, r.seed = seed;
  std::vector<double> esc_time(N, -1.0);
  std::vector<char> below(N, 0);
  parallel_for(N, [&](std::size_t o) {
    Philox4x32 g(seed, o);
    double x = g.uniform();
    bool absorbed = false;
    if (x < threshold) esc_time[o] = 0;
    for (std::uint64_t t = 1; t <= T && !absorbed; ++t) {
      x = wild_step(x, alpha, zeta, k0, i0, 60);
      if (x < 0) absorbed = true;
      if ((absorbed || x < threshold) && esc_time[o] < 0) esc_time[o] = double(t);
    }
    below[o] = absorbed || x < threshold;
  }, 16);
  std::uint64_t ne = 0, nb = 0;
  double st = 0;
  for (std::size_t o = 0; o < N; ++o) {
    if (esc_time[o] >= 0) ++ne, st += esc_time[o];
    nb += below[o];
  }
  r.escaped = double(ne) / N;
  r.escaped_se = std::sqrt(std::max(0.0, r.escaped * (1 - r.escaped)) / N);
  r.final_below = double(nb) / N;
  r.mean_escape_time = ne ? st / ne : 0;
  // drift: Birkhoff means of the level increment along skew-product orbits
  r.drift_steps = drift_steps;
  if (drift_steps > 0) {
    std::vector<double> mean(N);
    parallel_for(N, [&](std::size_t o) {
      Philox4x32 g(seed ^ 0x5eed5eed5eedull, o);
      double x = 0.5 + 0.5 * g.uniform();
      long long lev = 0;
      for (std::uint64_t t = 0; t < drift_steps; ++t) {
        auto [y, i] = skew_product_step(x, int(lev));
        lev = i;
        x = std::clamp(y, 0.5, std::nextafter(1.0, 0.0));
      }
      mean[o] = double(lev) / double(drift_steps);
    }, 16);
    double m = 0, v = 0;
    for (double a : mean) m += a;
    m /= N;
    for (double a : mean) v += (a - m) * (a - m);
    r.drift = m;
    r.drift_se = N > 1 ? std::sqrt(v / (N - 1) / N) : 0;
  }
  return r;
}

SupportReport support_report(const PiecewiseConstantFn& rho, double floor_rel) {
  SupportReport r;
  r.dim = rho.dim, r.level = rho.level;
  double mx = 0;
  for (double v : rho.values) mx = std::max(mx, v);
  r.floor = floor_rel * mx;
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (rho.values[i] > r.floor) r.cells.push_back(i);
  r.measure = double(r.cells.size()) * rho.cell_measure();
  return r;
}

SupportStability support_stability(const std::vector<SupportReport>& reps, double tol) {
  SupportStability s;
  for (auto& r : reps) s.measures.push_back(r.measure);
  for (std::size_t i = 1; i < reps.size(); ++i) {
    double a = reps[i - 1].measure, b = reps[i].measure;
    s.max_rel_change = std::max(s.max_rel_change, std::abs(b - a) / std::max(1e-300, std::max(a, b)));
  }
  s.stable = !reps.empty() && s.max_rel_change <= tol;
  return s;
}

ForwardCheck support_forward_check(const MapSpec& m, const SupportReport& rep) {
  int K = rep.level;
  std::uint64_t side = 1ull << K;
  std::size_t n = rep.dim == 1 ? side : side * side;
  std::vector<char> in(n, 0), hit(n, 0);
  for (auto c : rep.cells) in[c] = 1;
  double h = std::ldexp(1.0, -K);
  auto mark1 = [&](double u, double v) {
    if (u > v) std::swap(u, v);
    u = std::max(u, 0.0), v = std::min(v, 1.0);
    if (!(v > u)) return;
    std::uint64_t i0 = std::uint64_t(u / h), i1 = std::min<std::uint64_t>(side, std::uint64_t(std::ceil(v / h)));
    for (std::uint64_t i = i0; i < i1; ++i) hit[i] = 1;
  };
  for (auto c : rep.cells) {
    if (rep.dim == 1) {
      double x0 = c * h, x1 = x0 + h;
      for (auto& b : m.b1) {
        double lo = std::max(x0, b.a), hi = std::min(x1, b.b);
        if (hi - lo <= 0) continue;
        mark1(b.fwd(lo), b.fwd(std::nextafter(hi, lo)));
      }
    } else {
      GridCell q = GridCell::from_flat(2, K, c);
      Rect cr{q.lo(0), q.hi(0), q.lo(1), q.hi(1)};
      for (auto& b : m.b2) {
        Rect r{std::max(cr.x0, b.dom.x0), std::min(cr.x1, b.dom.x1), std::max(cr.y0, b.dom.y0),
               std::min(cr.y1, b.dom.y1)};
        if (r.x1 <= r.x0 || r.y1 <= r.y0) continue;
        Pt p0 = b.fwd({r.x0, r.y0}), p1 = b.fwd({r.x1, r.y1});
        std::uint64_t ix0 = std::uint64_t(std::max(0.0, p0.x) / h), iy0 = std::uint64_t(std::max(0.0, p0.y) / h);
        std::uint64_t ix1 = std::min<std::uint64_t>(side, std::uint64_t(std::ceil(p1.x / h - 1e-9)));
        std::uint64_t iy1 = std::min<std::uint64_t>(side, std::uint64_t(std::ceil(p1.y / h - 1e-9)));
        for (std::uint64_t iy = iy0; iy < iy1; ++iy)
          for (std::uint64_t ix = ix0; ix < ix1; ++ix) hit[iy * side + ix] = 1;
      }
    }
  }
  ForwardCheck fc;
  double cm = rep.dim == 1 ? h : h * h;
  std::size_t perim = 0;
  for (auto c : rep.cells) {
    if (!hit[c]) fc.uncovered += cm;
    bool edge = false;
    if (rep.dim == 1) {
      edge = (c > 0 && !in[c - 1]) || (c + 1 < side && !in[c + 1]);
    } else {
      std::uint64_t ix = c % side, iy = c / side;
      edge = (ix > 0 && !in[c - 1]) || (ix + 1 < side && !in[c + 1]) || (iy > 0 && !in[c - side]) ||
             (iy + 1 < side && !in[c + side]);
    }
    perim += edge;
  }
  fc.allowed = 4 * cm * double(perim);
  return fc;
}

}  // namespace bsv
