#include "bsv/normcmp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bsv/parallel.hpp"

namespace bsv {

namespace {
void need_1d(const PiecewiseConstantFn& f, const char* who) {
  if (f.dim != 1) throw std::invalid_argument(std::string(who) + ": interval functions only");
}
}  // namespace

std::vector<double> keller_osc(const PiecewiseConstantFn& f) {
  need_1d(f, "keller_osc");
  int K = f.level;
  long long N = 1ll << K;
  double h = f.cell_measure();
  const auto& v = f.values;
  std::vector<double> out(K + 1, 0.0);
  for (int i = 0; i <= K; ++i) {
    long long e = 1ll << (K - i);
    // window of cell m is [m-e, m+e] clamped; sliding max and min
    std::deque<long long> mx, mn;
    long long hi = -1;
    double acc = 0;
    for (long long m = 0; m < N; ++m) {
      long long lo = std::max(0ll, m - e), top = std::min(N - 1, m + e);
      while (hi < top) {
        ++hi;
        while (!mx.empty() && v[mx.back()] <= v[hi]) mx.pop_back();
        mx.push_back(hi);
        while (!mn.empty() && v[mn.back()] >= v[hi]) mn.pop_back();
        mn.push_back(hi);
      }
      while (mx.front() < lo) mx.pop_front();
      while (mn.front() < lo) mn.pop_front();
      acc += v[mx.front()] - v[mn.front()];
    }
    out[i] = acc * h;
  }
  return out;
}

double keller_var(const PiecewiseConstantFn& f, double s) {
  auto osc = keller_osc(f);
  double best = 0;
  for (std::size_t i = 0; i < osc.size(); ++i) best = std::max(best, osc[i] * std::pow(2.0, double(i) * s));
  return best;
}

double bv_norm(const PiecewiseConstantFn& f) {
  need_1d(f, "bv_norm");
  double tv = 0;
  for (std::size_t i = 1; i < f.size(); ++i) tv += std::abs(f.values[i] - f.values[i - 1]);
  return f.l1() + tv;
}

ButterleyValue butterley_upper(const PiecewiseConstantFn& f, double s) {
  need_1d(f, "butterley_upper");
  int K = f.level;
  std::vector<double> err(K + 1), bv(K + 1);
  for (int m = 0; m <= K; ++m) {
    PiecewiseConstantFn c = f.coarsen_to(m);
    bv[m] = bv_norm(c);
    err[m] = (c.refine_to(K) - f).l1();
  }
  ButterleyValue r;
  r.value = -1;
  for (int i = 0; i <= K + 1; ++i) {
    double best = 1e300;
    int arg = K;
    if (i <= K) {
      for (int m = 0; m <= K; ++m) {
        double v = std::pow(2.0, (i + 1) * s) * err[m] + std::pow(2.0, -i * (1 - s)) * bv[m];
        if (v < best) best = v, arg = m;
      }
    } else {
      best = std::pow(2.0, -(K + 1) * (1 - s)) * bv[K];
    }
    r.band_value.push_back(best);
    r.best_level.push_back(arg);
    if (best > r.value) r.value = best, r.worst_band = i;
  }
  return r;
}

double holder_seminorm(const std::vector<double>& g, double s) {
  std::size_t n = g.size();
  if (n < 2) return 0;
  double h = 1.0 / double(n - 1), a = 1 - s;
  std::vector<double> tab(n);
  for (std::size_t d = 1; d < n; ++d) tab[d] = std::pow(d * h, -a);
  double best = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double gi = g[i];
    for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, std::abs(g[j] - gi) * tab[j - i]);
  }
  return best;
}

std::vector<TestFn> liverani_dictionary(int K, double s) {
  std::size_t n = (std::size_t(1) << K) + 1;
  double h = 1.0 / double(n - 1);
  std::vector<TestFn> d;
  auto add = [&](auto fn, std::string kind) {
    TestFn t;
    t.kind = std::move(kind);
    t.g.resize(n);
    for (std::size_t j = 0; j < n; ++j) t.g[j] = fn(j * h);
    double sem = holder_seminorm(t.g, s);
    if (sem <= 1e-300) return;
    for (double& x : t.g) x /= sem;
    d.push_back(std::move(t));
  };
  for (int p = 1; p <= 8; ++p) add([p](double x) { return std::pow(x, p); }, "poly x^" + std::to_string(p));
  for (int p = 2; p <= 8; ++p)
    add([p](double x) { return std::pow(x - 0.5, p); }, "poly (x-1/2)^" + std::to_string(p));
  for (int m = 1; m <= 8; ++m) {
    add([m](double x) { return std::sin(std::numbers::pi * m * x); }, "sin " + std::to_string(m));
    add([m](double x) { return std::cos(std::numbers::pi * m * x); }, "cos " + std::to_string(m));
  }
  int jmax = std::min(K, 6);
  for (int j = 0; j <= jmax; ++j) {
    double w = std::ldexp(1.0, -j);
    for (int c = 0; c < (1 << j); ++c) {
      double a = c * w;
      add([a, w](double x) {
        if (x < a || x > a + w) return 0.0;
        double t = std::sin(std::numbers::pi * (x - a) / w);
        return t * t;
      }, "bump " + std::to_string(j) + ":" + std::to_string(c));
    }
  }
  for (int j = 0; j <= jmax; ++j) {
    double w = std::ldexp(1.0, -j);
    for (int c = 0; c < (1 << j); ++c) {
      double a = c * w;
      add([a, w](double x) {
        if (x < a || x > a + w) return 0.0;
        return std::min(x - a, a + w - x);
      }, "tent " + std::to_string(j) + ":" + std::to_string(c));
    }
  }
  return d;
}

namespace {
double pair_integral(const std::vector<double>& g, const PiecewiseConstantFn& f) {
  double acc = 0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += (g[j + 1] - g[j]) * f.values[j];
  return acc;
}

// g with g' = w (piecewise constant at level K), g(0) = 0, normalised
std::vector<double> antiderivative(const std::vector<double>& w, double s) {
  std::vector<double> g(w.size() + 1, 0.0);
  double h = 1.0 / double(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) g[j + 1] = g[j] + h * w[j];
  double sem = holder_seminorm(g, s);
  if (sem > 1e-300)
    for (double& x : g) x /= sem;
  else
    g.clear();
  return g;
}

const std::vector<TestFn>& cached_dictionary(int K, double s) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::vector<TestFn>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(K, s);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, liverani_dictionary(K, s)).first;
  return it->second;
}
}  // namespace

LiveraniValue liverani_lower(const PiecewiseConstantFn& f, double s, int dict_size, bool with_profiles) {
  need_1d(f, "liverani_lower");
  return liverani_lower(f, s, cached_dictionary(f.level, s), dict_size, with_profiles);
}

LiveraniValue liverani_lower(const PiecewiseConstantFn& f, double s, const std::vector<TestFn>& dict, int dict_size,
                             bool with_profiles) {
  need_1d(f, "liverani_lower");
  if (!dict.empty() && dict[0].g.size() != f.size() + 1)
    throw std::invalid_argument("liverani_lower: dictionary level mismatch");
  LiveraniValue r;
  std::size_t n = dict_size < 0 ? dict.size() : std::min<std::size_t>(dict.size(), dict_size);
  auto consider = [&](const std::vector<double>& g, const std::string& kind) {
    if (g.empty()) return;
    double v = std::abs(pair_integral(g, f));
    ++r.evaluated;
    if (v > r.value) r.value = v, r.best_kind = kind;
  };
  for (std::size_t i = 0; i < n; ++i) consider(dict[i].g, dict[i].kind);
  if (with_profiles) {
    int K = f.level;
    std::size_t N = f.size();
    HaarCoeffs c = haar_analysis(f);
    for (int k = 0; k < K; ++k) {
      std::vector<double> w(N, 0.0);
      std::size_t span = N >> k;
      for (std::size_t q = 0; q < (std::size_t(1) << k); ++q) {
        double d = c.details[k][q];
        double sg = d > 0 ? 1 : (d < 0 ? -1 : 0);
        for (std::size_t j = 0; j < span; ++j) w[q * span + j] = j < span / 2 ? sg : -sg;
      }
      consider(antiderivative(w, s), "haar profile " + std::to_string(k));
    }
    double mean = f.integral();
    std::vector<double> w(N);
    for (std::size_t j = 0; j < N; ++j) w[j] = f.values[j] - mean;
    consider(antiderivative(w, s), "centred primitive");
    std::vector<double> srt = f.values;
    // midpoint of the two middle values keeps the profile odd in f
    std::nth_element(srt.begin(), srt.begin() + N / 2, srt.end());
    double med = srt[N / 2];
    if (N % 2 == 0) med = 0.5 * (med + *std::max_element(srt.begin(), srt.begin() + N / 2));
    for (std::size_t j = 0; j < N; ++j) w[j] = f.values[j] > med ? 1.0 : (f.values[j] < med ? -1.0 : 0.0);
    consider(antiderivative(w, s), "sign primitive");
  }
  return r;
}

NormReport norm_report(const PiecewiseConstantFn& f, double s, const std::string& id, const std::vector<TestFn>* dict) {
  NormReport r;
  r.id = id;
  r.s = s;
  r.K = f.level;
  r.mean = f.integral();
  r.keller = keller_var(f, s);
  r.butterley = butterley_upper(f, s).value;
  r.liverani = dict ? liverani_lower(f, s, *dict).value : liverani_lower(f, s).value;
  HaarCoeffs c = haar_analysis(f);
  BesovParams b11(s, 1, 1);
  r.besov_haar = besov_norm_haar(c, b11);
  r.besov_atomic = besov_atomic_cost(c, b11);
  r.besov_osc = besov_norm_osc(f, s);
  return r;
}

InclusionResult inclusion_suite(const std::vector<PiecewiseConstantFn>& corpus, const std::vector<std::string>& ids,
                                double s, double slack) {
  if (corpus.size() != ids.size()) throw std::invalid_argument("inclusion_suite: ids and corpus differ in size");
  InclusionResult out;
  out.rows.resize(corpus.size());
  if (!corpus.empty()) cached_dictionary(corpus[0].level, s);
  parallel_for(corpus.size(), [&](std::size_t i) {
    InclusionRow& row = out.rows[i];
    row.r = norm_report(corpus[i], s, ids[i]);
    const NormReport& r = row.r;
    row.slack_keller = std::pow(2.0, s) * r.keller + std::abs(r.mean) - r.besov_osc;
    row.slack_liverani = r.besov_atomic - r.liverani;
    row.slack_butterley = 4 * r.butterley - r.besov_osc;
    row.pass = row.slack_keller >= -slack && row.slack_liverani >= -slack && row.slack_butterley >= -slack;
  }, 1);
  out.pass = true;
  auto ratio = [](double lhs, double rhs) { return rhs > 0 ? lhs / rhs : (lhs > 0 ? 1e300 : 0); };
  for (auto& row : out.rows) {
    if (!row.pass) ++out.failures, out.pass = false;
    const NormReport& r = row.r;
    out.worst_keller = std::max(out.worst_keller, ratio(r.besov_osc, std::pow(2.0, s) * r.keller + std::abs(r.mean)));
    out.worst_liverani = std::max(out.worst_liverani, ratio(r.liverani, r.besov_atomic));
    out.worst_butterley = std::max(out.worst_butterley, ratio(r.besov_osc, 4 * r.butterley));
  }
  return out;
}

void inclusion_corpus(int K, int n, std::uint64_t seed, std::vector<PiecewiseConstantFn>& fs,
                      std::vector<std::string>& ids) {
  fs.clear();
  ids.clear();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd;
  std::size_t N = std::size_t(1) << K;
  auto push = [&](PiecewiseConstantFn f, std::string id) {
    if (int(fs.size()) < n) fs.push_back(std::move(f)), ids.push_back(std::move(id));
  };
  push(PiecewiseConstantFn(1, K, 0.0), "zero");
  push(PiecewiseConstantFn(1, K, 1.0), "constant 1");
  push(PiecewiseConstantFn(1, K, -2.5), "constant -2.5");
  for (int st : {4, 16, 64}) {
    PiecewiseConstantFn f(1, K);
    for (std::size_t j = 0; j < N; ++j) f.values[j] = std::floor(double(j) * st / N) / st;
    push(f, "staircase " + std::to_string(st));
  }
  for (int t = 0; t < 15; ++t) {
    int k = int(u(rng) * (K + 1)) % (K + 1);
    std::size_t c = std::size_t(u(rng) * double(1ull << k)) % (1ull << k);
    PiecewiseConstantFn f(1, K);
    std::size_t span = N >> k;
    for (std::size_t j = c * span; j < (c + 1) * span; ++j) f.values[j] = 1;
    push(f, "dyadic indicator " + std::to_string(k) + ":" + std::to_string(c));
  }
  for (int t = 0; t < 15; ++t) {
    std::size_t a = std::size_t(u(rng) * N) % N, b = std::size_t(u(rng) * N) % N;
    if (a > b) std::swap(a, b);
    PiecewiseConstantFn f(1, K);
    for (std::size_t j = a; j <= b; ++j) f.values[j] = 1;
    push(f, "interval indicator " + std::to_string(a) + "-" + std::to_string(b));
  }
  int t = 0;
  while (int(fs.size()) < n) {
    HaarCoeffs c = HaarCoeffs::zero(1, K);
    c.mean = nd(rng);
    int terms = 2 + int(u(rng) * 20);
    for (int q = 0; q < terms; ++q) {
      int k = std::min(K - 1, int(u(rng) * K));
      std::uint32_t ix = std::uint32_t(u(rng) * double(1ull << k)) % (1u << k);
      c.set_detail(GridCell(1, k, ix), nd(rng));
    }
    push(haar_synthesis(c), "haar sparse " + std::to_string(t++));
  }
}

}  // namespace bsv
