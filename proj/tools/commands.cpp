#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "bsv/besov.hpp"
#include "bsv/io.hpp"
#include "bsv/normcmp.hpp"
#include "bsv/parallel.hpp"
#include "bsv/regular.hpp"
#include "bsv/spectral.hpp"
#include "bsv/stats.hpp"
#include "bsv/transfer.hpp"
#include "json.hpp"

namespace bsv::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Ctx {
  ExperimentConfig cfg;
  std::string out_dir;
  std::ostream* out;
};

// ---- parsing helpers

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<double> numbers(const std::string& s, const std::string& what) {
  std::vector<double> v;
  for (auto& t : split(s, ',')) {
    std::size_t pos = 0;
    double x;
    try {
      x = std::stod(t, &pos);
    } catch (...) {
      throw ConfigError(what + ": bad number '" + t + "'");
    }
    if (pos != t.size()) throw ConfigError(what + ": bad number '" + t + "'");
    v.push_back(x);
  }
  return v;
}

std::pair<std::string, std::string> head_tail(const std::string& spec) {
  auto c = spec.find(':');
  if (c == std::string::npos) return {spec, ""};
  return {spec.substr(0, c), spec.substr(c + 1)};
}

int K_of(const Ctx& c, int def) { return c.cfg.integer("discretization", "K", def); }

std::uint64_t seed_of(const Ctx& c, std::uint64_t def) {
  double v = c.cfg.num("experiment", "seed", double(def));
  if (v < 0 || v != std::floor(v)) throw ConfigError("experiment.seed must be a non-negative integer");
  return std::uint64_t(v);
}

BesovParams space_of(const Ctx& c) {
  try {
    return BesovParams(c.cfg.num("space", "s", 0.5), c.cfg.num("space", "p", 1), c.cfg.num("space", "q", 1));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string out_path(const Ctx& c, const std::string& def) {
  return join_path(c.out_dir, c.cfg.str("experiment", "out", def));
}

std::string sibling(const std::string& csv, const std::string& suffix) {
  std::filesystem::path p(csv);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

void base_meta(CsvTable& t, const Ctx& c, const std::string& op) {
  t.meta("version", kVersion);
  t.meta("op", op);
  for (auto& [sec, kv] : c.cfg.entries())
    for (auto& [k, v] : kv)
      if (!(sec == "experiment" && k == "out")) t.meta(sec + "." + k, v);
}

void wrote(const Ctx& c, const std::string& path) { *c.out << "wrote " << path << "\n"; }

// ---- maps

// "affine:a,b,c,d[,dec]; power:a,b,c,d,gamma[,right]"
std::vector<PieceSpec> parse_pieces(const std::string& spec) {
  std::vector<PieceSpec> out;
  for (auto& raw : split(spec, ';')) {
    std::string item = raw;
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    auto [kind, rest] = head_tail(item);
    auto parts = split(rest, ',');
    std::string flag;
    if (!parts.empty() && (parts.back() == "dec" || parts.back() == "right" || parts.back() == "inc" || parts.back() == "left")) {
      flag = parts.back();
      parts.pop_back();
    }
    std::string nums;
    for (std::size_t i = 0; i < parts.size(); ++i) nums += (i ? "," : "") + parts[i];
    auto v = numbers(nums, "map.branches piece '" + item + "'");
    PieceSpec p;
    if (kind == "affine" && v.size() == 4 && (flag.empty() || flag == "dec" || flag == "inc")) {
      p.increasing = flag != "dec";
    } else if (kind == "power" && v.size() == 5 && (flag.empty() || flag == "left" || flag == "right")) {
      p.power = true;
      p.gamma = v[4];
      p.singular_left = flag != "right";
    } else {
      throw ConfigError("map.branches: cannot parse piece '" + item + "'");
    }
    p.a = v[0], p.b = v[1], p.c = v[2], p.d = v[3];
    out.push_back(p);
  }
  if (out.empty()) throw ConfigError("map.branches is required for map 'piecewise'");
  return out;
}

const std::map<std::string, std::vector<std::string>>& map_keys() {
  static const std::map<std::string, std::vector<std::string>> k = {
      {"linear_circle", {"l"}},
      {"tent", {"t"}},
      {"beta_map", {"beta"}},
      {"markov_holder", {"n", "amplitude"}},
      {"lorenz", {"gamma"}},
      {"wild", {"alpha", "zeta", "k0", "i_max", "verbatim"}},
      {"besov_jacobian", {"fraction"}},
      {"winky_face", {"k0"}},
      {"piecewise", {"branches"}},
  };
  return k;
}

}  // namespace

MapSpec build_map(const ExperimentConfig& c) {
  std::string name = c.str("map", "name", "linear_circle");
  auto it = map_keys().find(name);
  if (it == map_keys().end()) throw ConfigError("map: unknown map '" + name + "'");
  if (c.entries().count("map"))
    for (auto& [k, v] : c.entries().at("map"))
      if (k != "name" && std::find(it->second.begin(), it->second.end(), k) == it->second.end())
        throw ConfigError("map: key '" + k + "' does not apply to map '" + name + "'");
  try {
    if (name == "linear_circle") return linear_circle(c.integer("map", "l", 2));
    if (name == "tent") return tent(c.num("map", "t", 0.8));
    if (name == "beta_map") return beta_map(c.num("map", "beta", 2.5));
    if (name == "markov_holder") return markov_holder(c.integer("map", "n", 2), c.num("map", "amplitude", 0.1));
    if (name == "lorenz") return lorenz_map(c.num("map", "gamma", 1.0));
    if (name == "wild") {
      WildOptions o;
      o.i_max = c.integer("map", "i_max", 30);
      o.verbatim = c.integer("map", "verbatim", 0) != 0;
      return wild_family(c.num("map", "alpha", 1), c.num("map", "zeta", 1), c.integer("map", "k0", 4), o);
    }
    if (name == "besov_jacobian")
      return besov_jacobian_family(besov_jacobian_default(c.num("map", "fraction", 0.1)),
                                   c.integer("discretization", "table_log2", 18));
    if (name == "piecewise") return piecewise_map(parse_pieces(c.str("map", "branches", "")));
    int k0 = c.integer("map", "k0", 3);
    return winky_face(k0, winky_default_targets(k0));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

std::string map_label(const MapSpec& m) {
  std::string s = m.name;
  for (auto& [k, v] : m.params) s += " " + k + "=" + fmt(v);
  return s;
}

std::string ess_text(const MapSpec& m, const BesovParams& bp, double* value = nullptr) {
  try {
    EssBound e = ess_bound(m, bp);
    if (value) *value = e.value;
    return fmt(e.value);
  } catch (const std::domain_error&) {
    if (value) *value = std::nan("");
    return "LY-only";
  }
}

SparseOperator build_operator(const Ctx& c, const MapSpec& m, int K) {
  std::string mode = c.cfg.str("discretization", "mode", "ulam");
  if (mode == "ulam") return ulam_matrix(m, K);
  if (mode == "weighted")
    return weighted_matrix(m, c.cfg.num("discretization", "tau", 1.0), K, c.cfg.integer("discretization", "quad_order", 8));
  throw ConfigError("discretization.mode must be ulam or weighted");
}

// sweep values for one map key, or the configured map once
std::vector<std::pair<std::string, ExperimentConfig>> sweep_configs(const Ctx& c) {
  std::vector<std::pair<std::string, ExperimentConfig>> out;
  if (!c.cfg.has("experiment", "sweep")) {
    out.push_back({"", c.cfg});
    return out;
  }
  std::string key = c.cfg.str("experiment", "sweep_key", "");
  if (key.empty()) throw ConfigError("experiment.sweep needs experiment.sweep_key");
  std::string raw = c.cfg.str("experiment", "sweep", "");
  c.cfg.list("experiment", "sweep", {});
  for (auto& v : split(raw, ',')) {
    ExperimentConfig e = c.cfg;
    std::string t = v;
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
    e.set("map", key, t);
    out.push_back({t, e});
  }
  return out;
}

// ---- test functions

PiecewiseConstantFn parse_function(const std::string& spec, int dim, int K, const BesovParams& bp) {
  auto [kind, rest] = head_tail(spec);
  auto num = [&](std::size_t n) {
    auto v = rest.empty() ? std::vector<double>{} : numbers(rest, "function '" + spec + "'");
    if (v.size() != n) throw ConfigError("function '" + spec + "': expected " + std::to_string(n) + " numbers");
    return v;
  };
  auto cell = [&](const std::vector<double>& v, std::size_t at) {
    int k = int(v[at]);
    try {
      return dim == 1 ? GridCell(1, k, std::uint32_t(v[at + 1])) : GridCell(2, k, std::uint32_t(v[at + 1]), std::uint32_t(v[at + 2]));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("function '") + spec + "': " + e.what());
    }
  };
  if (kind == "file") {
    PiecewiseConstantFn f;
    try {
      f = read_function(rest);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (f.dim != dim) throw ConfigError("function '" + spec + "': file has dim " + std::to_string(f.dim));
    return f;
  }
  const double tp = 2 * std::numbers::pi;
  if (kind == "const") return PiecewiseConstantFn(dim, K, num(1)[0]);
  if (kind == "cos") {
    double m = num(1)[0];
    if (dim == 1) return project([=](double x) { return std::cos(tp * m * x); }, K);
    return project2([=](double x, double y) { return std::cos(tp * m * x) * std::cos(tp * m * y); }, K, 4);
  }
  if (kind == "haar") {
    auto v = num(dim == 1 ? 2 : 4);
    GridCell q = cell(v, 0);
    if (q.level >= K) throw ConfigError("function '" + spec + "': detail level must be below K");
    return haar_fn(q, K, dim == 1 ? 0 : int(v[3]));
  }
  if (kind == "atom") {
    auto v = num(dim == 1 ? 2 : 3);
    GridCell q = cell(v, 0);
    if (q.level > K) throw ConfigError("function '" + spec + "': atom level above K");
    return atom_as_fn({q, bp.s, bp.p}, K);
  }
  if (dim != 1) throw ConfigError("function '" + spec + "' is available on the interval only");
  if (kind == "indicator") {
    auto v = num(2);
    if (!(v[0] < v[1])) throw ConfigError("function '" + spec + "': need a < b");
    return project_indicator(Region::intervals({{v[0], v[1]}}), K);
  }
  if (kind == "remark") return project(remark_potential, K);
  if (kind == "staircase") {
    int n = int(num(1)[0]);
    if (n < 1) throw ConfigError("function '" + spec + "': need n >= 1");
    PiecewiseConstantFn f(1, K);
    for (std::size_t j = 0; j < f.size(); ++j) f.values[j] = std::floor(double(j) * n / double(f.size())) / n;
    return f;
  }
  throw ConfigError("unknown function '" + spec + "'");
}

Region parse_region(const std::string& spec) {
  auto [kind, rest] = head_tail(spec);
  try {
    if (kind == "intervals") {
      std::vector<Interval> iv;
      for (auto& p : split(rest, ';')) {
        auto v = numbers(p, "region");
        if (v.size() != 2) throw ConfigError("region: intervals take a,b pairs");
        iv.push_back({v[0], v[1]});
      }
      return Region::intervals(iv);
    }
    if (kind == "rects") {
      std::vector<Rect> rs;
      for (auto& p : split(rest, ';')) {
        auto v = numbers(p, "region");
        if (v.size() != 4) throw ConfigError("region: rects take x0,x1,y0,y1");
        rs.push_back({v[0], v[1], v[2], v[3]});
      }
      return Region::rects(rs);
    }
    if (kind == "polygon") {
      std::vector<Pt> pts;
      for (auto& p : split(rest, ';')) {
        auto v = numbers(p, "region");
        if (v.size() != 2) throw ConfigError("region: polygon vertices are x,y");
        pts.push_back({v[0], v[1]});
      }
      return Region::polygon(pts);
    }
    if (kind == "lunion") {
      std::vector<Interval> iv;
      for (double r : numbers(rest, "region")) {
        if (r < 0 || r != std::floor(r) || r > 40) throw ConfigError("region: lunion indices are integers in 0..40");
        iv.push_back({std::ldexp(1.0, -int(r) - 1), std::ldexp(1.0, -int(r))});
      }
      return Region::intervals(iv);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("region: ") + e.what());
  }
  throw ConfigError("unknown region '" + spec + "'");
}

// ---- bestiary

struct BestiaryRow {
  std::string cls, example, p_range, a_priori, discontinuities, constructor, parameters, r_ess;
};

const std::vector<BestiaryRow>& bestiary() {
  static const std::vector<BestiaryRow> rows = {
      {"Holder jacobian", "Markovian maps", "[1,inf)", "No", "No", "linear_circle; markov_holder",
       "l>=2; n>=2, 0<=amplitude<1", "(inf w)^-s"},
      {"Complex analytic map", "Conformal expanding repellers", "[1,inf)", "No", "No", "none (not provided)", "-",
       "not provided"},
      {"Interval maps", "Bounded variation jacobian", "~1", "No", "Yes", "beta_map", "1<beta<=16",
       "(inf|f'|)^-s"},
      {"Interval maps", "Piecewise C^{1+}-smooth maps", "~1", "No", "Yes", "tent (continuous case)", "1/2<t<=1",
       "exp(h_top/p') (inf|f'|)^-(1/p'+s)"},
      {"Interval maps", "Jacobian in B^{1/p}_{p,inf}", "[1,inf)", "Yes", "Yes", "besov_jacobian",
       "0<fraction<1", "LY-only"},
      {"Interval maps", "Lorenz maps", "[1,inf)", "No", "Yes", "lorenz", "gamma>0", "alpha^-s"},
      {"Interval maps", "Tent family", "[1,inf)", "No", "No", "tent", "1/2<t<=1", "(2t)^-s"},
      {"Cowieson-type maps", "C^{1+} piecewise smooth maps on R^D", "~1", "Generic", "Yes", "winky_face",
       "k0>=3 (default layout)", "(inf_x min_|v|=1 |D_xF v|)^-Ds"},
      {"Infinitely many branches", "Wild family F_{alpha,zeta,k0}", "[1,inf)", "No", "Yes", "wild",
       "alpha>0, 0<=zeta<=1, k0>=1, i_max<=60", "LY-only"},
  };
  return rows;
}

Json bestiary_json() {
  Json a = Json::array();
  for (auto& r : bestiary())
    a.push_back({{"class", r.cls},
                 {"example", r.example},
                 {"p", r.p_range},
                 {"a_priori_estimate", r.a_priori},
                 {"discontinuities", r.discontinuities},
                 {"constructor", r.constructor},
                 {"parameters", r.parameters},
                 {"r_ess", r.r_ess}});
  return a;
}

int cmd_list_bestiary(Ctx& c, bool json) {
  CsvTable t({"class", "example", "p", "a_priori_estimate", "discontinuities", "constructor", "parameters", "r_ess"});
  for (auto& r : bestiary())
    t.row({r.cls, r.example, r.p_range, r.a_priori, r.discontinuities, r.constructor, r.parameters, r.r_ess});
  t.meta("version", kVersion);
  t.meta("rows", fmt(bestiary().size()));
  std::string path = join_path(c.out_dir, "bestiary.csv");
  t.write(path);
  write_text(join_path(c.out_dir, "bestiary.json"), bestiary_json().dump(2) + "\n");
  if (json) {
    *c.out << bestiary_json().dump(2) << "\n";
  } else {
    for (auto& r : bestiary()) *c.out << r.example << " | " << r.constructor << " | " << r.r_ess << "\n";
    wrote(c, path);
  }
  return kOk;
}

// ---- operations

int cmd_ly(Ctx& c) {
  BesovParams bp = space_of(c);
  int K = K_of(c, 12), J = c.cfg.integer("experiment", "j", 8), np = c.cfg.integer("experiment", "probes", 200);
  if (J < 0 || J > 64) throw ConfigError("experiment.j must be in 0..64");
  std::uint64_t seed = seed_of(c, 12345);
  CsvTable t({"map", "s", "p", "q", "j", "K", "C", "lambda", "lambda_root", "ess_bound", "sweep"});
  std::string probes;
  for (auto& [val, cfg] : sweep_configs(c)) {
    MapSpec m = build_map(cfg);
    SparseOperator op = build_operator(c, m, K);
    ProbeSet ps = make_probes(m.dim, K, bp, np, seed);
    auto fits = ly_fit(op, bp, J, ps);
    std::string eb = ess_text(m, bp);
    for (auto& f : fits)
      t.row({map_label(m), fmt(bp.s), fmt(bp.p), fmt(bp.q), fmt(f.j), fmt(K), fmt(f.C), fmt(f.lambda),
             fmt(f.lambda_root), eb, val});
    probes = ps.descriptor;
  }
  base_meta(t, c, "ly");
  t.meta("probes", probes);
  std::string path = out_path(c, "ly.csv");
  t.write(path);
  wrote(c, path);
  return kOk;
}

int cmd_spectrum(Ctx& c) {
  BesovParams bp = space_of(c);
  int K = K_of(c, 10);
  MapSpec m = build_map(c.cfg);
  SparseOperator op = build_operator(c, m, K);
  EigenResult lead = leading_eigen(op, c.cfg.num("discretization", "tol", 1e-12));
  std::size_t dmax = std::size_t(c.cfg.integer("discretization", "dense_max", 1024));
  if (dmax > 4096) throw ConfigError("discretization.dense_max is capped at 4096");
  SecondModulus sm = second_modulus(op, lead, dmax, 8, seed_of(c, 1));
  CsvTable t({"quantity", "index", "value"});
  t.row({"lambda1", "1", fmt(lead.lambda)});
  t.row({"lambda1_residual", "1", fmt(lead.residual)});
  t.row({"lambda2", "2", fmt(sm.modulus)});
  if (sm.dense >= 0) t.row({"lambda2_dense", "2", fmt(sm.dense)});
  for (std::size_t i = 0; i < sm.ritz.size(); ++i) t.row({"ritz_modulus", fmt(i + 2), fmt(sm.ritz[i])});
  t.row({"ess_bound", "0", ess_text(m, bp)});
  base_meta(t, c, "spectrum");
  t.meta("map", map_label(m));
  t.meta("K", fmt(K));
  t.meta("lambda1_converged", lead.converged ? "1" : "0");
  t.meta("lambda1_cesaro", lead.cesaro ? "1" : "0");
  t.meta("lambda2_converged", sm.converged ? "1" : "0");
  t.meta("note", "the ess_bound row is the theoretical formula; ritz rows are the discrete spectrum tail");
  std::string path = out_path(c, "spectrum.csv");
  t.write(path);
  wrote(c, path);
  if (!lead.converged) throw NumericalFailure("spectrum: power iteration did not converge (residual " + fmt(lead.residual) + ")");
  return kOk;
}

int cmd_operator(Ctx& c) {
  int K = K_of(c, 8);
  MapSpec m = build_map(c.cfg);
  SparseOperator op = build_operator(c, m, K);
  CsvTable t({"row", "col", "value"});
  for (std::size_t r = 0; r < op.n(); ++r)
    for (std::size_t k = op.row_ptr[r]; k < op.row_ptr[r + 1]; ++k) t.row({fmt(r), fmt(std::size_t(op.col[k])), fmt(op.val[k])});
  base_meta(t, c, "operator");
  t.meta("map", map_label(m));
  t.meta("K", fmt(K));
  t.meta("n", fmt(op.n()));
  t.meta("nnz", fmt(op.nnz()));
  t.meta("mode", op.mode);
  t.meta("mass_defect", fmt(op.mass_defect()));
  t.meta("omitted_mass", fmt(m.omitted_mass));
  std::string path = out_path(c, "operator.csv");
  t.write(path);
  wrote(c, path);
  return kOk;
}

int cmd_acim(Ctx& c) {
  BesovParams bp = space_of(c);
  int K = K_of(c, 12);
  MapSpec m = build_map(c.cfg);
  SparseOperator op = build_operator(c, m, K);
  AcimResult a = acim(op, c.cfg.num("discretization", "tol", 1e-10), bp);
  SupportReport sr = support_report(a.density, c.cfg.num("experiment", "floor", 1e-8));
  CsvTable t(m.dim == 1 ? std::vector<std::string>{"cell", "x0", "x1", "density"}
                        : std::vector<std::string>{"cell", "ix", "iy", "density"});
  for (std::size_t i = 0; i < a.density.size(); ++i) {
    GridCell q = GridCell::from_flat(m.dim, K, i);
    if (m.dim == 1)
      t.row({fmt(i), fmt(q.lo(0)), fmt(q.hi(0)), fmt(a.density.values[i])});
    else
      t.row({fmt(i), fmt(std::size_t(q.idx[0])), fmt(std::size_t(q.idx[1])), fmt(a.density.values[i])});
  }
  base_meta(t, c, "acim");
  t.meta("map", map_label(m));
  t.meta("K", fmt(K));
  t.meta("lambda1", fmt(a.lambda));
  t.meta("residual", fmt(a.residual));
  t.meta("converged", a.converged ? "1" : "0");
  t.meta("drains", a.drains ? "1" : "0");
  t.meta("besov_norm", fmt(a.besov_norm));
  t.meta("besov_params", bp.str());
  t.meta("support_measure", fmt(sr.measure));
  t.meta("support_floor", fmt(sr.floor));
  std::string path = out_path(c, "acim.csv");
  t.write(path);
  CsvTable st({"level", "cell"});
  for (auto q : sr.cells) st.row({fmt(K), fmt(std::size_t(q))});
  base_meta(st, c, "acim-support");
  st.meta("support_measure", fmt(sr.measure));
  std::string sp = sibling(path, "_support.csv");
  st.write(sp);
  std::string dp = sibling(path, "_density.csv");
  write_function(dp, a.density);
  wrote(c, path);
  wrote(c, sp);
  wrote(c, dp);
  if (!a.converged) throw NumericalFailure("acim: leading eigenvector did not converge; " + a.diagnostics);
  return kOk;
}

int cmd_correlations(Ctx& c) {
  BesovParams bp = space_of(c);
  int K = K_of(c, 10), n_max = c.cfg.integer("experiment", "n_max", 30);
  if (n_max < 1) throw ConfigError("experiment.n_max must be >= 1");
  MapSpec m = build_map(c.cfg);
  PiecewiseConstantFn phi = parse_function(c.cfg.str("experiment", "phi", "cos:1"), m.dim, K, bp);
  PiecewiseConstantFn psi = parse_function(c.cfg.str("experiment", "psi", "cos:1"), m.dim, K, bp);
  SparseOperator op = build_operator(c, m, K);
  AcimResult a = acim(op);
  if (!a.converged) throw NumericalFailure("correlations: no acim; " + a.diagnostics);
  Correlations cr = correlations(op, a.density, phi, psi, n_max);
  CsvTable t({"n", "C"});
  for (std::size_t n = 0; n < cr.C.size(); ++n) t.row({fmt(n), fmt(cr.C[n])});
  base_meta(t, c, "correlations");
  t.meta("map", map_label(m));
  t.meta("K", fmt(K));
  t.meta("rate", fmt(cr.rate));
  t.meta("fit_range", fmt(cr.fit_from) + "-" + fmt(cr.fit_to));
  t.meta("lambda1", fmt(a.lambda));
  std::string path = out_path(c, "correlations.csv");
  t.write(path);
  wrote(c, path);
  return kOk;
}

int cmd_wild(Ctx& c) {
  std::uint64_t N = std::uint64_t(c.cfg.num("experiment", "N", 10000));
  std::uint64_t T = std::uint64_t(c.cfg.num("experiment", "T", 100000));
  double thr = c.cfg.num("experiment", "threshold", 0x1.0p-20);
  std::uint64_t ds = std::uint64_t(c.cfg.num("experiment", "drift_steps", 2000));
  std::uint64_t seed = seed_of(c, kDefaultSeed);
  if (c.cfg.str("map", "name", "wild") != "wild") throw ConfigError("wild: map.name must be wild");
  CsvTable t({"alpha", "zeta", "k0", "N", "T", "threshold", "escaped", "escaped_se", "final_below",
              "mean_escape_time", "drift", "drift_se"});
  for (auto& [val, cfg] : sweep_configs(c)) {
    ExperimentConfig e = cfg;
    e.set("map", "name", "wild");
    (void)build_map(e);
    double alpha = e.num("map", "alpha", 1), zeta = e.num("map", "zeta", 1);
    int k0 = e.integer("map", "k0", 4);
    EscapeReport r;
    try {
      r = wild_escape(alpha, zeta, k0, N, T, thr, seed, ds);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
    t.row({fmt(alpha), fmt(zeta), fmt(k0), fmt((long long)N), fmt((long long)T), fmt(thr), fmt(r.escaped),
           fmt(r.escaped_se), fmt(r.final_below), fmt(r.mean_escape_time), fmt(r.drift), fmt(r.drift_se)});
  }
  base_meta(t, c, "wild");
  t.meta("seed", fmt((long long)seed));
  t.meta("rng", "philox4x32-10");
  t.meta("drift_exact", fmt(skew_drift_exact()));
  std::string path = out_path(c, "wild.csv");
  t.write(path);
  wrote(c, path);
  return kOk;
}

int cmd_norm(Ctx& c) {
  BesovParams bp = space_of(c);
  int K = K_of(c, 12);
  int dim = c.cfg.integer("experiment", "dim", 1);
  if (dim != 1 && dim != 2) throw ConfigError("experiment.dim must be 1 or 2");
  std::string spec = c.cfg.str("experiment", "function", "indicator:0,0.5");
  PiecewiseConstantFn f = parse_function(spec, dim, K, bp);
  K = f.level;
  HaarCoeffs hc = haar_analysis(f);
  CsvTable t({"function", "s", "p", "q", "K", "besov_haar", "besov_atomic", "besov_osc", "keller", "butterley",
              "liverani"});
  std::string kel = "nan", but = "nan", liv = "nan";
  if (dim == 1) {
    kel = fmt(keller_var(f, bp.s));
    but = fmt(butterley_upper(f, bp.s).value);
    liv = fmt(liverani_lower(f, bp.s).value);
  }
  t.row({spec, fmt(bp.s), fmt(bp.p), fmt(bp.q), fmt(K), fmt(besov_norm_haar(hc, bp)), fmt(besov_atomic_cost(hc, bp)),
         fmt(besov_norm_osc(f, bp.s)), kel, but, liv});
  base_meta(t, c, "norm");
  auto L = besov_level_sums(hc, bp);
  std::string ls;
  for (std::size_t k = 0; k < L.size(); ++k) ls += (k ? ";" : "") + fmt(L[k]);
  t.meta("level_sums", ls);
  std::string path = out_path(c, "norm.csv");
  t.write(path);
  std::string fp = sibling(path, "_function.csv");
  write_function(fp, f);
  wrote(c, path);
  wrote(c, fp);
  return kOk;
}

int cmd_regular_domain(Ctx& c) {
  if (!c.cfg.has("experiment", "region")) throw ConfigError("regular-domain: experiment.region is required");
  Region r = parse_region(c.cfg.str("experiment", "region", ""));
  double alpha = c.cfg.num("experiment", "alpha", 0.5);
  int L = c.cfg.integer("experiment", "max_level", K_of(c, r.dim() == 1 ? 16 : 10));
  RegularDomainCertificate cert;
  try {
    cert = greedy_regular_decompose(r, alpha, L);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  RegularVerdict v = verify_regular_domain(cert);
  CsvTable t({"k", "cells", "level_sum", "bound"});
  for (std::size_t k = 0; k < cert.level_sums.size(); ++k) {
    if (int(k) < cert.k0) continue;
    double bound = cert.C * std::pow(cert.lambda, double(k) - cert.k0) * cert.reference;
    t.row({fmt(k), fmt(cert.families[k].size()), fmt(cert.level_sums[k]), fmt(bound)});
  }
  base_meta(t, c, "regular-domain");
  t.meta("alpha", fmt(alpha));
  t.meta("k0", fmt(cert.k0));
  t.meta("C", fmt(cert.C));
  t.meta("lambda", fmt(cert.lambda));
  t.meta("verified", v.pass ? "1" : "0");
  t.meta("worst_ratio", fmt(v.worst_ratio));
  std::string path = out_path(c, "regular_domain.csv");
  t.write(path);
  std::string jp = sibling(path, ".json");
  write_text(jp, certificate_json(cert) + "\n");
  wrote(c, path);
  wrote(c, jp);
  if (!v.pass) throw NumericalFailure("regular-domain: certificate failed verification: " + v.reason);
  return kOk;
}

int cmd_compare_norms(Ctx& c) {
  double s = c.cfg.num("space", "s", 0.5);
  if (!(s > 0 && s < 1)) throw ConfigError("compare-norms: need 0 < s < 1");
  int K = K_of(c, 10), n = c.cfg.integer("experiment", "corpus", 100);
  if (K < 1 || K > 14) throw ConfigError("compare-norms: K must be in 1..14");
  if (n < 1) throw ConfigError("experiment.corpus must be >= 1");
  std::vector<PiecewiseConstantFn> fs;
  std::vector<std::string> ids;
  inclusion_corpus(K, n, seed_of(c, 777), fs, ids);
  InclusionResult res = inclusion_suite(fs, ids, s);
  CsvTable t({"function", "mean", "keller", "butterley", "liverani", "besov_atomic", "besov_osc", "slack_keller",
              "slack_liverani", "slack_butterley", "pass"});
  for (auto& row : res.rows) {
    auto& r = row.r;
    t.row({r.id, fmt(r.mean), fmt(r.keller), fmt(r.butterley), fmt(r.liverani), fmt(r.besov_atomic), fmt(r.besov_osc),
           fmt(row.slack_keller), fmt(row.slack_liverani), fmt(row.slack_butterley), row.pass ? "1" : "0"});
  }
  base_meta(t, c, "compare-norms");
  t.meta("pass", res.pass ? "1" : "0");
  t.meta("failures", fmt(res.failures));
  t.meta("worst_keller_ratio", fmt(res.worst_keller));
  t.meta("worst_liverani_ratio", fmt(res.worst_liverani));
  t.meta("worst_butterley_ratio", fmt(res.worst_butterley));
  std::string path = out_path(c, "compare_norms.csv");
  t.write(path);
  wrote(c, path);
  if (!res.pass) throw NumericalFailure("compare-norms: " + fmt(res.failures) + " inclusion violations");
  return kOk;
}

using Handler = std::function<int(Ctx&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"ly", cmd_ly},
      {"spectrum", cmd_spectrum},
      {"operator", cmd_operator},
      {"acim", cmd_acim},
      {"correlations", cmd_correlations},
      {"wild", cmd_wild},
      {"norm", cmd_norm},
      {"regular-domain", cmd_regular_domain},
      {"compare-norms", cmd_compare_norms},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> n = {"run",  "list-bestiary", "norm", "operator", "spectrum",      "ly",
                                             "acim", "correlations",  "wild", "regular-domain", "compare-norms"};
  return n;
}

int dispatch(const std::string& command, const CommonOptions& o, std::ostream& out, std::ostream& err) {
  try {
    Ctx c;
    c.out = &out;
    c.out_dir = o.out_dir;
    if (!o.config.empty()) c.cfg = ExperimentConfig::from_file(o.config);
    for (auto& s : o.sets) {
      auto eq = s.find('='), dot = s.find('.');
      if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("--set expects section.key=value, got '" + s + "'");
      c.cfg.set(s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
    }
    if (o.seed) c.cfg.set("experiment", "seed", std::to_string(*o.seed));
    if (o.level) c.cfg.set("discretization", "K", std::to_string(*o.level));
    if (o.threads < 0) throw ConfigError("--threads must be >= 0");
    set_threads(o.threads);
    std::string cmd = command;
    if (cmd == "run") {
      if (o.config.empty()) throw ConfigError("run: --config is required");
      cmd = c.cfg.str("experiment", "op", "");
      if (cmd.empty()) throw ConfigError("run: experiment.op is required");
      if (cmd == "run") throw ConfigError("run: experiment.op cannot be run");
    }
    if (cmd == "list-bestiary") return cmd_list_bestiary(c, o.json);
    auto it = handlers().find(cmd);
    if (it == handlers().end()) throw ConfigError("unknown operation '" + cmd + "'");
    if (cmd != "ly" && cmd != "wild" && c.cfg.has("experiment", "sweep"))
      throw ConfigError(cmd + ": experiment.sweep is only supported by ly and wild");
    return it->second(c);
  } catch (const ConfigError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace bsv::cli
