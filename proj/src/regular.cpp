#include "bsv/regular.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"
#include <set>
#include <stdexcept>

namespace bsv {

namespace {
void descend(const Region& r, const GridCell& c, int max_level, RegularDomainCertificate& out) {
  double ov = r.overlap(c), m = c.measure();
  if (ov <= 1e-12 * m) return;
  if (ov >= m * (1 - 1e-12)) {
    out.families[c.level].push_back(c);
    return;
  }
  if (c.level == max_level) {
    ++out.boundary_cells;
    return;
  }
  for (auto& ch : c.children()) descend(r, ch, max_level, out);
}

// least-squares slope of log S_k on the populated tail
double tail_rate(const std::vector<double>& S, int k0) {
  std::vector<double> xs, ys;
  int last = -1;
  for (int k = k0; k < int(S.size()); ++k)
    if (S[k] > 0) last = k;
  if (last <= k0) return 0.5;
  int from = k0 + (last - k0) / 3;
  for (int k = from; k <= last; ++k)
    if (S[k] > 0) {
      xs.push_back(k);
      ys.push_back(std::log(S[k]));
    }
  if (xs.size() < 2) return 0.5;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
  return std::exp(sxy / sxx);
}
}  // namespace

RegularDomainCertificate greedy_regular_decompose(const Region& r, double alpha, int max_level) {
  if (r.measure() <= 0) throw std::invalid_argument("greedy_regular_decompose: region of zero measure");
  if (max_level < 0 || max_level > kMaxLevel) throw std::invalid_argument("greedy_regular_decompose: bad max level");
  RegularDomainCertificate c;
  c.region = r;
  c.alpha = alpha;
  c.max_level = max_level;
  c.families.assign(max_level + 1, {});
  descend(r, GridCell(r.dim(), 0, 0, 0), max_level, c);
  c.level_sums.assign(max_level + 1, 0.0);
  c.k0 = -1;
  for (int k = 0; k <= max_level; ++k) {
    std::sort(c.families[k].begin(), c.families[k].end());
    double pm = std::ldexp(1.0, -k * r.dim());
    c.level_sums[k] = double(c.families[k].size()) * std::pow(pm, alpha);
    if (c.k0 < 0 && !c.families[k].empty()) c.k0 = k;
  }
  if (c.k0 < 0) throw std::invalid_argument("greedy_regular_decompose: no cell fits inside the region");
  c.reference = std::pow(r.measure(), alpha);
  c.lambda = std::min(tail_rate(c.level_sums, c.k0), 0.999);
  double C = 0;
  for (int k = c.k0; k <= max_level; ++k)
    C = std::max(C, c.level_sums[k] / (std::pow(c.lambda, k - c.k0) * c.reference));
  c.C = C;
  return c;
}

RegularVerdict verify_regular_domain(const RegularDomainCertificate& c) {
  RegularVerdict v;
  int D = c.region.dim();
  std::set<std::pair<int, std::uint64_t>> seen;
  double covered = 0;
  for (int k = 0; k < int(c.families.size()); ++k)
    for (auto& q : c.families[k]) {
      if (q.level != k || q.dim != D) {
        v.reason = "cell stored at the wrong level";
        return v;
      }
      if (!seen.insert({k, q.flat()}).second) {
        v.reason = "duplicate cell " + q.str();
        return v;
      }
      if (c.region.overlap(q) < q.measure() * (1 - 1e-12)) {
        v.reason = "cell not inside region " + q.str();
        return v;
      }
      covered += q.measure();
    }
  // nested pairs: walk ancestors of every cell
  for (auto& e : seen) {
    GridCell q = GridCell::from_flat(D, e.first, e.second);
    for (int a = 0; a < q.level; ++a) {
      GridCell anc = q.ancestor(a);
      if (seen.count({a, anc.flat()})) {
        v.reason = "overlapping cells " + anc.str() + " and " + q.str();
        return v;
      }
    }
  }
  double slack = std::ldexp(1.0, -c.max_level * D) * (c.boundary_cells + 1);
  double gap = c.region.measure() - covered;
  if (gap < -1e-12 || gap > slack * (1 + 1e-9)) {
    v.reason = "coverage gap " + std::to_string(gap) + " exceeds boundary allowance";
    return v;
  }
  if (!(c.lambda > 0 && c.lambda < 1)) {
    v.reason = "lambda outside (0,1)";
    return v;
  }
  v.pass = true;
  for (int k = c.k0; k < int(c.level_sums.size()); ++k) {
    double rhs = c.C * std::pow(c.lambda, k - c.k0) * c.reference;
    double ratio = rhs > 0 ? c.level_sums[k] / rhs : (c.level_sums[k] > 0 ? 1e300 : 0);
    if (ratio > v.worst_ratio) {
      v.worst_ratio = ratio;
      v.worst_level = k;
    }
    if (c.level_sums[k] > rhs * (1 + 1e-12)) {
      v.pass = false;
      v.reason = "inequality fails at level " + std::to_string(k);
    }
  }
  for (int k = 0; k < c.k0; ++k)
    if (c.level_sums[k] > 0) {
      v.pass = false;
      v.reason = "cells below the base level";
    }
  return v;
}

std::string certificate_json(const RegularDomainCertificate& c) {
  nlohmann::json j;
  const Region& r = c.region;
  j["region"]["kind"] = r.kind();
  j["region"]["dim"] = r.dim();
  if (r.kind() == "intervals")
    for (auto& v : r.ivs()) j["region"]["parts"].push_back({v.a, v.b});
  else if (r.kind() == "rects")
    for (auto& v : r.rcs()) j["region"]["parts"].push_back({v.x0, v.x1, v.y0, v.y1});
  else
    for (auto& v : r.poly()) j["region"]["parts"].push_back({v.x, v.y});
  j["alpha"] = c.alpha;
  j["k0"] = c.k0;
  j["max_level"] = c.max_level;
  j["C"] = c.C;
  j["lambda"] = c.lambda;
  j["reference"] = c.reference;
  j["boundary_cells"] = c.boundary_cells;
  j["level_sums"] = c.level_sums;
  nlohmann::json fam = nlohmann::json::array();
  for (auto& lvl : c.families)
    for (auto& q : lvl) {
      if (r.dim() == 1)
        fam.push_back({q.level, q.idx[0]});
      else
        fam.push_back({q.level, q.idx[0], q.idx[1]});
    }
  j["families"] = fam;
  return j.dump(1);
}

}  // namespace bsv
