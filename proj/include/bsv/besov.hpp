#pragma once
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bsv/repr.hpp"

namespace bsv {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BesovParams {
  double s = 0.5, p = 1.0, q = 1.0;
  BesovParams() = default;
  // Throws unless 0 < s < 1/p, p >= 1, q >= 1 (q may be kInf).
  BesovParams(double s, double p, double q);
  double pconj() const;  // p' with 1/p + 1/p' = 1, kInf for p = 1
  std::string str() const;
};

// L_k = sum over level-k cells (and components) of (|d_Q| |Q|^{1/p-s-1/2})^p
std::vector<double> besov_level_sums(const HaarCoeffs& c, const BesovParams& bp);
double besov_seminorm_haar(const HaarCoeffs& c, const BesovParams& bp);
double besov_norm_haar(const HaarCoeffs& c, const BesovParams& bp);
double besov_norm_haar(const PiecewiseConstantFn& f, const BesovParams& bp);
// Cost of the explicit atomic representation obtained by splitting each Haar
// function into the atoms of its children: |mean| + 2^{Ds} seminorm.
double besov_atomic_cost(const HaarCoeffs& c, const BesovParams& bp);

// inf_c int_Q |f - c|, by the median of the level-K values inside Q.
double osc1(const PiecewiseConstantFn& f, const GridCell& q);
// Per-level sums sum_Q |Q|^{-s} osc1(f,Q), levels 0..K.
std::vector<double> osc_level_sums(const PiecewiseConstantFn& f, double s);
double besov_norm_osc(const PiecewiseConstantFn& f, double s);

// ---- atom bounds

struct AtomBound {
  double bound = 0, direct = 0, constant = 0;
  bool ok() const { return direct <= bound * (1 + 1e-12); }
};

// Empirical grid constant: margin times the largest direct/shape ratio seen
// on a training set.
struct Calibration {
  double constant = 0, max_ratio = 0, margin = 1.5;
  int samples = 0;
  std::uint64_t seed = 0;
};

constexpr int kAtomDepth = 14;

// ||g 1_W|| in B^beta_{p,q} via projection at kAtomDepth.
double restricted_norm(const Fn1& g, double a, double b, const BesovParams& bp,
                       int depth = kAtomDepth);

struct HolderAtom {
  Fn1 g;
  double w0, w1;   // W = [w0, w1), a dyadic cell
  double eps;      // g is (beta+eps)-Holder on W
  double hold_const;
  double sup_g;
};
// bound = 2 C sup_g |W|^{1/p-beta}; throws if hold_const |W|^{beta+eps} > sup_g.
AtomBound holder_atom_bound(const HolderAtom& a, const BesovParams& bp, double C);
Calibration calibrate_holder(const BesovParams& bp, double eps, std::uint64_t seed, int n = 60);
std::vector<HolderAtom> holder_corpus(const BesovParams& bp, double eps, std::uint64_t seed, int n);

// (sum |v_{i+1}-v_i|^r)^{1/r} maximised over subsequences, r = 1/beta.
double pvariation(const std::vector<double>& v, double r);
struct PbvAtom {
  Fn1 g;
  double w0, w1;
  double var;    // var_{1/beta}(g, W)
  double sup_g;
};
// var_{1/beta} of g on [w0,w1) read off its level-depth cell averages.
double pbv_variation(const Fn1& g, double w0, double w1, double beta, int depth = kAtomDepth);
AtomBound pbv_atom_bound(const PbvAtom& a, const BesovParams& bp, double C);
Calibration calibrate_pbv(const BesovParams& bp, std::uint64_t seed, int n = 60);
std::vector<PbvAtom> pbv_corpus(const BesovParams& bp, std::uint64_t seed, int n);

// h(x) = x^{1+gamma}, g = h'. W must lie inside h^{-1}(Q).
struct LorenzAtom {
  double gamma;
  double w0, w1, q0, q1;
};
double lorenz_shape(const LorenzAtom& a, const BesovParams& bp);
AtomBound lorenz_atom_bound(const LorenzAtom& a, const BesovParams& bp, double C);
Calibration calibrate_lorenz(double gamma, const BesovParams& bp, std::uint64_t seed, int n = 50);
std::vector<LorenzAtom> lorenz_corpus(double gamma, std::uint64_t seed, int n);

// b^g (d-c) / (d^{1+g} - c^{1+g}), 0 <= c < b <= d
double le2_quotient(double gamma, double c, double b, double d);
// |x^g - y^g| / |x-y|^{min(g,1)}
double le1_quotient(double gamma, double x, double y);

}  // namespace bsv

namespace bsv {
// Decomposition f = inf f + sum_Q c_Q 1_Q with c_Q = inf_Q f - inf_{parent} f,
// infima over level-K cells. level_sums[k] = sum_{Q in D^k} |c_Q|^p.
struct InfChain {
  std::vector<double> level_sums;
  double sup = 0;
  int argsup = 0;
};
InfChain inf_chain_level_sums(const PiecewiseConstantFn& f, double p);
}  // namespace bsv
