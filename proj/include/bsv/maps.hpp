#pragma once
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bsv/grid.hpp"

namespace bsv {

enum class Regularity { Affine, C1Holder, Lorenz, PBV, BesovJacobian };
std::string to_string(Regularity r);

// One monotone branch on [a,b) with image [c,d). inv and inv_jac live on the
// image; inv_jac is g = |h'|.
struct Branch1D {
  double a = 0, b = 1, c = 0, d = 1;
  bool increasing = true;
  std::function<double(double)> fwd, inv, inv_jac;
  Regularity reg = Regularity::Affine;
  double expansion_lb = 1;
  // fwd(x) = slope*x + offset when reg is Affine
  double slope = 1, offset = 0;
  int tag = 0;  // family-specific label (wild family: level i, or -1 for onto)
};

Branch1D affine_branch(double a, double b, double c, double d, bool increasing = true);

// Axis-aligned affine bijection of rectangles, orientation preserving.
struct Branch2D {
  Rect dom, img;
  double sx() const { return (img.x1 - img.x0) / (dom.x1 - dom.x0); }
  double sy() const { return (img.y1 - img.y0) / (dom.y1 - dom.y0); }
  Pt fwd(Pt p) const;
  Pt inv(Pt p) const;
  double inv_jac() const { return 1.0 / (sx() * sy()); }
};

struct MapSpec {
  std::string name, family;
  int dim = 1;
  std::vector<Branch1D> b1;  // sorted by domain
  std::vector<Branch2D> b2;
  std::map<std::string, double> params;
  double omitted_mass = 0;  // measure of [0,1]^dim not covered by domains
  std::string note;

  std::size_t branch_count() const { return dim == 1 ? b1.size() : b2.size(); }
  // Branch index containing x, or -1.
  int find(double x) const;
  double eval(double x) const;  // throws outside the domains
  Pt eval2(Pt p) const;
  bool full_branch() const;
  double min_expansion() const;
};

MapSpec linear_circle(int l);
// x -> beta x mod 1; the last branch is partial unless beta is an integer.
MapSpec beta_map(double beta);
// On [0,1] via y = (x+1)/2: y -> 2t y on [0,1/2), 2t(1-y) on [1/2,1).
MapSpec tent(double t);
// n full branches u + A sin(2 pi u)/(2 pi) on each [r/n,(r+1)/n).
MapSpec markov_holder(int n, double amplitude);

struct LorenzPiece {
  double a, b;
  bool lorenz;          // power-law piece, otherwise affine
  bool singular_left;   // singular derivative at a (else at b)
};
// Default layout: Lorenz piece on [0,c), affine on [c,1), c = 1/(2+gamma),
// which equalises the two minimal slopes.
std::vector<LorenzPiece> lorenz_default_layout(double gamma);
MapSpec lorenz_map(double gamma, const std::vector<LorenzPiece>& layout);
MapSpec lorenz_map(double gamma);

// User-defined branch: affine [a,b) -> [c,d), or a power-law piece
// c + (d-c) ((x-a)/(b-a))^{1/(1+gamma)} with the singular end at a (or the
// mirrored form with the singular end at b).
struct PieceSpec {
  bool power = false;
  double a = 0, b = 1, c = 0, d = 1;
  bool increasing = true;  // affine pieces only
  double gamma = 1;
  bool singular_left = true;
};
// Family "lorenz" when a power piece is present, else "pbv".
MapSpec piecewise_map(const std::vector<PieceSpec>& pieces);

struct WildOptions {
  int i_max = 40;
  bool verbatim = false;  // second-piece constant exactly as printed
};
int wild_i0(double alpha);
MapSpec wild_family(double alpha, double zeta, int k0, WildOptions opt = {});
// Direct evaluation of the wild map; returns -1 for points in the omitted
// part near 0.
double wild_step(double x, double alpha, double zeta, int k0, int i0, int i_max,
                 bool verbatim = false);

struct BJBranch {
  double a, b;  // I_r
  double c, d;  // J_r
  std::function<double(double)> alpha;  // potential on J_r (mean removed internally)
};
MapSpec besov_jacobian_family(const std::vector<BJBranch>& br, int table_log2 = 18);
// sin(2 pi log2 x) on (0,1/2], 0 elsewhere
double remark_potential(double x);
std::vector<BJBranch> besov_jacobian_default(double amplitude_fraction = 0.1);

std::vector<Rect> winky_default_targets(int k0);
MapSpec winky_face(int k0, const std::vector<Rect>& targets);

// g_{1,1} and psi of the skew product. psi_sign chooses between the printed
// convention (-1,0,+1) and its reverse; wild_psi_sign() picks the one that
// satisfies the conjugacy with G_{1,1,i}.
double skew_g(double x);
int skew_psi(double x, int psi_sign);
int wild_psi_sign();
std::pair<double, int> skew_product_step(double x, int i);
// Lebesgue average of psi on [1/2,1) with the resolved sign.
double skew_drift_exact();

// Branch-consistency checks on random samples; returns worst residuals.
struct BranchCheck {
  double inverse_err = 0, jacobian_err = 0, expansion_ratio = 1e300;
  bool ok(double tol_inv = 1e-12, double tol_jac = 1e-8) const;
};
BranchCheck check_branches(const MapSpec& m, int samples, unsigned seed);

}  // namespace bsv
