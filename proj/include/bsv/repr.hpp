#pragma once
#include <functional>
#include <vector>

#include "bsv/grid.hpp"

namespace bsv {

// Values on every level-K cell, in GridCell::flat order.
struct PiecewiseConstantFn {
  int dim = 1;
  int level = 0;
  std::vector<double> values;

  PiecewiseConstantFn() = default;
  PiecewiseConstantFn(int d, int k, double fill = 0.0);
  PiecewiseConstantFn(int d, int k, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double cell_measure() const;
  double integral() const;
  double l1() const;
  double l2() const;
  double operator()(double x, double y = 0) const;
  // Pointwise ops on equal shapes.
  PiecewiseConstantFn& operator+=(const PiecewiseConstantFn& o);
  PiecewiseConstantFn& operator*=(double c);
  // Conditional expectation onto a coarser level, kept at this resolution.
  PiecewiseConstantFn expect(int k) const;
  // Same function written at a finer level.
  PiecewiseConstantFn refine_to(int k) const;
  PiecewiseConstantFn coarsen_to(int k) const;
};

PiecewiseConstantFn operator+(PiecewiseConstantFn a, const PiecewiseConstantFn& b);
PiecewiseConstantFn operator-(PiecewiseConstantFn a, const PiecewiseConstantFn& b);
PiecewiseConstantFn operator*(double c, PiecewiseConstantFn a);
double inner(const PiecewiseConstantFn& a, const PiecewiseConstantFn& b);

// Gauss-Legendre rule on [0,1]; orders 2, 4, 8, 16, 32.
struct GLRule {
  std::vector<double> x, w;
};
const GLRule& gl_rule(int order);

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

PiecewiseConstantFn project(const Fn1& f, int K, int order = 8);
PiecewiseConstantFn project2(const Fn2& f, int K, int order = 8);
// Averages of f·1_[a,b) per cell; quadrature is done on the pieces.
PiecewiseConstantFn project_restricted(const Fn1& f, double a, double b, int K, int order = 8);
// Exact cell averages of 1_region.
PiecewiseConstantFn project_indicator(const Region& r, int K);

// details[k] holds level-k coefficients: one per cell in 1D, three per cell
// in 2D laid out as (x, y, diagonal) at 3*flat+c.
struct HaarCoeffs {
  int dim = 1;
  int max_level = 0;  // resolution of the synthesised function
  double mean = 0.0;
  std::vector<std::vector<double>> details;

  int per_cell() const { return dim == 1 ? 1 : 3; }
  double detail(const GridCell& c, int comp = 0) const;
  void set_detail(const GridCell& c, double v, int comp = 0);
  static HaarCoeffs zero(int dim, int K);
};

HaarCoeffs haar_analysis(const PiecewiseConstantFn& f);
PiecewiseConstantFn haar_synthesis(const HaarCoeffs& c);

// |Q|^{s-1/p} 1_Q
struct SouzaAtom {
  GridCell cell;
  double s, p;
  double value() const;
};
PiecewiseConstantFn atom_as_fn(const SouzaAtom& a, int K);

// Normalised Haar function |Q|^{-1/2}(1_{Q1} - 1_{Q2}) (1D) or its tensor
// analogue, as a level-K function.
PiecewiseConstantFn haar_fn(const GridCell& q, int K, int comp = 0);

}  // namespace bsv
