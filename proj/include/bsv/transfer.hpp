#pragma once
#include <string>
#include <vector>

#include "bsv/besov.hpp"
#include "bsv/maps.hpp"
#include "bsv/repr.hpp"

namespace bsv {

// Row = output cell, column = input cell, both in GridCell::flat order.
// (A f)_Q = sum_P A(Q,P) f_P approximates (Phi f) averaged over Q.
struct SparseOperator {
  int level = 0, dim = 1;
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> col;
  std::vector<double> val;
  std::string map_name, mode;
  int quad_order = 0;
  double tol = 0;

  std::size_t n() const { return row_ptr.empty() ? 0 : row_ptr.size() - 1; }
  std::size_t nnz() const { return val.size(); }
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  double at(std::size_t r, std::size_t c) const;
  // max_col |sum_Q |Q| A(Q,P) - |P|| / |P|
  double mass_defect() const;
  std::vector<double> column_mass() const;
};

PiecewiseConstantFn apply(const SparseOperator& op, const PiecewiseConstantFn& f);

// Entries (1/|Q|) sum_r m(h_r(Q ∩ img_r) ∩ P).
SparseOperator ulam_matrix(const MapSpec& m, int K);
// Entries (1/|Q|) sum_r int_{Q ∩ img_r ∩ f_r(P)} g_r^tau, Gauss-Legendre with
// one refinement pass.
SparseOperator weighted_matrix(const MapSpec& m, double tau, int K, int order = 8);

// Exact action on Souza atoms of an affine full-branch map with n equal
// branches, on the n-adic grid. Entry for atom (level, index).
struct AtomImage {
  int level;
  std::uint64_t index;
  int image_level;
  std::uint64_t image_index;
  double multiplier;
};
std::vector<AtomImage> exact_atom_action(const MapSpec& m, const BesovParams& bp, int depth);

std::string export_coo(const SparseOperator& op);

}  // namespace bsv
