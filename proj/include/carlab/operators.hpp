#pragma once

#include <complex>
#include <vector>

#include "json.hpp"

#include "carlab/grid.hpp"

namespace carlab {

/// Affine map u -> matrix*u + offset(t). The offset is identically zero for
/// periodic/open operators; Dirichlet operators carry their boundary traces
/// in it.
struct AffineOperator {
  SpMat matrix;
  std::function<Vec(double)> offset; ///< null means identically zero

  Vec apply(const Vec& u, double t) const;
  bool has_offset() const { return static_cast<bool>(offset); }
};

/// First derivative, periodic: antisymmetric circulant, +-1/(2dx) off the
/// diagonal with wrap-around corners.
AffineOperator derivative_pbc(int N, double dx);

/// First derivative, open boundaries: the same stencil without corner wraps.
AffineOperator derivative_obc(int N, double dx);

/// Dirichlet derivative of the given order (1 or 2). The matrix acts on the
/// N state nodes; the traces enter through the offset vector evaluated at the
/// ghost nodes:
///   order 1: obc matrix + b(t)  = (-left(t), 0, ..., 0, +right(t))/(2dx)
///   order 2: tridiag(1,-2,1)/dx^2 + b2(t) = (left(t), 0, ..., 0, right(t))/dx^2
AffineOperator derivative_dirichlet(int N, double dx, int order, TraceFn left, TraceFn right);

/// Square of the first-derivative matrix; the second-derivative convention for
/// periodic/open axes (Dirichlet axes use the dedicated 3-point stencil).
SpMat second_derivative_matrix(BoundaryCondition kind, int N, double dx);

/// Closed-form spectrum report: the numerically computed eigenvalues of the
/// constructed matrix (ground truth) next to the documented closed-form
/// expression, whose prefactor is 1/(2dx) where direct decomposition gives
/// 1/dx; `formula_mismatch` is set when the two disagree beyond tolerance.
struct SpectrumReport {
  std::vector<std::complex<double>> numerical;
  std::vector<std::complex<double>> documented_formula;
  bool formula_mismatch = false;
  double max_abs_gap = 0.0;
};

SpectrumReport analytic_spectrum(BoundaryCondition kind, int N, double dx, int order);

/// Largest singular value, deterministic: dense self-adjoint solve on the
/// smaller Gram matrix when its side is <= 1024, fixed-start power iteration
/// otherwise. Relative accuracy 1e-9.
double spectral_norm(const SpMat& m);
double spectral_norm(const AffineOperator& op);

/// JSON document {rows, cols, triplets, offset_kind, offset_samples} with
/// 0-based indices and row-major triplet order.
nlohmann::json operator_to_json(const AffineOperator& op, const std::vector<double>& sample_times = {});

} // namespace carlab
