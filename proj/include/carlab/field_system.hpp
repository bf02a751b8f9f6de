#pragma once

#include <functional>
#include <vector>

#include "carlab/operators.hpp"

namespace carlab {

/// Volume forcing: scalar value per field component at a grid node. The node
/// is given by its coordinates (size d). Null fn means no forcing.
struct Forcing {
  std::function<double(const std::vector<double>& x, double t, int component)> fn;
  bool time_dependent = false;

  static Forcing none() { return {nullptr, false}; }
  /// amp * exp(-|x - center|^2 / (2 sigma^2)), identical for every component.
  static Forcing gaussian_bump(double amp, std::vector<double> center, double sigma);
};

/// du/dt = F2 (u (x) u) + F1 u + F0(t), state stacked component-major:
/// u = [U^(1); ...; U^(d)], each component a scalar field of N^d nodes with
/// axis 1 outermost in the flattening.
struct QuadraticODE {
  long n = 0;
  SpMat F1;
  SpMat F2; ///< n x n^2
  std::function<Vec(double)> F0; ///< never null; returns an n-vector
  GridSpec grid;
  double nu = 0.0;
  bool static_forcing = true;

  /// Full right-hand side; the quadratic term is applied matrix-free from the
  /// compressed rows of F2 (no n^2 temporary).
  Vec rhs(const Vec& u, double t) const;
  Vec apply_f2(const Vec& u) const;
};

/// Plain sparse Kronecker product with deterministic triplet order.
SpMat kron(const SpMat& a, const SpMat& b);

/// Block-cyclic permutation: (C v)_l = v_{l+1 mod d} on blocks of size N^d.
struct PermutationBlock {
  int d = 0;
  long blockSize = 0;
  SpMat matrix;
};
PermutationBlock cyclic_perm(int d, int N);

/// Negative powers resolved as C^{d-g}; exponent taken mod d.
SpMat cyclic_perm_power(const PermutationBlock& c, int power);

/// P of shape n x n^2 extracting the Kronecker-square diagonal:
/// P(u (x) v) = u o v (elementwise).
SpMat projector(int d, int N);

/// Single-axis derivative promoted to the scalar-field space N^d
/// (identity factors on every other axis; axis indices are 1-based).
SpMat axis_derivative(const GridSpec& grid, int axis, int order);

/// nu * (block-diagonal Kronecker sum of second derivatives per component),
/// plus the linear-in-state part of the Dirichlet advection cross-terms
/// (traces frozen at t = 0; all bundled experiments use static traces).
SpMat assemble_F1(const GridSpec& grid, double nu);

/// Advective quadratic form: block row l of F2 (u (x) u) equals
/// -sum_q U^(q) o (D^q U^(l)).
SpMat assemble_F2(const GridSpec& grid);

/// Sampled forcing plus nu * b2(t) diffusion offsets on Dirichlet axes. The
/// advection boundary terms carry a state factor and therefore live in F1,
/// not here. x_left locates the first node of every axis.
Vec assemble_F0(const GridSpec& grid, const Forcing& forcing, double nu, double t, double x_left);

QuadraticODE assemble_system(const GridSpec& grid, double nu, const Forcing& forcing,
                             double x_left);

/// JSON document bundling an assembled system: F1 and F2 in the operator
/// triplet format, metadata {d, N, L, bc, nu}, and F0 sampled at the given
/// times.
nlohmann::json system_to_json(const QuadraticODE& sys,
                              const std::vector<double>& sample_times = {0.0});

/// Largest real part over the spectrum of F1 (dense path, n <= 4096).
double f1_dominant_eig(const SpMat& f1);

} // namespace carlab
