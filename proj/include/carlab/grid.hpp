#pragma once

#include <functional>
#include <vector>

#include "carlab/common.hpp"

namespace carlab {

enum class BoundaryCondition { Periodic, Open, Dirichlet };

/// Boundary trace as a function of time (velocity units). Only meaningful for
/// Dirichlet boundaries; Periodic/Open carry no traces.
using TraceFn = std::function<double(double)>;

struct BoundaryKind {
  BoundaryCondition kind = BoundaryCondition::Open;
  TraceFn left;  ///< trace at the ghost node one spacing left of the first state node
  TraceFn right; ///< trace at the ghost node one spacing right of the last state node

  static BoundaryKind periodic() { return {BoundaryCondition::Periodic, nullptr, nullptr}; }
  static BoundaryKind open() { return {BoundaryCondition::Open, nullptr, nullptr}; }
  static BoundaryKind dirichlet(TraceFn left, TraceFn right) {
    return {BoundaryCondition::Dirichlet, std::move(left), std::move(right)};
  }
  static BoundaryKind dirichlet(double left, double right) {
    return dirichlet([left](double) { return left; }, [right](double) { return right; });
  }
};

const char* to_string(BoundaryCondition kind);

/// Uniform hypercube grid: N points per axis spanning a box of side L with
/// spacing dx = L/(N-1) for every boundary kind. State nodes along an axis sit
/// at x_left + i*dx, i = 0..N-1; Dirichlet traces apply at ghost nodes one
/// spacing outside that span.
struct GridSpec {
  int d = 1;
  int N = 0;
  double L = 0.0;
  std::vector<BoundaryKind> bc;
  double dx = 0.0;
  /// Set when N is not a power of two (warning, not an error): some spectral
  /// bookkeeping is cleaner for powers of two, but parameter sweeps need
  /// arbitrary N.
  bool non_power_of_two = false;

  /// Scalar-field size N^d.
  long points_per_component() const;
  /// Full state size d*N^d (one velocity component per spatial dimension).
  long state_size() const;
};

/// Validates d in {1,2,3}, N >= 4, L > 0, |bc| == d; throws std::invalid_argument.
GridSpec make_grid(int d, int N, double L, std::vector<BoundaryKind> bc);

/// Node coordinates along one axis: x_left + i*dx, i = 0..N-1.
std::vector<double> axis_coordinates(const GridSpec& grid, double x_left);

} // namespace carlab
