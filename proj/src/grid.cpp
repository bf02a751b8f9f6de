#include "carlab/grid.hpp"

#include <cmath>

namespace carlab {

const char* to_string(BoundaryCondition kind) {
  switch (kind) {
    case BoundaryCondition::Periodic: return "periodic";
    case BoundaryCondition::Open: return "open";
    case BoundaryCondition::Dirichlet: return "dirichlet";
  }
  return "?";
}

long GridSpec::points_per_component() const {
  long p = 1;
  for (int i = 0; i < d; ++i) p *= N;
  return p;
}

long GridSpec::state_size() const { return d * points_per_component(); }

GridSpec make_grid(int d, int N, double L, std::vector<BoundaryKind> bc) {
  if (d < 1 || d > 3) throw std::invalid_argument("make_grid: dimension must be 1, 2 or 3");
  if (N < 4) throw std::invalid_argument("make_grid: need at least 4 points per axis");
  if (!(L > 0.0)) throw std::invalid_argument("make_grid: box length must be positive");
  if (static_cast<int>(bc.size()) != d)
    throw std::invalid_argument("make_grid: need exactly one boundary kind per axis");
  for (const auto& b : bc) {
    if (b.kind == BoundaryCondition::Dirichlet && (!b.left || !b.right))
      throw std::invalid_argument("make_grid: Dirichlet boundaries need both trace functions");
  }
  GridSpec g;
  g.d = d;
  g.N = N;
  g.L = L;
  g.bc = std::move(bc);
  g.dx = L / (N - 1);
  g.non_power_of_two = (N & (N - 1)) != 0;
  return g;
}

std::vector<double> axis_coordinates(const GridSpec& grid, double x_left) {
  std::vector<double> x(grid.N);
  for (int i = 0; i < grid.N; ++i) x[i] = x_left + i * grid.dx;
  return x;
}

} // namespace carlab
