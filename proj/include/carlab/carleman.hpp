#pragma once

#include "carlab/field_system.hpp"
#include "carlab/integrate.hpp"

namespace carlab {

/// Truncated Carleman embedding of a quadratic ODE: block j evolves the j-th
/// tensor power of the state, blocks are coupled block-tridiagonally
/// (F2 upward, F1 diagonal, F0 downward), and the order-C block drops its
/// upward coupling. Static drive is baked into A; a time-varying drive enters
/// through b(t) (block 1) plus per-step downward-block re-evaluation.
struct CarlemanSystem {
  int order = 0;
  long n = 0;
  long S = 0;
  std::vector<long> blockOffsets; ///< size order+1, last entry = S
  SpMat A;
  std::function<Vec(double)> b;
  long long nnz = 0;
  bool static_forcing = true;
  Vec f0_at_0;
  std::function<Vec(double)> f0_fn;
};

/// Builds the truncated transfer matrix. Refuses (BudgetExceeded) when the
/// exact nonzero count would exceed nnz_budget.
CarlemanSystem carleman_blocks(const QuadraticODE& system, int C,
                               long long nnz_budget = 50'000'000);

/// Stacked tensor powers u0, u0 (x) u0, ..., u0^{(x) C}.
Vec initial_carleman_state(const Vec& u0, int C);

/// dy/dt = A y + b(t) (+ time-varying downward-drive correction when the
/// forcing is not static).
Trajectory integrate_linear(const CarlemanSystem& cs, const Vec& y0, double t0, double t1,
                            std::vector<double> output_times, const IntegrateOptions& opts = {});

/// Relative Euclidean block-1 error against a reference trajectory at one
/// evaluation time, for a single truncation order.
struct TruncationPoint {
  int C = 0;
  long S = 0;
  long long nnz = 0;
  double error = 0.0;
};
TruncationPoint truncation_error_for_order(const QuadraticODE& system, const Vec& u0, int C,
                                           double t_eval, const Trajectory& reference,
                                           const IntegrateOptions& opts = {},
                                           long long nnz_budget = 50'000'000);

struct SweepResult {
  std::vector<TruncationPoint> rows;
  bool monotone_decreasing = false;
  /// Least-squares fit of ln(error) vs C, reported when the errors decrease
  /// monotonically.
  bool fit_valid = false;
  double decay_rate = 0.0; ///< slope of ln(error) per unit C (negative = decay)
  double r_squared = 0.0;
};
SweepResult truncation_error_sweep(const QuadraticODE& system, const Vec& u0,
                                   const std::vector<int>& orders, double t_eval,
                                   const Trajectory& reference,
                                   const IntegrateOptions& opts = {});

/// Monotonicity flag + exponential fit over already-computed sweep rows
/// (rows must be in ascending C). Lets callers that parallelise the per-order
/// integrations share the sweep bookkeeping.
SweepResult summarize_sweep(std::vector<TruncationPoint> rows);

/// Least-squares line fit y = slope*x + intercept with coefficient of
/// determination; shared by the sweep and the diagnostics code.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace carlab
