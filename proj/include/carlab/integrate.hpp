#pragma once

#include <functional>
#include <string>
#include <vector>

#include "carlab/common.hpp"

namespace carlab {

struct IntegrateOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double initial_step = 0.0; ///< 0 = choose automatically
  long max_steps = 50'000'000;
};

/// Time series of states; rows of `states` correspond to `times`.
struct Trajectory {
  std::vector<double> times;
  Mat states;
  std::string solver;
  double abs_tol = 0.0;
  double rel_tol = 0.0;

  /// Row index of a recorded time (1e-12 relative match); throws if absent —
  /// callers must request evaluation times up front, there is no extrapolation.
  int row_at(double t) const;
  Vec state_at(double t) const;
};

using RhsFn = std::function<Vec(double, const Vec&)>;
using StopPredicate = std::function<bool(double, const Vec&)>;

/// Adaptive Dormand-Prince RK4(5), steps clamped to land exactly on every
/// requested output time (no interpolation). Throws StepUnderflow with the
/// time reached if the controller collapses the step (stiff blow-up).
Trajectory integrate_rk45(const RhsFn& rhs, const Vec& y0, double t0, double t1,
                          std::vector<double> output_times, const IntegrateOptions& opts = {});

/// Same stepper, but stops early once `stop` returns true at an accepted step
/// (checked at most every `check_interval` time units). Returns the final
/// (t, y) pair; `stopped` reports whether the predicate fired before t_max.
struct UntilResult {
  double t = 0.0;
  Vec y;
  bool stopped = false;
};
UntilResult integrate_until(const RhsFn& rhs, const Vec& y0, double t0, double t_max,
                            const StopPredicate& stop, double check_interval,
                            const IntegrateOptions& opts = {});

} // namespace carlab
