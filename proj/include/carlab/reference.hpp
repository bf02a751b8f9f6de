#pragma once

#include <limits>

#include "carlab/field_system.hpp"
#include "carlab/integrate.hpp"

namespace carlab {

/// Viscous shock descriptor: boundary velocities and the induced width.
struct ShockProfile {
  double ua;
  double ub;
  double nu;
  double width; ///< 2 nu / (ua - ub)

  ShockProfile(double ua_, double ub_, double nu_);
};

/// High-accuracy integration of the full quadratic system (the DNS oracle).
Trajectory integrate_nonlinear(const QuadraticODE& system, const Vec& u0, double t0, double t1,
                               std::vector<double> output_times,
                               const IntegrateOptions& opts = {});

/// Steady Burgers shock u(x) = (ua + ub e^z)/(1 + e^z), z = (ua-ub) x / (2 nu),
/// evaluated overflow-safe (tanh rewrite once |z| > 30).
double burgers_steady_shock(double ua, double ub, double nu, double x);

/// Shock width delta = 2 nu / (ua - ub); requires ua > ub, nu > 0.
double shock_width(double ua, double ub, double nu);

/// Closed-form solution of dx/dt = -x - R x^2:
///   x(t) = x0 e^{-t} / (1 + R x0 (1 - e^{-t})).
/// Throws when the trajectory runs into the pole (denominator ~ 0 or crossed).
double toy_solution(double r_coef, double x0, double t);

struct ConvergenceRadius {
  double t_star;      ///< -log(1 - 1/R) for R > 1; +infinity otherwise
  bool boundary_case; ///< true exactly at R = 1
  bool finite() const { return t_star < std::numeric_limits<double>::infinity(); }
};

/// Carleman convergence radius for the toy ODE.
ConvergenceRadius radius_of_convergence(double r_coef);

struct SteadyState {
  double t = 0.0;    ///< time at which the stopping rule fired
  Vec u;             ///< state there
  bool converged = false; ///< true if the residual threshold was met (vs the time cap)
  double residual = 0.0;  ///< final max-norm of du/dt
};

/// Integrates until the max-norm of du/dt drops below residual_tol or t exceeds
/// t_cap, checking every check_interval time units.
SteadyState run_to_steady_state(const QuadraticODE& system, const Vec& u0,
                                double residual_tol = 1e-8, double t_cap = 50.0,
                                double check_interval = 0.25,
                                const IntegrateOptions& opts = {});

/// Samples the analytic shock on the grid nodes of a 1-d Dirichlet problem.
Vec sample_shock_profile(const GridSpec& grid, double x_left, double ua, double ub, double nu);

} // namespace carlab
