#include "carlab/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace carlab {

ShockProfile::ShockProfile(double ua_, double ub_, double nu_) : ua(ua_), ub(ub_), nu(nu_) {
  if (!(ua > ub)) throw std::invalid_argument("ShockProfile: need ua > ub for a decaying shock");
  if (!(nu > 0.0)) throw std::invalid_argument("ShockProfile: viscosity must be positive");
  width = 2.0 * nu / (ua - ub);
}

Trajectory integrate_nonlinear(const QuadraticODE& system, const Vec& u0, double t0, double t1,
                               std::vector<double> output_times, const IntegrateOptions& opts) {
  if (u0.size() != system.n)
    throw std::invalid_argument("integrate_nonlinear: initial state size mismatch");
  auto rhs = [&system](double t, const Vec& u) { return system.rhs(u, t); };
  return integrate_rk45(rhs, u0, t0, t1, std::move(output_times), opts);
}

double burgers_steady_shock(double ua, double ub, double nu, double x) {
  if (!(ua > ub)) throw std::invalid_argument("burgers_steady_shock: need ua > ub");
  if (!(nu > 0.0)) throw std::invalid_argument("burgers_steady_shock: viscosity must be positive");
  const double z = (ua - ub) * x / (2.0 * nu);
  if (std::abs(z) > 30.0) {
    // exp(z) overflows for the steep-shock exponents this sees (~1e3); the
    // algebraically identical tanh form saturates gracefully instead.
    const double mid = 0.5 * (ua + ub);
    const double amp = 0.5 * (ua - ub);
    return mid - amp * std::tanh(0.5 * z);
  }
  const double e = std::exp(z);
  return (ua + ub * e) / (1.0 + e);
}

double shock_width(double ua, double ub, double nu) {
  if (!(ua > ub)) throw std::invalid_argument("shock_width: need ua > ub");
  if (!(nu > 0.0)) throw std::invalid_argument("shock_width: viscosity must be positive");
  return 2.0 * nu / (ua - ub);
}

double toy_solution(double r_coef, double x0, double t) {
  const double em = std::exp(-t);
  const double denom = 1.0 + r_coef * x0 * (1.0 - em);
  if (std::abs(denom) < 1e-12)
    throw std::domain_error("toy_solution: evaluation at the pole of the closed form");
  if (denom < 0.0 && t > 0.0) {
    // The denominator starts at 1; a negative value means the pole was crossed
    // on the way to t, so the closed form no longer describes the trajectory.
    throw std::domain_error("toy_solution: finite-time blow-up before the requested time");
  }
  return x0 * em / denom;
}

ConvergenceRadius radius_of_convergence(double r_coef) {
  ConvergenceRadius out;
  out.boundary_case = (r_coef == 1.0);
  if (r_coef > 1.0)
    out.t_star = -std::log(1.0 - 1.0 / r_coef);
  else
    out.t_star = std::numeric_limits<double>::infinity();
  return out;
}

SteadyState run_to_steady_state(const QuadraticODE& system, const Vec& u0, double residual_tol,
                                double t_cap, double check_interval, const IntegrateOptions& opts) {
  if (!(check_interval > 0.0))
    throw std::invalid_argument("run_to_steady_state: check interval must be positive");
  auto rhs = [&system](double t, const Vec& u) { return system.rhs(u, t); };
  auto stop = [&](double t, const Vec& u) {
    return rhs(t, u).cwiseAbs().maxCoeff() < residual_tol;
  };
  UntilResult r = integrate_until(rhs, u0, 0.0, t_cap, stop, check_interval, opts);
  SteadyState out;
  out.t = r.t;
  out.u = r.y;
  out.converged = r.stopped;
  out.residual = rhs(r.t, r.y).cwiseAbs().maxCoeff();
  return out;
}

Vec sample_shock_profile(const GridSpec& grid, double x_left, double ua, double ub, double nu) {
  if (grid.d != 1) throw std::invalid_argument("sample_shock_profile: 1-d grids only");
  const std::vector<double> xs = axis_coordinates(grid, x_left);
  Vec u(grid.N);
  for (long i = 0; i < grid.N; ++i) u(i) = burgers_steady_shock(ua, ub, nu, xs[i]);
  return u;
}

} // namespace carlab
