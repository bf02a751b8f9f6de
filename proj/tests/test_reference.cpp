#include "doctest.h"

#include <cmath>

#include "carlab/reference.hpp"

using namespace carlab;

namespace {

QuadraticODE toy_ode(double r_coef) {
  QuadraticODE sys;
  sys.n = 1;
  sys.F1 = SpMat(1, 1);
  sys.F1.insert(0, 0) = -1.0;
  sys.F2 = SpMat(1, 1);
  if (r_coef != 0.0) sys.F2.insert(0, 0) = -r_coef;
  sys.F0 = [](double) { return Vec(Vec::Zero(1)); };
  sys.static_forcing = true;
  return sys;
}

} // namespace

TEST_SUITE("reference") {

TEST_CASE("closed-form toy solution: frozen values and the printed rounding") {
  // x(t) = x0 e^{-t} / (1 + R x0 (1 - e^{-t}))
  const double e1 = std::exp(-1.0);
  CHECK(toy_solution(2.0, 1.0, 1.0) ==
        doctest::Approx(e1 / (1.0 + 2.0 * (1.0 - e1))).epsilon(1e-15));
  // four-decimal headline value
  CHECK(std::abs(toy_solution(2.0, 1.0, 1.0) - 0.1625) < 1e-4);
  CHECK(toy_solution(0.5, 2.0, 0.0) == 2.0);
  CHECK(toy_solution(0.0, 3.0, 1.0) == doctest::Approx(3.0 * e1).epsilon(1e-15));
}

TEST_CASE("toy solution satisfies its own differential equation") {
  const double r = 1.3, x0 = 0.7, h = 1e-5;
  for (double t : {0.2, 0.8, 1.7}) {
    const double fd = (toy_solution(r, x0, t + h) - toy_solution(r, x0, t - h)) / (2.0 * h);
    const double x = toy_solution(r, x0, t);
    CHECK(std::abs(fd - (-x - r * x * x)) < 1e-6);
  }
}

TEST_CASE("adaptive integration of the toy system matches the closed form") {
  QuadraticODE sys = toy_ode(2.0);
  Vec u0(1);
  u0 << 1.0;
  IntegrateOptions tight;
  tight.abs_tol = 1e-13;
  tight.rel_tol = 1e-11;
  Trajectory traj = integrate_nonlinear(sys, u0, 0.0, 1.0, {0.5, 1.0}, tight);
  CHECK(std::abs(traj.state_at(1.0)(0) - toy_solution(2.0, 1.0, 1.0)) < 1e-9);
  CHECK(std::abs(traj.state_at(0.5)(0) - toy_solution(2.0, 1.0, 0.5)) < 1e-9);
  CHECK_THROWS_AS(integrate_nonlinear(sys, Vec::Zero(2), 0.0, 1.0, {1.0}),
                  std::invalid_argument);
}

TEST_CASE("toy solution refuses to cross its pole") {
  // R x0 = -2: denominator 1 - 2(1 - e^{-t}) hits zero at t = log 2
  CHECK_NOTHROW(toy_solution(-2.0, 1.0, 0.5));
  CHECK_THROWS_AS(toy_solution(-2.0, 1.0, 0.6932), std::domain_error);
  CHECK_THROWS_AS(toy_solution(-2.0, 1.0, 3.0), std::domain_error);
}

TEST_CASE("convergence radius of the toy embedding") {
  ConvergenceRadius r2 = radius_of_convergence(2.0);
  REQUIRE(r2.finite());
  CHECK(r2.t_star == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_FALSE(r2.boundary_case);

  ConvergenceRadius rhalf = radius_of_convergence(0.5);
  CHECK_FALSE(rhalf.finite());
  CHECK_FALSE(rhalf.boundary_case);

  ConvergenceRadius r1 = radius_of_convergence(1.0);
  CHECK_FALSE(r1.finite());
  CHECK(r1.boundary_case);

  // t* shrinks as the nonlinearity grows
  CHECK(radius_of_convergence(3.0).t_star < radius_of_convergence(2.0).t_star);
  CHECK(radius_of_convergence(10.0).t_star < radius_of_convergence(3.0).t_star);
  CHECK(radius_of_convergence(1e6).t_star < 1e-5);
}

TEST_CASE("steady shock profile: shape, saturation, and overflow safety") {
  const double ua = 1.0, ub = -1.0, nu = 0.05;
  CHECK(burgers_steady_shock(ua, ub, nu, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  // u(0.1) = -tanh(1) for these parameters
  CHECK(burgers_steady_shock(ua, ub, nu, 0.1) ==
        doctest::Approx(-std::tanh(1.0)).epsilon(1e-12));
  CHECK(burgers_steady_shock(ua, ub, nu, 1e6) == doctest::Approx(ub).epsilon(1e-14));
  CHECK(burgers_steady_shock(ua, ub, nu, -1e6) == doctest::Approx(ua).epsilon(1e-14));
  CHECK(std::isfinite(burgers_steady_shock(ua, ub, nu, 1e12)));

  // exponential form agrees with the tanh rewrite across the switch point
  const double mid = (ua + ub) / 2.0, amp = (ua - ub) / 2.0;
  for (double x : {-3.2, -1.6, -1.45, -0.5, 0.0, 0.3, 1.45, 1.55, 3.0}) {
    const double z = (ua - ub) * x / (2.0 * nu);
    const double expect = mid - amp * std::tanh(z / 2.0);
    CHECK(burgers_steady_shock(ua, ub, nu, x) == doctest::Approx(expect).epsilon(1e-13));
  }

  // asymmetric plateaus
  CHECK(burgers_steady_shock(2.0, 0.5, 0.1, -1e5) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(burgers_steady_shock(2.0, 0.5, 0.1, 1e5) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("shock width and the gradient relation at the core") {
  CHECK(shock_width(1.0, -1.0, 0.05) == 0.05);
  CHECK(shock_width(2.0, 0.0, 0.1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(shock_width(-1.0, 1.0, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(shock_width(1.0, -1.0, 0.0), std::invalid_argument);

  ShockProfile p(1.0, -1.0, 0.05);
  CHECK(p.width == 0.05);

  // measured relation: width times the core gradient is (ub - ua)/4
  const double ua = 1.3, ub = -0.9, nu = 0.04, h = 1e-7;
  const double grad =
      (burgers_steady_shock(ua, ub, nu, h) - burgers_steady_shock(ua, ub, nu, -h)) / (2.0 * h);
  const double width = shock_width(ua, ub, nu);
  CHECK(std::abs(width * grad - (ub - ua) / 4.0) < 1e-7);
}

TEST_CASE("steady-state driver converges onto the analytic shock") {
  const double nu = 0.1, ua = 1.0, ub = -1.0;
  GridSpec g = make_grid(1, 32, 1.0, {BoundaryKind::dirichlet(ua, ub)});
  QuadraticODE sys = assemble_system(g, nu, Forcing::none(), -0.5);
  Vec u0(32);
  std::vector<double> xs = axis_coordinates(g, -0.5);
  for (int i = 0; i < 32; ++i) u0(i) = -2.0 * xs[i]; // crude ramp start

  // the residual floor sits at roughly (nu / dx^2) * rel_tol, so the driver
  // needs a tighter integration tolerance than the default to reach 1e-8
  IntegrateOptions tight;
  tight.abs_tol = 1e-13;
  tight.rel_tol = 1e-12;
  SteadyState st = run_to_steady_state(sys, u0, 1e-8, 50.0, 0.25, tight);
  CHECK(st.converged);
  CHECK(st.residual < 1e-8);
  Vec truth = sample_shock_profile(g, -0.5, ua, ub, nu);
  CHECK((st.u - truth).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("profile sampler requires one dimension") {
  GridSpec g2 = make_grid(2, 4, 1.0, {BoundaryKind::open(), BoundaryKind::open()});
  CHECK_THROWS_AS(sample_shock_profile(g2, 0.0, 1.0, -1.0, 0.1), std::invalid_argument);
  GridSpec g1 = make_grid(1, 5, 1.0, {BoundaryKind::dirichlet(1.0, -1.0)});
  Vec s = sample_shock_profile(g1, -0.5, 1.0, -1.0, 0.1);
  REQUIRE(s.size() == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(s(i) == burgers_steady_shock(1.0, -1.0, 0.1, -0.5 + i * g1.dx));
}

} // TEST_SUITE
