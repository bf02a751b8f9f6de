#include "carlab/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace carlab {

int Trajectory::row_at(double t) const {
  const double scale = std::max(1.0, std::abs(t));
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-12 * scale) return static_cast<int>(i);
  throw std::invalid_argument("Trajectory: time " + std::to_string(t) + " was not recorded");
}

Vec Trajectory::state_at(double t) const { return states.row(row_at(t)).transpose(); }

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

struct Stepper {
  const RhsFn& rhs;
  double abs_tol, rel_tol;
  Vec k1, k2, k3, k4, k5, k6, k7, y_new, y_err;

  explicit Stepper(const RhsFn& rhs, const IntegrateOptions& opts)
      : rhs(rhs), abs_tol(opts.abs_tol), rel_tol(opts.rel_tol) {}

  /// One trial step from (t, y) with size h; k1 must hold rhs(t, y).
  /// Returns the scaled error norm; fills y_new and k7 (FSAL).
  double attempt(double t, const Vec& y, double h) {
    k2 = rhs(t + C2 * h, y + h * (A21 * k1));
    k3 = rhs(t + C3 * h, y + h * (A31 * k1 + A32 * k2));
    k4 = rhs(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
    k5 = rhs(t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
    k6 = rhs(t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
    y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    k7 = rhs(t + h, y_new);
    y_err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    double acc = 0.0;
    const auto n = y.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = abs_tol + rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      const double r = y_err(i) / sc;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(n));
  }
};

double initial_step(const RhsFn& rhs, double t0, const Vec& y0, double span, double abs_tol,
                    double rel_tol) {
  const Vec f0 = rhs(t0, y0);
  double d0 = 0.0, d1 = 0.0;
  for (Eigen::Index i = 0; i < y0.size(); ++i) {
    const double sc = abs_tol + rel_tol * std::abs(y0(i));
    d0 = std::max(d0, std::abs(y0(i)) / sc);
    d1 = std::max(d1, std::abs(f0(i)) / sc);
  }
  double h = (d1 > 1e-300) ? 0.01 * d0 / d1 : span * 1e-6;
  if (!(h > 0.0)) h = span * 1e-6;
  return std::min(h, span / 10.0);
}

} // namespace

Trajectory integrate_rk45(const RhsFn& rhs, const Vec& y0, double t0, double t1,
                          std::vector<double> output_times, const IntegrateOptions& opts) {
  if (!(t1 > t0)) throw std::invalid_argument("integrate_rk45: need t1 > t0");
  std::sort(output_times.begin(), output_times.end());
  for (double t : output_times)
    if (t < t0 - 1e-12 || t > t1 + 1e-12 * std::max(1.0, std::abs(t1)))
      throw std::invalid_argument("integrate_rk45: output time outside the span");
  // Always record the endpoints.
  auto ensure = [&output_times](double t) {
    for (double u : output_times)
      if (std::abs(u - t) <= 1e-12 * std::max(1.0, std::abs(t))) return;
    output_times.push_back(t);
  };
  ensure(t0);
  ensure(t1);
  std::sort(output_times.begin(), output_times.end());

  Trajectory traj;
  traj.solver = "rk45-dormand-prince";
  traj.abs_tol = opts.abs_tol;
  traj.rel_tol = opts.rel_tol;
  traj.times.reserve(output_times.size());
  traj.states.resize(static_cast<Eigen::Index>(output_times.size()), y0.size());

  Stepper st(rhs, opts);
  double t = t0;
  Vec y = y0;
  st.k1 = rhs(t0, y0);
  std::size_t next_out = 0;
  auto record_if_due = [&](double tt, const Vec& yy) {
    while (next_out < output_times.size() &&
           std::abs(output_times[next_out] - tt) <= 1e-12 * std::max(1.0, std::abs(tt))) {
      traj.states.row(static_cast<Eigen::Index>(traj.times.size())) = yy.transpose();
      traj.times.push_back(output_times[next_out]);
      ++next_out;
    }
  };
  record_if_due(t, y);

  double h = (opts.initial_step > 0.0) ? opts.initial_step
                                       : initial_step(rhs, t0, y0, t1 - t0, opts.abs_tol,
                                                      opts.rel_tol);
  long steps = 0;
  while (t < t1 && next_out < output_times.size()) {
    if (++steps > opts.max_steps) throw std::runtime_error("integrate_rk45: step budget exhausted");
    const double h_floor = 1e-14 * std::max(1.0, std::abs(t));
    if (h < h_floor)
      throw StepUnderflow("integrate_rk45: step size underflow (blow-up) at t = " +
                              std::to_string(t),
                          t);
    // Clamp so steps land exactly on the next requested output time.
    double target = output_times[next_out];
    if (t + h >= target - h_floor) h = target - t;
    const double err = st.attempt(t, y, h);
    if (err <= 1.0) {
      t = (std::abs(t + h - target) <= h_floor) ? target : t + h;
      y = st.y_new;
      st.k1 = st.k7; // FSAL
      record_if_due(t, y);
      double factor = (err == 0.0) ? 10.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0);
      h *= factor;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
  }
  return traj;
}

UntilResult integrate_until(const RhsFn& rhs, const Vec& y0, double t0, double t_max,
                            const StopPredicate& stop, double check_interval,
                            const IntegrateOptions& opts) {
  if (!(check_interval > 0.0)) throw std::invalid_argument("integrate_until: bad check interval");
  UntilResult res;
  res.t = t0;
  res.y = y0;
  if (stop(res.t, res.y)) {
    res.stopped = true;
    return res;
  }
  while (res.t < t_max) {
    const double hop_end = std::min(res.t + check_interval, t_max);
    Trajectory hop = integrate_rk45(rhs, res.y, res.t, hop_end, {}, opts);
    res.t = hop.times.back();
    res.y = hop.state_at(res.t);
    if (stop(res.t, res.y)) {
      res.stopped = true;
      return res;
    }
  }
  return res;
}

} // namespace carlab
