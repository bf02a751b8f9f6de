#include "carlab/carleman.hpp"

#include <cmath>

namespace carlab {

namespace {

long checked_pow(long n, int e, long limit) {
  long p = 1;
  for (int i = 0; i < e; ++i) {
    if (p > limit / n)
      throw BudgetExceeded("carleman_blocks: state size overflows the memory budget", -1, -1);
    p *= n;
  }
  return p;
}

/// Appends I^{(x)(nu-1)} (x) M (x) I^{(x)(j-nu)} at the given block origin.
/// M may be rectangular (n x n for F1, n x n^2 for F2, n x 1 for the drive).
void append_sandwich(std::vector<Triplet>& trip, const SpMat& m, long n, int j, int nu,
                     long row_base, long col_base) {
  const long left = [&] {
    long p = 1;
    for (int i = 0; i < nu - 1; ++i) p *= n;
    return p;
  }();
  const long right = [&] {
    long p = 1;
    for (int i = 0; i < j - nu; ++i) p *= n;
    return p;
  }();
  for (int r = 0; r < m.outerSize(); ++r)
    for (SpMat::InnerIterator it(m, r); it; ++it)
      for (long p = 0; p < left; ++p)
        for (long s = 0; s < right; ++s)
          trip.emplace_back(row_base + (p * m.rows() + it.row()) * right + s,
                            col_base + (p * m.cols() + it.col()) * right + s, it.value());
}

SpMat f0_as_matrix(const Vec& f0) {
  SpMat m(f0.size(), 1);
  std::vector<Triplet> trip;
  for (Eigen::Index i = 0; i < f0.size(); ++i)
    if (f0(i) != 0.0) trip.emplace_back(i, 0, f0(i));
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

} // namespace

CarlemanSystem carleman_blocks(const QuadraticODE& system, int C, long long nnz_budget) {
  if (C < 1) throw std::invalid_argument("carleman_blocks: truncation order must be >= 1");
  const long n = system.n;

  CarlemanSystem cs;
  cs.order = C;
  cs.n = n;
  cs.static_forcing = system.static_forcing;
  cs.f0_fn = system.F0;
  cs.f0_at_0 = system.F0(0.0);
  cs.blockOffsets.resize(C + 1);
  cs.blockOffsets[0] = 0;
  const long size_limit = 2'000'000'000L;
  for (int j = 1; j <= C; ++j) {
    const long sj = checked_pow(n, j, size_limit);
    if (cs.blockOffsets[j - 1] > size_limit - sj)
      throw BudgetExceeded("carleman_blocks: stacked state exceeds the index range",
                           cs.blockOffsets[j - 1], -1);
    cs.blockOffsets[j] = cs.blockOffsets[j - 1] + sj;
  }
  cs.S = cs.blockOffsets[C];

  const SpMat f0m = f0_as_matrix(cs.f0_at_0);
  // Exact nonzero count before committing any memory.
  long long nnz = 0;
  {
    long njm1 = 1; // n^{j-1}
    for (int j = 1; j <= C; ++j) {
      nnz += static_cast<long long>(j) * system.F1.nonZeros() * njm1;
      if (j < C) nnz += static_cast<long long>(j) * system.F2.nonZeros() * njm1;
      if (j >= 2) nnz += static_cast<long long>(j) * f0m.nonZeros() * njm1;
      njm1 *= n;
    }
  }
  if (nnz > nnz_budget)
    throw BudgetExceeded("carleman_blocks: would need " + std::to_string(nnz) +
                             " nonzeros for a stacked state of " + std::to_string(cs.S) +
                             " (budget " + std::to_string(nnz_budget) + ")",
                         cs.S, nnz);

  // The reported count is the assembled-triplet total (colliding diagonal
  // sandwich terms are merged by the compression afterwards, so the stored
  // matrix may hold fewer entries).
  cs.nnz = nnz;
  if (C == 1) {
    // First-order truncation is the linear system itself, matrix reused as-is.
    cs.A = system.F1;
  } else {
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(nnz));
    for (int j = 1; j <= C; ++j) {
      const long row_base = cs.blockOffsets[j - 1];
      for (int nu = 1; nu <= j; ++nu) {
        append_sandwich(trip, system.F1, n, j, nu, row_base, cs.blockOffsets[j - 1]);
        if (j < C) append_sandwich(trip, system.F2, n, j, nu, row_base, cs.blockOffsets[j]);
        if (j >= 2) append_sandwich(trip, f0m, n, j, nu, row_base, cs.blockOffsets[j - 2]);
      }
    }
    cs.A = SpMat(cs.S, cs.S);
    cs.A.setFromTriplets(trip.begin(), trip.end());
    cs.A.makeCompressed();
  }

  const long nloc = n;
  auto f0 = system.F0;
  const long S = cs.S;
  cs.b = [f0, nloc, S](double t) {
    Vec out = Vec::Zero(S);
    out.head(nloc) = f0(t);
    return out;
  };
  return cs;
}

Vec initial_carleman_state(const Vec& u0, int C) {
  if (C < 1) throw std::invalid_argument("initial_carleman_state: order must be >= 1");
  const long n = u0.size();
  long S = 0, sj = 1;
  for (int j = 1; j <= C; ++j) {
    sj *= n;
    S += sj;
  }
  Vec y = Vec::Zero(S);
  Vec cur = u0;
  long off = 0;
  for (int j = 1; j <= C; ++j) {
    if (j > 1) {
      Vec next(cur.size() * n);
      for (Eigen::Index i = 0; i < cur.size(); ++i) next.segment(i * n, n) = cur(i) * u0;
      cur = std::move(next);
    }
    y.segment(off, cur.size()) = cur;
    off += cur.size();
  }
  return y;
}

namespace {

/// Downward-drive correction for a time-varying F0: applies
/// sum_{j>=2} sum_nu I^{(x)(nu-1)} (x) (F0(t)-F0(0)) (x) I^{(x)(j-nu)}
/// to the (j-1)-block of y, matrix-free.
Vec apply_drive_delta(const CarlemanSystem& cs, const Vec& delta, const Vec& y) {
  Vec out = Vec::Zero(cs.S);
  const long n = cs.n;
  for (int j = 2; j <= cs.order; ++j) {
    const long row_base = cs.blockOffsets[j - 1];
    const long col_base = cs.blockOffsets[j - 2];
    for (int nu = 1; nu <= j; ++nu) {
      long left = 1;
      for (int i = 0; i < nu - 1; ++i) left *= n;
      long right = 1;
      for (int i = 0; i < j - nu; ++i) right *= n;
      for (long p = 0; p < left; ++p)
        for (long i = 0; i < n; ++i) {
          if (delta(i) == 0.0) continue;
          const long row0 = row_base + (p * n + i) * right;
          const long col0 = col_base + p * right;
          for (long s = 0; s < right; ++s) out(row0 + s) += delta(i) * y(col0 + s);
        }
    }
  }
  return out;
}

} // namespace

Trajectory integrate_linear(const CarlemanSystem& cs, const Vec& y0, double t0, double t1,
                            std::vector<double> output_times, const IntegrateOptions& opts) {
  if (y0.size() != cs.S)
    throw std::invalid_argument("integrate_linear: state size does not match the stacked system");
  RhsFn rhs;
  if (cs.static_forcing) {
    Vec b0 = cs.b(0.0);
    rhs = [&cs, b0](double, const Vec& y) { return Vec(cs.A * y + b0); };
  } else {
    rhs = [&cs](double t, const Vec& y) {
      Vec out = cs.A * y + cs.b(t);
      Vec delta = cs.f0_fn(t) - cs.f0_at_0;
      if (delta.cwiseAbs().maxCoeff() > 0.0) out += apply_drive_delta(cs, delta, y);
      return out;
    };
  }
  return integrate_rk45(rhs, y0, t0, t1, std::move(output_times), opts);
}

TruncationPoint truncation_error_for_order(const QuadraticODE& system, const Vec& u0, int C,
                                           double t_eval, const Trajectory& reference,
                                           const IntegrateOptions& opts, long long nnz_budget) {
  const Vec u_ref = reference.state_at(t_eval); // throws when t_eval was not recorded
  CarlemanSystem cs = carleman_blocks(system, C, nnz_budget);
  Vec y0 = initial_carleman_state(u0, C);
  Trajectory traj = integrate_linear(cs, y0, 0.0, t_eval, {t_eval}, opts);
  Vec u_c = traj.state_at(t_eval).head(system.n);
  TruncationPoint pt;
  pt.C = C;
  pt.S = cs.S;
  pt.nnz = cs.nnz;
  pt.error = (u_c - u_ref).norm() / u_ref.norm();
  return pt;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = f.slope * x[i] + f.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  f.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

SweepResult summarize_sweep(std::vector<TruncationPoint> rows) {
  if (rows.empty()) throw std::invalid_argument("summarize_sweep: no rows given");
  SweepResult res;
  res.rows = std::move(rows);

  res.monotone_decreasing = true;
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    if (!(res.rows[i].error < res.rows[i - 1].error)) res.monotone_decreasing = false;

  if (res.monotone_decreasing && res.rows.size() >= 2) {
    bool positive = true;
    for (const auto& r : res.rows)
      if (!(r.error > 0.0)) positive = false;
    if (positive) {
      std::vector<double> xs, ys;
      for (const auto& r : res.rows) {
        xs.push_back(static_cast<double>(r.C));
        ys.push_back(std::log(r.error));
      }
      LineFit f = fit_line(xs, ys);
      res.fit_valid = true;
      res.decay_rate = f.slope;
      res.r_squared = f.r_squared;
    }
  }
  return res;
}

SweepResult truncation_error_sweep(const QuadraticODE& system, const Vec& u0,
                                   const std::vector<int>& orders, double t_eval,
                                   const Trajectory& reference, const IntegrateOptions& opts) {
  if (orders.empty()) throw std::invalid_argument("truncation_error_sweep: no orders given");
  for (std::size_t i = 1; i < orders.size(); ++i)
    if (orders[i] <= orders[i - 1])
      throw std::invalid_argument("truncation_error_sweep: orders must be strictly ascending");

  std::vector<TruncationPoint> rows;
  rows.reserve(orders.size());
  for (int C : orders)
    rows.push_back(truncation_error_for_order(system, u0, C, t_eval, reference, opts));
  return summarize_sweep(std::move(rows));
}

} // namespace carlab
