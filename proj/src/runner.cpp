#include "carlab/runner.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "carlab/carleman.hpp"
#include "carlab/csvio.hpp"
#include "carlab/reference.hpp"
#include "carlab/regimes.hpp"
#include "carlab/spectrum.hpp"

namespace carlab {

namespace fs = std::filesystem;
using nlohmann::json;

const char* tool_name() { return "carlab"; }
const char* tool_version() { return "0.1.0"; }

void parallel_for_indexed(std::size_t count, int workers,
                          const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const int k = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (k == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (int w = 0; w < k; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  // Rethrow the lowest failing index so the reported error does not depend on
  // thread scheduling.
  for (std::size_t i = 0; i < count; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

namespace {

json json_finite(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0.0 ? "inf" : "-inf";
}

std::vector<double> linspace(double a, double b, long n) {
  std::vector<double> v(n);
  for (long i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.front() = a;
  v.back() = b;
  return v;
}

/// Accumulates the manifest while an experiment runs; always writable, even
/// when a stage failed halfway.
class ManifestBuilder {
public:
  ManifestBuilder(const RunConfig& cfg, fs::path out_dir, int workers)
      : out_dir_(std::move(out_dir)) {
    m_["tool"] = {{"name", tool_name()}, {"version", tool_version()}};
    m_["experiment"] = cfg.experiment;
    m_["config"] = cfg.raw;
    m_["workers"] = workers;
    m_["stages"] = json::array();
    m_["derived"] = json::object();
    m_["artifacts"] = json::array();
    m_["status"] = "running";
  }

  template <class F>
  void stage(const std::string& name, F&& f) {
    current_stage_ = name;
    const auto t0 = std::chrono::steady_clock::now();
    std::forward<F>(f)();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m_["stages"].push_back({{"name", name}, {"wall_time_s", secs}});
  }

  json& derived() { return m_["derived"]; }

  void csv(const std::string& rel, const Table& t) {
    write_csv(out_dir_ / rel, t);
    artifact(rel);
  }

  void text(const std::string& rel, const std::string& content) {
    write_text(out_dir_ / rel, content);
    artifact(rel);
  }

  void finish_ok() { m_["status"] = "ok"; }
  void finish_error(const json& err) {
    m_["status"] = "error";
    m_["error"] = err;
  }

  const std::string& current_stage() const { return current_stage_; }

  void write() const { write_text(out_dir_ / "manifest.json", m_.dump(2) + "\n"); }
  const json& doc() const { return m_; }

private:
  void artifact(const std::string& rel) {
    const fs::path p = out_dir_ / rel;
    m_["artifacts"].push_back({{"path", rel},
                               {"bytes", static_cast<std::uint64_t>(fs::file_size(p))},
                               {"fnv1a64", file_digest(p)}});
  }

  json m_;
  fs::path out_dir_;
  std::string current_stage_ = "setup";
};

// ------------------------------------------------------------- gnuplot styles

std::string gp_errors_script() {
  return "# truncation error vs Carleman order\n"
         "set datafile separator ','\n"
         "set logscale y\n"
         "set xlabel 'truncation order C'\n"
         "set ylabel 'relative error'\n"
         "set grid\n"
         "plot 'errors.csv' skip 1 using 1:4 with linespoints pointtype 7 "
         "title 'truncation error'\n";
}

std::string gp_spectrum_script(const std::vector<long>& n_values) {
  std::string s =
      "# energy cascade comparison\n"
      "set datafile separator ','\n"
      "set logscale xy\n"
      "set xlabel 'kappa'\n"
      "set ylabel 'E(kappa)'\n"
      "set grid\n"
      "plot ";
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (i) s += ", \\\n     ";
    const std::string n = std::to_string(n_values[i]);
    s += "'spectrum_N" + n + ".csv' skip 1 using 1:2 with linespoints title 'N=" + n + "'";
  }
  s += "\n";
  return s;
}

std::string gp_map_script() {
  return "# efficiency/resolvability region map with frontier overlays\n"
         "set datafile separator ','\n"
         "set logscale xy\n"
         "set xlabel 'Re'\n"
         "set ylabel 'N'\n"
         "set grid\n"
         "labels = 'I II III IV V'\n"
         "plot for [lbl in labels] 'map.csv' skip 1 "
         "using 2:(strcol(6) eq lbl ? $1 : NaN) with points title 'region '.lbl, \\\n"
         "     'frontier.csv' skip 1 using 2:1 with lines lw 2 title 'R = 1 frontier', \\\n"
         "     'frontier.csv' skip 1 using 3:1 with lines lw 2 title 'Kolmogorov frontier'\n";
}

// -------------------------------------------------------------- experiments

void run_ops(const RunConfig& cfg, ManifestBuilder& mb) {
  const OpsProblem& p = *cfg.ops;
  const double dx = p.L / static_cast<double>(p.N - 1);
  AffineOperator op;
  mb.stage("assemble", [&] {
    const int n = static_cast<int>(p.N);
    switch (p.bc.kind) {
      case BoundaryCondition::Periodic:
        if (p.order == 1)
          op = derivative_pbc(n, dx);
        else
          op.matrix = second_derivative_matrix(BoundaryCondition::Periodic, n, dx);
        break;
      case BoundaryCondition::Open:
        if (p.order == 1)
          op = derivative_obc(n, dx);
        else
          op.matrix = second_derivative_matrix(BoundaryCondition::Open, n, dx);
        break;
      case BoundaryCondition::Dirichlet: {
        const double l = p.bc.left, r = p.bc.right;
        op = derivative_dirichlet(
            n, dx, p.order, [l](double) { return l; }, [r](double) { return r; });
        break;
      }
    }
  });
  mb.derived()["dx"] = dx;

  Table spec_table;
  mb.stage("analyze", [&] {
    mb.derived()["spectral_norm"] = spectral_norm(op.matrix);
    if (p.bc.kind == BoundaryCondition::Dirichlet) {
      Eigen::EigenSolver<Mat> es{Mat(op.matrix)};
      std::vector<std::complex<double>> eigs(p.N);
      for (long i = 0; i < p.N; ++i) eigs[i] = es.eigenvalues()(i);
      std::sort(eigs.begin(), eigs.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
      });
      spec_table = Table({"index", "eig_real", "eig_imag"});
      for (long i = 0; i < p.N; ++i)
        spec_table.add_row(
            {format_long(i), format_double(eigs[i].real()), format_double(eigs[i].imag())});
    } else {
      SpectrumReport rep =
          analytic_spectrum(p.bc.kind, static_cast<int>(p.N), dx, p.order);
      mb.derived()["formula_mismatch"] = rep.formula_mismatch;
      mb.derived()["max_abs_gap"] = rep.max_abs_gap;
      spec_table = Table({"index", "eig_real", "eig_imag", "formula_real", "formula_imag"});
      for (std::size_t i = 0; i < rep.numerical.size(); ++i)
        spec_table.add_row({format_long(static_cast<long>(i)),
                            format_double(rep.numerical[i].real()),
                            format_double(rep.numerical[i].imag()),
                            format_double(rep.documented_formula[i].real()),
                            format_double(rep.documented_formula[i].imag())});
    }
  });

  mb.stage("emit", [&] {
    mb.csv("spectrum.csv", spec_table);
    const std::vector<double> sample_times = op.has_offset() ? std::vector<double>{0.0}
                                                             : std::vector<double>{};
    mb.text("operator.json", operator_to_json(op, sample_times).dump(2) + "\n");
  });
}

double characteristic_velocity(const DnsProblem& p, const Vec& u0) {
  double U = u0.size() > 0 ? u0.cwiseAbs().maxCoeff() : 0.0;
  for (const auto& b : p.bc)
    if (b.kind == BoundaryCondition::Dirichlet)
      U = std::max({U, std::abs(b.left), std::abs(b.right)});
  return std::max(U, 1e-6);
}

void run_dns(const RunConfig& cfg, ManifestBuilder& mb) {
  const DnsProblem& p = *cfg.dns;
  const IntegrateOptions opts = integrate_options(cfg.solver);
  GridSpec grid;
  QuadraticODE sys;
  Vec u0;
  mb.stage("assemble", [&] {
    grid = grid_of(p);
    sys = system_of(p);
    u0 = sample_profile(p.u0, grid, p.x_left);
    mb.derived()["dx"] = grid.dx;
    mb.derived()["state_size"] = grid.state_size();
    mb.derived()["nu"] = p.nu;
  });

  if (p.mode == "transient") {
    Trajectory traj;
    mb.stage("integrate", [&] {
      const std::vector<double> times =
          p.t_outputs.empty() ? linspace(0.0, p.t_final, p.n_outputs) : p.t_outputs;
      traj = integrate_nonlinear(sys, u0, 0.0, p.t_final, times, opts);
    });
    mb.stage("emit", [&] {
      std::vector<std::string> cols = {"t"};
      for (long j = 0; j < sys.n; ++j) cols.push_back("u_" + std::to_string(j + 1));
      Table t(cols);
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::vector<std::string> row = {format_double(traj.times[i])};
        for (long j = 0; j < sys.n; ++j) row.push_back(format_double(traj.states(i, j)));
        t.add_row(std::move(row));
      }
      mb.csv("trajectory.csv", t);
    });
  } else {
    SteadyState st;
    mb.stage("integrate", [&] {
      const double t_cap = cfg.solver.steady_time_factor * p.L / characteristic_velocity(p, u0);
      st = run_to_steady_state(sys, u0, cfg.solver.steady_residual_tol, t_cap,
                               cfg.solver.steady_check_interval, opts);
      mb.derived()["t_reached"] = st.t;
      mb.derived()["residual"] = st.residual;
      mb.derived()["converged"] = st.converged;
    });
    mb.stage("emit", [&] {
      const std::vector<double> xs = axis_coordinates(grid, p.x_left);
      Table t({"x", "u"});
      for (int i = 0; i < grid.N; ++i)
        t.add_row({format_double(xs[i]), format_double(st.u(i))});
      mb.csv("state.csv", t);

      const BcSpec& b = p.bc.front();
      if (b.kind == BoundaryCondition::Dirichlet && b.left > b.right &&
          p.forcing.kind == "zero") {
        const Vec analytic = sample_shock_profile(grid, p.x_left, b.left, b.right, p.nu);
        Table a({"x", "u"});
        for (int i = 0; i < grid.N; ++i)
          a.add_row({format_double(xs[i]), format_double(analytic(i))});
        mb.csv("shock.csv", a);
        mb.derived()["shock_width"] = shock_width(b.left, b.right, p.nu);
        mb.derived()["max_error_vs_analytic"] = (st.u - analytic).cwiseAbs().maxCoeff();
      }
    });
  }
}

void run_sweep(const RunConfig& cfg, ManifestBuilder& mb, int workers) {
  const SweepProblem& sp = *cfg.sweep;
  const IntegrateOptions opts = integrate_options(cfg.solver);
  QuadraticODE sys;
  Vec u0v;

  mb.stage("assemble", [&] {
    if (sp.target == "toy") {
      // dx/dt = -x - R x^2 as a 1-state quadratic system.
      SpMat f1(1, 1), f2(1, 1);
      f1.insert(0, 0) = -1.0;
      f2.insert(0, 0) = -sp.R_coef;
      f1.makeCompressed();
      f2.makeCompressed();
      sys.n = 1;
      sys.F1 = std::move(f1);
      sys.F2 = std::move(f2);
      sys.F0 = [](double) { return Vec::Zero(1); };
      sys.static_forcing = true;
      u0v = Vec::Constant(1, sp.x0);
      const ConvergenceRadius cr = radius_of_convergence(sp.R_coef);
      mb.derived()["t_star"] = json_finite(cr.t_star);
      mb.derived()["t_star_boundary_case"] = cr.boundary_case;
    } else {
      sys = system_of(sp.pde);
      u0v = sample_profile(sp.pde.u0, sys.grid, sp.pde.x_left);
      mb.derived()["dx"] = sys.grid.dx;
      json r_of_n = json::object();
      for (long N : sp.report_R_at) {
        DnsProblem q = sp.pde;
        q.N = N;
        const QuadraticODE s2 = system_of(q);
        const Vec u2 = sample_profile(q.u0, s2.grid, q.x_left);
        r_of_n[std::to_string(N)] = compute_R(f1_dominant_eig(s2.F1), spectral_norm(s2.F2),
                                              s2.F0(0.0).norm(), u2.norm());
      }
      if (!r_of_n.empty()) mb.derived()["R_of_N"] = r_of_n;
    }
  });

  Trajectory ref;
  mb.stage("reference", [&] {
    ref = integrate_nonlinear(sys, u0v, 0.0, sp.t_eval, {sp.t_eval}, opts);
  });

  std::vector<TruncationPoint> rows(sp.orders.size());
  mb.stage("sweep", [&] {
    parallel_for_indexed(sp.orders.size(), workers, [&](std::size_t i) {
      rows[i] = truncation_error_for_order(sys, u0v, sp.orders[i], sp.t_eval, ref, opts,
                                           cfg.solver.nnz_budget);
    });
  });

  const SweepResult sw = summarize_sweep(rows);
  mb.derived()["monotone_decreasing"] = sw.monotone_decreasing;
  if (sw.fit_valid) {
    mb.derived()["decay_rate"] = sw.decay_rate;
    mb.derived()["fit_r_squared"] = sw.r_squared;
  }

  mb.stage("emit", [&] {
    Table t({"C", "S", "nnz", "error"});
    for (const auto& r : sw.rows)
      t.add_row({format_long(r.C), format_long(r.S), format_long(static_cast<long>(r.nnz)),
                 format_double(r.error)});
    mb.csv("errors.csv", t);
    if (cfg.output.gnuplot) mb.text("errors.gp", gp_errors_script());
  });
}

void run_map(const RunConfig& cfg, ManifestBuilder& mb) {
  const MapProblem& mp = *cfg.map;
  const FlowParams params = mp.to_flow_params();
  RegionMap rm;

  mb.stage("analyze", [&] {
    rm = region_map(params, mp.N_lo, mp.N_hi, mp.Re_lo, mp.Re_hi, mp.resolution);
    const KolmogorovEstimate k = kolmogorov_scale(params);
    const RKs rk = r_ks(params);
    json& d = mb.derived();
    d["N_K"] = k.N_min;
    d["eta"] = json_finite(k.eta);
    d["epsilon"] = k.epsilon;
    d["tau"] = k.tau;
    d["r_ks_paper"] = rk.r_paper;
    d["r_ks_substituted"] = rk.r_substituted;
    d["r_ks_divergent"] = rk.divergent;
    try {
      d["N_star"] = crossing_N_star(params);
    } catch (const std::exception& e) {
      d["N_star_error"] = e.what();
    }
  });

  mb.stage("emit", [&] {
    Table m({"N", "Re", "R", "R_ks_paper", "N_K", "label"});
    for (const auto& r : rm.rows)
      m.add_row({format_double(r.N), format_double(r.Re), format_double(r.R),
                 format_double(r.r_ks_paper), format_long(r.N_K), to_string(r.label)});
    mb.csv("map.csv", m);

    Table f({"N", "Re_frontier", "N_K_frontier"});
    for (const auto& r : rm.frontier)
      f.add_row({format_double(r.N), format_double(r.Re_frontier),
                 format_double(r.Re_kolmogorov)});
    mb.csv("frontier.csv", f);

    if (cfg.output.gnuplot) mb.text("map.gp", gp_map_script());
  });
}

void run_spectrum(const RunConfig& cfg, ManifestBuilder& mb, int workers) {
  const SpectrumProblem& sp = *cfg.spectrum;
  const IntegrateOptions opts = integrate_options(cfg.solver);
  const std::size_t m = sp.N_values.size();
  std::vector<SpectrumSeries> spectra(m);

  mb.stage("integrate", [&] {
    parallel_for_indexed(m, workers, [&](std::size_t i) {
      DnsProblem q = sp.base;
      q.N = sp.N_values[i];
      const QuadraticODE sys = system_of(q);
      const Vec u0 = sample_profile(q.u0, sys.grid, q.x_left);
      const Trajectory tr = integrate_nonlinear(sys, u0, 0.0, sp.t_eval, {sp.t_eval}, opts);
      spectra[i] = energy_spectrum(tr.state_at(sp.t_eval), sys.grid);
    });
  });

  CascadeComparison cmp;
  mb.stage("analyze", [&] {
    cmp = cascade_compare(spectra, m - 1, sp.dealias_fraction);
    json& d = mb.derived();
    d["band_lo"] = cmp.band_lo;
    d["band_hi"] = cmp.band_hi;
    d["reference_N"] = sp.N_values.back();
    json dev = json::object();
    for (const auto& r : cmp.rows) {
      json& slot = dev[std::to_string(sp.N_values[r.series_id])];
      slot[r.band] = r.deviation;
      slot["under_resolved"] = r.under_resolved;
    }
    d["deviation"] = dev;
    json totals = json::object();
    for (std::size_t i = 0; i < m; ++i)
      totals[std::to_string(sp.N_values[i])] = spectra[i].norm_total;
    d["norm_total"] = totals;
  });

  mb.stage("emit", [&] {
    for (std::size_t i = 0; i < m; ++i) {
      Table t({"kappa", "energy"});
      for (std::size_t k = 0; k < spectra[i].kappa.size(); ++k)
        t.add_row({format_long(spectra[i].kappa[k]), format_double(spectra[i].energy[k])});
      mb.csv("spectrum_N" + std::to_string(sp.N_values[i]) + ".csv", t);
    }
    Table c({"series_id", "band", "deviation", "flag"});
    for (const auto& r : cmp.rows)
      c.add_row({format_long(sp.N_values[r.series_id]), r.band, format_double(r.deviation),
                 r.under_resolved ? "true" : "false"});
    mb.csv("compare.csv", c);
    if (cfg.output.gnuplot) mb.text("cascade.gp", gp_spectrum_script(sp.N_values));
  });
}

void run_toy_radius(const RunConfig& cfg, ManifestBuilder& mb) {
  const ToyRadiusProblem& tp = *cfg.toy_radius;
  std::vector<ConvergenceRadius> rs(tp.R_values.size());
  mb.stage("analyze", [&] {
    json ts = json::object();
    for (std::size_t i = 0; i < tp.R_values.size(); ++i) {
      rs[i] = radius_of_convergence(tp.R_values[i]);
      ts[format_double(tp.R_values[i])] = json_finite(rs[i].t_star);
    }
    mb.derived()["t_star"] = ts;
  });
  mb.stage("emit", [&] {
    Table t({"R_coef", "t_star", "boundary_case"});
    for (std::size_t i = 0; i < tp.R_values.size(); ++i)
      t.add_row({format_double(tp.R_values[i]), format_double(rs[i].t_star),
                 rs[i].boundary_case ? "true" : "false"});
    mb.csv("radius.csv", t);
  });
}

} // namespace

RunResult run_experiment(const RunConfig& cfg, const fs::path& out_dir, int workers) {
  RunResult result;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  ManifestBuilder mb(cfg, out_dir, workers);

  if (ec) {
    const json err = {{"type", "io"},
                      {"stage", "setup"},
                      {"what", "cannot create output directory " + out_dir.string()}};
    mb.finish_error(err);
    result.error_json = json{{"error", err}}.dump();
    result.exit_code = 1;
    result.manifest = mb.doc();
    return result;
  }

  try {
    if (cfg.experiment == "ops")
      run_ops(cfg, mb);
    else if (cfg.experiment == "dns")
      run_dns(cfg, mb);
    else if (cfg.experiment == "carleman-sweep")
      run_sweep(cfg, mb, workers);
    else if (cfg.experiment == "regimes-map")
      run_map(cfg, mb);
    else if (cfg.experiment == "spectrum")
      run_spectrum(cfg, mb, workers);
    else if (cfg.experiment == "toy-radius")
      run_toy_radius(cfg, mb);
    else
      throw std::logic_error("run_experiment: unvalidated experiment name");
    mb.finish_ok();
  } catch (const BudgetExceeded& e) {
    const json err = {{"type", "budget-exceeded"},
                      {"stage", mb.current_stage()},
                      {"what", e.what()},
                      {"state_size", e.state_size},
                      {"nnz_estimate", e.nnz_estimate}};
    mb.finish_error(err);
    result.error_json = json{{"error", err}}.dump();
    result.exit_code = 3;
  } catch (const StepUnderflow& e) {
    const json err = {{"type", "step-underflow"},
                      {"stage", mb.current_stage()},
                      {"what", e.what()},
                      {"t_reached", e.t_reached}};
    mb.finish_error(err);
    result.error_json = json{{"error", err}}.dump();
    result.exit_code = 4;
  } catch (const std::exception& e) {
    const json err = {{"type", "runtime"}, {"stage", mb.current_stage()}, {"what", e.what()}};
    mb.finish_error(err);
    result.error_json = json{{"error", err}}.dump();
    result.exit_code = 1;
  }

  try {
    mb.write();
  } catch (const std::exception& e) {
    if (result.exit_code == 0) {
      const json err = {{"type", "io"}, {"stage", "manifest"}, {"what", e.what()}};
      result.error_json = json{{"error", err}}.dump();
      result.exit_code = 1;
    }
  }
  result.manifest = mb.doc();
  return result;
}

} // namespace carlab
