#include "carlab/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace carlab {

using nlohmann::json;

std::string ConfigError::render(const std::vector<std::string>& v) {
  std::ostringstream os;
  os << "invalid config (" << v.size() << " violation" << (v.size() == 1 ? "" : "s") << "):";
  for (const auto& s : v) os << "\n  - " << s;
  return os.str();
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(render(violations)), violations_(std::move(violations)) {}

namespace {

class Violations {
public:
  void add(const std::string& path, const std::string& msg) {
    items_.push_back(path.empty() ? msg : path + ": " + msg);
  }
  bool empty() const { return items_.empty(); }
  std::vector<std::string> take() { return std::move(items_); }

private:
  std::vector<std::string> items_;
};

/// View over one JSON object that tracks which keys were consumed, so that
/// reject_unknown() can list every stray key. All getters record a violation
/// instead of throwing; parsing always reaches the end and reports everything.
class Section {
public:
  Section(const json* j, std::string path, Violations& errs)
      : j_(j), path_(std::move(path)), errs_(&errs) {
    if (j_ && !j_->is_object()) {
      errs_->add(path_, "must be a JSON object");
      j_ = nullptr;
    }
  }

  bool present() const { return j_ != nullptr; }
  bool has(const char* key) const { return j_ && j_->contains(key); }
  const std::string& path() const { return path_; }
  Violations& errs() const { return *errs_; }

  const json* take_raw(const char* key) {
    if (!j_) return nullptr;
    seen_.insert(key);
    auto it = j_->find(key);
    return it == j_->end() ? nullptr : &*it;
  }

  double number(const char* key, std::optional<double> def = std::nullopt) {
    const json* v = take_raw(key);
    if (!v) {
      if (def) return *def;
      miss(key);
      return 0.0;
    }
    if (!v->is_number()) {
      bad(key, "must be a number");
      return def.value_or(0.0);
    }
    return v->get<double>();
  }

  long integer(const char* key, std::optional<long> def = std::nullopt) {
    const json* v = take_raw(key);
    if (!v) {
      if (def) return *def;
      miss(key);
      return 0;
    }
    if (!v->is_number_integer()) {
      bad(key, "must be an integer");
      return def.value_or(0);
    }
    return v->get<long>();
  }

  bool boolean(const char* key, bool def) {
    const json* v = take_raw(key);
    if (!v) return def;
    if (!v->is_boolean()) {
      bad(key, "must be a boolean");
      return def;
    }
    return v->get<bool>();
  }

  std::string str(const char* key, std::optional<std::string> def = std::nullopt) {
    const json* v = take_raw(key);
    if (!v) {
      if (def) return *def;
      miss(key);
      return {};
    }
    if (!v->is_string()) {
      bad(key, "must be a string");
      return def.value_or(std::string{});
    }
    return v->get<std::string>();
  }

  std::vector<double> number_array(const char* key, bool required) {
    std::vector<double> out;
    const json* v = take_raw(key);
    if (!v) {
      if (required) miss(key);
      return out;
    }
    if (!v->is_array()) {
      bad(key, "must be an array of numbers");
      return out;
    }
    for (const auto& e : *v) {
      if (!e.is_number()) {
        bad(key, "must contain only numbers");
        return {};
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<long> integer_array(const char* key, bool required) {
    std::vector<long> out;
    const json* v = take_raw(key);
    if (!v) {
      if (required) miss(key);
      return out;
    }
    if (!v->is_array()) {
      bad(key, "must be an array of integers");
      return out;
    }
    for (const auto& e : *v) {
      if (!e.is_number_integer()) {
        bad(key, "must contain only integers");
        return {};
      }
      out.push_back(e.get<long>());
    }
    return out;
  }

  Section object(const char* key, bool required) {
    const json* v = take_raw(key);
    if (!v && required) miss(key);
    return Section(v, join(key), *errs_);
  }

  void reject_unknown() {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (!seen_.count(it.key())) errs_->add(path_, "unknown key '" + it.key() + "'");
  }

  std::string join(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  void bad(const char* key, const std::string& msg) { errs_->add(join(key), msg); }
  void miss(const char* key) { errs_->add(path_, std::string("missing required key '") + key + "'"); }

private:
  const json* j_;
  std::string path_;
  Violations* errs_;
  std::set<std::string> seen_;
};

ProfileSpec parse_profile(Section s) {
  ProfileSpec p;
  if (!s.present()) return p;
  std::string kind = s.str("kind");
  if (kind == "none") kind = "zero";
  p.kind = kind;
  if (kind == "zero") {
    // no parameters
  } else if (kind == "sin") {
    p.amplitude = s.number("amplitude", 1.0);
    p.periods = s.number("periods", 1.0);
    p.phase = s.number("phase", 0.0);
  } else if (kind == "linear") {
    p.slope = s.number("slope");
    p.intercept = s.number("intercept", 0.0);
  } else if (kind == "gaussian") {
    p.amplitude = s.number("amplitude", 1.0);
    p.center = s.number("center");
    p.sigma = s.number("sigma");
    if (s.has("sigma") && !(p.sigma > 0.0)) s.bad("sigma", "must be positive");
  } else if (kind == "samples") {
    p.values = s.number_array("values", true);
    if (p.values.empty()) s.bad("values", "must be a nonempty number array");
  } else if (!kind.empty()) {
    s.bad("kind", "must be one of zero|sin|linear|gaussian|samples");
  }
  s.reject_unknown();
  return p;
}

BcSpec parse_bc(const json& e, const std::string& path, Violations& errs) {
  BcSpec b;
  if (e.is_string()) {
    const std::string k = e.get<std::string>();
    if (k == "periodic")
      b.kind = BoundaryCondition::Periodic;
    else if (k == "open")
      b.kind = BoundaryCondition::Open;
    else if (k == "dirichlet")
      errs.add(path, "dirichlet boundaries need an object with 'left' and 'right' traces");
    else
      errs.add(path, "unknown boundary kind '" + k + "'");
    return b;
  }
  Section s(&e, path, errs);
  const std::string k = s.str("kind");
  if (k == "periodic") {
    b.kind = BoundaryCondition::Periodic;
  } else if (k == "open") {
    b.kind = BoundaryCondition::Open;
  } else if (k == "dirichlet") {
    b.kind = BoundaryCondition::Dirichlet;
    b.left = s.number("left");
    b.right = s.number("right");
  } else if (!k.empty()) {
    s.bad("kind", "must be one of periodic|open|dirichlet");
  }
  s.reject_unknown();
  return b;
}

std::vector<BcSpec> parse_bc_list(Section& problem, int d) {
  std::vector<BcSpec> out;
  const json* v = problem.take_raw("bc");
  if (!v) {
    problem.miss("bc");
    return out;
  }
  if (!v->is_array()) {
    problem.bad("bc", "must be an array (one entry per axis)");
    return out;
  }
  if (static_cast<int>(v->size()) != d) {
    problem.bad("bc", "must list exactly d = " + std::to_string(d) + " boundary kinds");
  }
  int i = 0;
  for (const auto& e : *v) {
    out.push_back(parse_bc(e, problem.join("bc") + "[" + std::to_string(i) + "]", problem.errs()));
    ++i;
  }
  return out;
}

/// Fields shared by dns / spectrum / pde-sweep problems. with_grid_size pulls
/// the mandatory N; with_time pulls mode/t_final/outputs.
DnsProblem parse_pde_fields(Section& s, bool with_grid_size, bool with_time) {
  DnsProblem p;
  p.d = static_cast<int>(s.integer("d", 1));
  if (p.d != 1)
    s.bad("d", "only 1-d problems are supported here (higher d via the library API)");
  if (with_grid_size) {
    p.N = s.integer("N");
    if (s.has("N") && p.N < 4) s.bad("N", "must be at least 4");
  }
  p.L = s.number("L");
  if (s.has("L") && !(p.L > 0.0)) s.bad("L", "must be positive");
  p.x_left = s.number("x_left", -p.L / 2.0);
  p.bc = parse_bc_list(s, std::max(1, p.d));
  p.nu = s.number("nu");
  if (s.has("nu") && !(p.nu > 0.0)) s.bad("nu", "must be positive");
  p.u0 = parse_profile(s.object("u0", true));
  if (s.has("forcing"))
    p.forcing = parse_profile(s.object("forcing", false));
  else
    p.forcing.kind = "zero";
  if (with_time) {
    p.mode = s.str("mode", std::string("transient"));
    if (p.mode == "transient") {
      p.t_final = s.number("t_final");
      if (s.has("t_final") && !(p.t_final > 0.0)) s.bad("t_final", "must be positive");
      p.t_outputs = s.number_array("t_outputs", false);
      for (std::size_t i = 1; i < p.t_outputs.size(); ++i)
        if (!(p.t_outputs[i] > p.t_outputs[i - 1])) {
          s.bad("t_outputs", "must be strictly ascending");
          break;
        }
      if (!p.t_outputs.empty() &&
          (p.t_outputs.front() < 0.0 || p.t_outputs.back() > p.t_final))
        s.bad("t_outputs", "must lie within [0, t_final]");
      p.n_outputs = s.integer("n_outputs", 11);
      if (p.n_outputs < 2) s.bad("n_outputs", "must be at least 2");
    } else if (p.mode == "steady") {
      // steady runs take their thresholds from the solver section
    } else {
      s.bad("mode", "must be 'transient' or 'steady'");
    }
  }
  return p;
}

OpsProblem parse_ops(Section s) {
  OpsProblem p;
  p.N = s.integer("N");
  if (s.has("N") && p.N < 4) s.bad("N", "must be at least 4");
  p.L = s.number("L", 1.0);
  if (!(p.L > 0.0)) s.bad("L", "must be positive");
  const json* v = s.take_raw("bc");
  if (!v)
    s.miss("bc");
  else
    p.bc = parse_bc(*v, s.join("bc"), s.errs());
  p.order = static_cast<int>(s.integer("order", 1));
  if (p.order != 1 && p.order != 2) s.bad("order", "must be 1 or 2");
  s.reject_unknown();
  return p;
}

DnsProblem parse_dns(Section s) {
  DnsProblem p = parse_pde_fields(s, true, true);
  s.reject_unknown();
  return p;
}

SweepProblem parse_sweep(Section s) {
  SweepProblem p;
  p.target = s.str("target");
  if (p.target == "toy") {
    p.R_coef = s.number("R_coef");
    p.x0 = s.number("x0", 1.0);
  } else if (p.target == "burgers") {
    p.pde = parse_pde_fields(s, true, false);
    p.report_R_at = s.integer_array("report_R_at", false);
    for (long n : p.report_R_at)
      if (n < 4) s.bad("report_R_at", "grid sizes must be at least 4");
  } else if (!p.target.empty()) {
    s.bad("target", "must be 'toy' or 'burgers'");
  }
  p.t_eval = s.number("t_eval");
  if (s.has("t_eval") && !(p.t_eval > 0.0)) s.bad("t_eval", "must be positive");
  p.orders = [&] {
    std::vector<int> out;
    for (long o : s.integer_array("orders", true)) out.push_back(static_cast<int>(o));
    return out;
  }();
  if (p.orders.empty()) {
    if (s.has("orders")) s.bad("orders", "must be a nonempty integer array");
  } else {
    if (p.orders.front() < 1) s.bad("orders", "orders must be >= 1");
    for (std::size_t i = 1; i < p.orders.size(); ++i)
      if (p.orders[i] <= p.orders[i - 1]) {
        s.bad("orders", "must be strictly ascending");
        break;
      }
  }
  s.reject_unknown();
  return p;
}

MapProblem parse_map(Section s) {
  MapProblem p;
  p.Re = s.number("Re");
  if (s.has("Re") && !(p.Re > 0.0)) s.bad("Re", "must be positive");
  p.U = s.number("U");
  if (s.has("U") && !(p.U > 0.0)) s.bad("U", "must be positive");
  p.L = s.number("L");
  if (s.has("L") && !(p.L > 0.0)) s.bad("L", "must be positive");
  p.d = static_cast<int>(s.integer("d", 1));
  if (p.d < 1 || p.d > 3) s.bad("d", "must be 1, 2, or 3");
  const std::string fl = s.str("flavor", std::string("burgers1d"));
  try {
    p.flavor = flavor_from_string(fl);
  } catch (const std::invalid_argument& e) {
    s.bad("flavor", e.what());
  }
  if (p.flavor == Flavor::PassiveScalar3D) {
    p.Sc = s.number("Sc");
    if (s.has("Sc") && !(p.Sc > 0.0)) s.bad("Sc", "must be positive");
  } else if (s.has("Sc")) {
    s.bad("Sc", "only meaningful for the passive-scalar flavor");
  }
  p.u0_norm = s.number("u0_norm");
  if (s.has("u0_norm") && !(p.u0_norm > 0.0)) s.bad("u0_norm", "must be positive");
  p.f0_norm = s.number("f0_norm", 0.0);
  if (!(p.f0_norm >= 0.0)) s.bad("f0_norm", "must be nonnegative");
  p.beta = s.number("beta", 0.78);
  if (!(p.beta > 0.5)) s.bad("beta", "must exceed 1/2");

  Section m = s.object("map", false);
  if (m.present()) {
    p.N_lo = m.number("N_min", 2.0);
    p.N_hi = m.number("N_max", 512.0);
    p.Re_lo = m.number("Re_min", 0.1);
    p.Re_hi = m.number("Re_max", 1000.0);
    p.resolution = static_cast<int>(m.integer("resolution", 33));
    if (!(p.N_lo > 0.0 && p.N_hi > p.N_lo)) m.bad("N_max", "range must be positive and increasing");
    if (!(p.Re_lo > 0.0 && p.Re_hi > p.Re_lo))
      m.bad("Re_max", "range must be positive and increasing");
    if (p.resolution < 2) m.bad("resolution", "must be at least 2");
    m.reject_unknown();
  }
  s.reject_unknown();
  return p;
}

SpectrumProblem parse_spectrum(Section s) {
  SpectrumProblem p;
  p.base = parse_pde_fields(s, false, false);
  p.N_values = s.integer_array("N_values", true);
  if (p.N_values.empty()) {
    if (s.has("N_values")) s.bad("N_values", "must be a nonempty integer array");
  } else {
    if (p.N_values.front() < 4) s.bad("N_values", "grid sizes must be at least 4");
    for (std::size_t i = 1; i < p.N_values.size(); ++i)
      if (p.N_values[i] <= p.N_values[i - 1]) {
        s.bad("N_values", "must be strictly ascending (largest is the reference)");
        break;
      }
  }
  p.t_eval = s.number("t_eval");
  if (s.has("t_eval") && !(p.t_eval > 0.0)) s.bad("t_eval", "must be positive");
  p.dealias_fraction = s.number("dealias_fraction", 2.0 / 3.0);
  if (!(p.dealias_fraction > 0.0 && p.dealias_fraction <= 1.0))
    s.bad("dealias_fraction", "must lie in (0, 1]");
  s.reject_unknown();
  return p;
}

ToyRadiusProblem parse_toy_radius(Section s) {
  ToyRadiusProblem p;
  p.R_values = s.number_array("R_values", true);
  if (p.R_values.empty() && s.has("R_values"))
    s.bad("R_values", "must be a nonempty number array");
  for (double r : p.R_values)
    if (!std::isfinite(r)) s.bad("R_values", "entries must be finite");
  s.reject_unknown();
  return p;
}

SolverConfig parse_solver(Section s) {
  SolverConfig c;
  if (!s.present()) return c;
  c.abs_tol = s.number("abs_tol", c.abs_tol);
  c.rel_tol = s.number("rel_tol", c.rel_tol);
  c.max_steps = s.integer("max_steps", c.max_steps);
  c.nnz_budget = s.integer("nnz_budget", static_cast<long>(c.nnz_budget));
  c.steady_residual_tol = s.number("steady_residual_tol", c.steady_residual_tol);
  c.steady_time_factor = s.number("steady_time_factor", c.steady_time_factor);
  c.steady_check_interval = s.number("steady_check_interval", c.steady_check_interval);
  if (!(c.abs_tol > 0.0)) s.bad("abs_tol", "must be positive");
  if (!(c.rel_tol > 0.0)) s.bad("rel_tol", "must be positive");
  if (c.max_steps < 1) s.bad("max_steps", "must be at least 1");
  if (c.nnz_budget < 1) s.bad("nnz_budget", "must be at least 1");
  if (!(c.steady_residual_tol > 0.0)) s.bad("steady_residual_tol", "must be positive");
  if (!(c.steady_time_factor > 0.0)) s.bad("steady_time_factor", "must be positive");
  if (!(c.steady_check_interval > 0.0)) s.bad("steady_check_interval", "must be positive");
  s.reject_unknown();
  return c;
}

OutputConfig parse_output(Section s) {
  OutputConfig c;
  if (!s.present()) return c;
  c.dir = s.str("dir", c.dir);
  if (c.dir.empty()) s.bad("dir", "must be nonempty");
  c.gnuplot = s.boolean("gnuplot", c.gnuplot);
  s.reject_unknown();
  return c;
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }

  Violations errs;
  Section top(&doc, "", errs);
  RunConfig cfg;
  cfg.raw = doc;
  cfg.experiment = top.str("experiment");
  static const std::set<std::string> kExperiments = {"ops",         "dns",      "carleman-sweep",
                                                    "regimes-map", "spectrum", "toy-radius"};
  const bool known = kExperiments.count(cfg.experiment) > 0;
  if (top.has("experiment") && !known)
    top.bad("experiment",
            "must be one of ops|dns|carleman-sweep|regimes-map|spectrum|toy-radius");

  Section problem = top.object("problem", true);
  if (known && problem.present()) {
    if (cfg.experiment == "ops")
      cfg.ops = parse_ops(std::move(problem));
    else if (cfg.experiment == "dns")
      cfg.dns = parse_dns(std::move(problem));
    else if (cfg.experiment == "carleman-sweep")
      cfg.sweep = parse_sweep(std::move(problem));
    else if (cfg.experiment == "regimes-map")
      cfg.map = parse_map(std::move(problem));
    else if (cfg.experiment == "spectrum")
      cfg.spectrum = parse_spectrum(std::move(problem));
    else if (cfg.experiment == "toy-radius")
      cfg.toy_radius = parse_toy_radius(std::move(problem));
  }
  cfg.solver = parse_solver(top.object("solver", false));
  cfg.output = parse_output(top.object("output", false));
  top.reject_unknown();

  if (!errs.empty()) throw ConfigError(errs.take());
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError({"cannot open config file '" + path + "'"});
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

double eval_profile(const ProfileSpec& p, double x, double L, double x_left) {
  if (p.kind == "zero") return 0.0;
  if (p.kind == "sin")
    return p.amplitude *
           std::sin(2.0 * std::numbers::pi * p.periods * (x - x_left) / L + p.phase);
  if (p.kind == "linear") return p.slope * x + p.intercept;
  if (p.kind == "gaussian") {
    const double z = (x - p.center) / p.sigma;
    return p.amplitude * std::exp(-0.5 * z * z);
  }
  throw std::invalid_argument("eval_profile: '" + p.kind + "' cannot be evaluated pointwise");
}

Vec sample_profile(const ProfileSpec& p, const GridSpec& grid, double x_left) {
  if (grid.d != 1) throw std::invalid_argument("sample_profile: 1-d grids only");
  Vec out(grid.N);
  if (p.kind == "samples") {
    if (static_cast<long>(p.values.size()) != grid.N)
      throw std::invalid_argument("sample_profile: 'samples' length does not match the grid");
    for (int i = 0; i < grid.N; ++i) out(i) = p.values[i];
    return out;
  }
  const std::vector<double> xs = axis_coordinates(grid, x_left);
  for (int i = 0; i < grid.N; ++i) out(i) = eval_profile(p, xs[i], grid.L, x_left);
  return out;
}

BoundaryKind BcSpec::to_boundary_kind() const {
  switch (kind) {
    case BoundaryCondition::Periodic: return BoundaryKind::periodic();
    case BoundaryCondition::Open: return BoundaryKind::open();
    case BoundaryCondition::Dirichlet: return BoundaryKind::dirichlet(left, right);
  }
  throw std::logic_error("BcSpec: unknown boundary kind");
}

FlowParams MapProblem::to_flow_params() const {
  return make_flow_params(Re, U, L, d, flavor, u0_norm, f0_norm, Sc, beta);
}

GridSpec grid_of(const DnsProblem& p) {
  std::vector<BoundaryKind> bc;
  bc.reserve(p.bc.size());
  for (const auto& b : p.bc) bc.push_back(b.to_boundary_kind());
  return make_grid(p.d, static_cast<int>(p.N), p.L, std::move(bc));
}

QuadraticODE system_of(const DnsProblem& p) {
  const GridSpec grid = grid_of(p);
  Forcing f = Forcing::none();
  if (p.forcing.kind != "zero") {
    const ProfileSpec spec = p.forcing;
    const double L = p.L;
    const double x_left = p.x_left;
    f.fn = [spec, L, x_left](const std::vector<double>& x, double, int) {
      return eval_profile(spec, x[0], L, x_left);
    };
    f.time_dependent = false;
  }
  return assemble_system(grid, p.nu, f, p.x_left);
}

IntegrateOptions integrate_options(const SolverConfig& s) {
  IntegrateOptions o;
  o.abs_tol = s.abs_tol;
  o.rel_tol = s.rel_tol;
  o.max_steps = s.max_steps;
  return o;
}

} // namespace carlab
