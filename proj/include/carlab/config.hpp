#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "carlab/field_system.hpp"
#include "carlab/grid.hpp"
#include "carlab/integrate.hpp"
#include "carlab/regimes.hpp"

namespace carlab {

/// Thrown when a config document violates the schema; carries every
/// violation found, not just the first.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

private:
  static std::string render(const std::vector<std::string>& v);
  std::vector<std::string> violations_;
};

struct SolverConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  long max_steps = 50'000'000;
  long long nnz_budget = 50'000'000;
  double steady_residual_tol = 1e-8;
  double steady_time_factor = 50.0; ///< time cap as a multiple of L/U
  double steady_check_interval = 0.25;
};

struct OutputConfig {
  std::string dir = "out";
  bool gnuplot = true;
};

/// Spatial profile vocabulary for initial conditions and forcing shapes.
struct ProfileSpec {
  std::string kind = "zero"; ///< zero | sin | linear | gaussian | samples
  double amplitude = 1.0;
  double periods = 1.0; ///< sin: full periods across the domain
  double phase = 0.0;
  double slope = 0.0;     ///< linear: slope * x + intercept
  double intercept = 0.0;
  double center = 0.0; ///< gaussian bump location
  double sigma = 0.1;
  std::vector<double> values; ///< samples: one value per grid node
};

/// Evaluates a profile at physical coordinate x (domain [x_left, x_left+L]).
double eval_profile(const ProfileSpec& p, double x, double L, double x_left);

/// Samples a profile on the nodes of a 1-d grid.
Vec sample_profile(const ProfileSpec& p, const GridSpec& grid, double x_left);

struct BcSpec {
  BoundaryCondition kind = BoundaryCondition::Periodic;
  double left = 0.0;
  double right = 0.0;
  BoundaryKind to_boundary_kind() const;
};

struct OpsProblem {
  long N = 16;
  double L = 1.0;
  BcSpec bc;
  int order = 1;
};

struct DnsProblem {
  int d = 1;
  long N = 16;
  double L = 1.0;
  double x_left = -0.5;
  std::vector<BcSpec> bc;
  double nu = 0.1;
  ProfileSpec u0;
  ProfileSpec forcing;
  std::string mode = "transient"; ///< transient | steady
  double t_final = 1.0;
  std::vector<double> t_outputs; ///< empty: n_outputs evenly spaced
  long n_outputs = 11;
};

struct SweepProblem {
  std::string target = "toy"; ///< toy | burgers
  // toy target:
  double R_coef = 0.5;
  double x0 = 1.0;
  // burgers target (1-d quadratic PDE):
  DnsProblem pde;
  // shared:
  std::vector<int> orders;
  double t_eval = 1.0;
  std::vector<long> report_R_at; ///< grid sizes at which to report assembled R
};

struct MapProblem {
  double Re = 1.0;
  double U = 1.0;
  double L = 1.0;
  int d = 1;
  Flavor flavor = Flavor::Burgers1D;
  double Sc = 0.0;
  double u0_norm = 1.0;
  double f0_norm = 0.0;
  double beta = 0.78;
  double N_lo = 2.0, N_hi = 512.0;
  double Re_lo = 0.1, Re_hi = 1000.0;
  int resolution = 33;
  FlowParams to_flow_params() const;
};

struct SpectrumProblem {
  DnsProblem base;            ///< grid size taken from N_values instead of base.N
  std::vector<long> N_values; ///< ascending; largest is the reference
  double t_eval = 0.3;
  double dealias_fraction = 2.0 / 3.0;
};

struct ToyRadiusProblem {
  std::vector<double> R_values;
};

struct RunConfig {
  std::string experiment;
  SolverConfig solver;
  OutputConfig output;
  std::optional<OpsProblem> ops;
  std::optional<DnsProblem> dns;
  std::optional<SweepProblem> sweep;
  std::optional<MapProblem> map;
  std::optional<SpectrumProblem> spectrum;
  std::optional<ToyRadiusProblem> toy_radius;
  nlohmann::json raw; ///< verbatim echo for the manifest
};

/// Parses and validates a config document; throws ConfigError listing every
/// violation (unknown keys, wrong types, missing fields, bad values).
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Builds the grid described by a DnsProblem.
GridSpec grid_of(const DnsProblem& p);

/// Assembles the quadratic system described by a DnsProblem.
QuadraticODE system_of(const DnsProblem& p);

IntegrateOptions integrate_options(const SolverConfig& s);

} // namespace carlab
