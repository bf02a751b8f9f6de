/// Command-line driver: one subcommand per experiment kind, each reading a
/// JSON config and writing its artifacts plus a manifest into an output
/// directory.
///
/// Exit codes: 0 success, 1 runtime/IO failure, 2 config rejected,
/// 3 memory budget refused, 4 integrator step underflow.

#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "carlab/config.hpp"
#include "carlab/runner.hpp"

namespace {

struct SubArgs {
  std::string config;
  std::string out_dir;
  int workers = 1;
};

void attach_options(CLI::App* sub, SubArgs& a) {
  sub->add_option("--config", a.config, "JSON config file describing the experiment")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out-dir", a.out_dir,
                  "Artifact directory (overrides CARLAB_OUT_DIR and the config's output.dir)");
  sub->add_option("--workers", a.workers, "Worker threads for independent sweep tasks")
      ->check(CLI::PositiveNumber);
}

void print_error_json(const std::string& type, const std::string& what,
                      const std::vector<std::string>& violations) {
  nlohmann::json err;
  err["type"] = type;
  err["what"] = what;
  if (!violations.empty()) err["violations"] = violations;
  nlohmann::json doc;
  doc["error"] = std::move(err);
  std::fprintf(stderr, "%s\n", doc.dump().c_str());
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(carlab::tool_name()) +
               " - Carleman linearisation laboratory for quadratic fluid systems"};
  app.set_version_flag("--version", carlab::tool_version());
  app.require_subcommand(1);

  std::map<std::string, SubArgs> args;
  const std::pair<const char*, const char*> subcommands[] = {
      {"ops", "Emit a derivative operator, its spectrum report, and norms"},
      {"dns", "Integrate the full nonlinear system (transient or to steady state)"},
      {"carleman-sweep", "Truncation-error sweep over Carleman orders"},
      {"regimes-map",
       "Five-region efficiency/resolvability map over the (N, Re) plane "
       "(boundary ties count as efficient/resolved)"},
      {"spectrum", "Energy-cascade comparison across grid resolutions"},
      {"toy-radius", "Convergence-radius table for the scalar toy ODE"},
  };
  for (const auto& [name, desc] : subcommands)
    attach_options(app.add_subcommand(name, desc), args[name]);

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  const SubArgs& a = args[sub->get_name()];

  carlab::RunConfig cfg;
  try {
    cfg = carlab::load_config(a.config);
  } catch (const carlab::ConfigError& e) {
    print_error_json("config", e.what(), e.violations());
    return 2;
  }
  if (cfg.experiment != sub->get_name()) {
    print_error_json("config",
                     "config experiment '" + cfg.experiment + "' does not match subcommand '" +
                         sub->get_name() + "'",
                     {});
    return 2;
  }

  std::string out_dir = a.out_dir;
  if (out_dir.empty())
    if (const char* env = std::getenv("CARLAB_OUT_DIR")) out_dir = env;
  if (out_dir.empty()) out_dir = cfg.output.dir;

  const carlab::RunResult result = carlab::run_experiment(cfg, out_dir, a.workers);
  if (!result.error_json.empty()) std::fprintf(stderr, "%s\n", result.error_json.c_str());
  return result.exit_code;
}
