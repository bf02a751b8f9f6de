#pragma once

#include <filesystem>
#include <functional>

#include "carlab/config.hpp"

namespace carlab {

struct RunResult {
  int exit_code = 0;
  nlohmann::json manifest;
  std::string error_json; ///< machine-readable error document, empty on success
};

/// Executes the configured experiment. All artifacts plus manifest.json land
/// in out_dir; the manifest is written even when a stage fails (with the
/// failing stage recorded). Never throws: failures are encoded in the result.
RunResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir,
                         int workers = 1);

/// Deterministic fan-out: calls fn(0..count-1) on at most `workers` threads.
/// Tasks must write only into their own index-addressed slots; the first
/// failing index's exception is rethrown after all threads join.
void parallel_for_indexed(std::size_t count, int workers,
                          const std::function<void(std::size_t)>& fn);

const char* tool_name();
const char* tool_version();

} // namespace carlab
