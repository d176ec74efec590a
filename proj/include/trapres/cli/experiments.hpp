#pragma once

#include "trapres/cli/config.hpp"
#include "trapres/cli/emit.hpp"

#include <string>
#include <vector>

namespace trapres::cli {

/// Everything an experiment produced. `results` is the results.csv table:
/// experiment, quantity, h, value, reference, tolerance, status.
struct RunReport {
  Table results;
  std::vector<Table> artifacts;  // resonances, census, rates, gapscan, ...
  nlohmann::json meta_extra = nlohmann::json::object();
  bool failed_check = false;  // some results row has status fail
  bool error = false;
  std::string error_kind;
  std::string error_message;
};

RunReport new_report();

/// Runs the experiment named in `config`; module errors are caught and recorded
/// in the report (with whatever tables were completed).
RunReport run_experiment(const ExperimentConfig& config, unsigned threads);

/// run_experiment plus emission to `dir`: tables, results.csv and meta.json
/// (always written). Returns the process exit status: 0 when every check
/// passed, 1 when a check failed, 3 on a module error.
int run_and_emit(const ExperimentConfig& config, const std::string& dir, unsigned threads);

/// meta.json for a configuration that failed validation (exit status 2).
void emit_config_error(const std::string& dir, const std::string& config_path, const std::string& message);

}  // namespace trapres::cli
