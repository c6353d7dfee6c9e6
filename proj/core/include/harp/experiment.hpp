#pragma once

#include <string>

#include <json.hpp>

#include "harp/grid.hpp"

namespace harp {

/// Outcome of one experiment run: the full JSON report, the CSV metric
/// table, and the aggregate verdict over its checks.
struct ExperimentResult {
  nlohmann::json report;
  std::string csv;
  bool pass = true;
};

/// Dispatches on config["experiment"].  In freeze mode the measured bands
/// and thresholds are returned under report["frozen"] for the caller to
/// persist; otherwise fixtures (if present) gate the pass/fail checks.
ExperimentResult run_experiment(const nlohmann::json& config, const nlohmann::json& fixtures,
                                bool freeze = false);

/// Throws std::invalid_argument naming the offending field path.
void validate_config(const nlohmann::json& config);

/// One line per experiment kind: name, summary, required fields.
std::string list_experiments();

/// Known experiment kinds in listing order.
const std::vector<std::string>& experiment_kinds();

}  // namespace harp
