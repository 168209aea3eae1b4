#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ssrc/config.hpp"
#include "ssrc/serialization.hpp"

namespace ssrc {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Header row plus one line per row; doubles as %.16e.
std::string table_to_csv(const Table& table);
// {"columns": [...], "rows": [[...], ...]}; non-finite doubles become null.
Json table_to_json(const Table& table);

struct ExperimentOutput {
  Table table;
  std::optional<Json> report;
};

// Column names of an experiment's data file, in output order.
std::vector<std::string> experiment_columns(const std::string& experiment);

ExperimentOutput run_experiment(const ExperimentConfig& config);

struct RunArtifacts {
  std::string data_path;
  std::string meta_path;
  std::string report_path;  // empty when the experiment has no report
  double wall_seconds = 0.0;
};

// Runs and writes <dir>/<experiment>.{csv|json}, <experiment>.meta.json and, for the
// feasibility experiments, <experiment>.report.json.
RunArtifacts run_and_write(const ExperimentConfig& config);

}  // namespace ssrc
