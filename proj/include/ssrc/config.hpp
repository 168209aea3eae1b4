#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssrc/hilbert.hpp"
#include "ssrc/rng.hpp"

namespace ssrc {

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "convergence-coherent", "convergence-displacement", "convergence-squeezed", "commutator",
      "phase-locking",        "overlap",                  "synthesis-bench",      "synthesis-complexity",
      "encoding-feasibility", "cnot-feasibility"};
  return names;
}

struct ParameterGrid {
  std::vector<int> N;
  std::vector<cplx> alpha;
  std::vector<cplx> beta;
  std::vector<double> r;
  std::vector<double> phi;
  std::vector<double> theta;
  std::vector<int> n_max;
  std::vector<int> k;
  std::vector<double> small_angle;
  std::vector<int> restarts;
  std::vector<int> samples;
  std::vector<double> fidelity_target;
  std::vector<std::string> gates;
  std::vector<int> modes;
  std::string encoding = "fock";
  // 0 disables the dense-grid floor in encoding-feasibility.
  double grid_step = 0.0;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = kDefaultSeed;
  std::string output_directory = "out";
  std::string format = "csv";
  int workers = 1;
  std::size_t dimension_cap = kDefaultDimensionCap;
  ParameterGrid grid;
};

struct ConfigParse {
  ExperimentConfig config;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Parses YAML text and validates it; every problem found is listed.
ConfigParse parse_config(const std::string& text);
// Throws Io if the file cannot be read.
ConfigParse load_config(const std::string& path);

// Semantic checks only (the parse step already runs them).
std::vector<std::string> validate_config(const ExperimentConfig& config);

// Canonical YAML rendering, used for the metadata echo.
std::string config_to_yaml(const ExperimentConfig& config);

std::uint64_t parse_seed(const std::string& text);

}  // namespace ssrc
