#pragma once

#include <cstdint>
#include <vector>

#include "ssrc/hilbert.hpp"
#include "ssrc/rng.hpp"
#include "ssrc/schwinger.hpp"

namespace ssrc {

// One planned unitary exp(M (alpha X - conj(alpha) X^dag)) with
// X = prod_j (a_j^dag a_source)^{pattern[j]}, applied exactly.
struct SynthesisStep {
  int order = 0;              // photons moved out of the source mode
  std::vector<int> pattern;   // photons moved into each mode; zero at the source
  int source_mode = 1;
  cplx alpha{0.0, 0.0};       // |alpha| <= small_angle
  std::int64_t repetitions = 1;
  int pass = 0;               // 0 = direct matching, >= 1 = correction passes
  int stage = 0;              // position along the correction path (0 in pass 0)
};

struct SynthesisOptions {
  double small_angle = 1e-2;
  int correction_passes = 2;
  // Path step used by correction passes.
  double stage_angle = 0.15;
  double c0_floor = 1e-6;
  // Highest excitation order matched in the direct pass of the multimode planner.
  int max_order = 2;
  // For two-mode targets with |c0| below the floor: rotate first instead of failing.
  bool allow_prerotation = false;
  std::uint64_t seed = kDefaultSeed;
  // Correction passes stop once this fidelity is reached.
  double stop_fidelity = 1.0 - 1e-13;
};

struct SynthesisPlan {
  BasisPtr basis;
  // Execution order: steps[0] acts first on the initial state.
  std::vector<SynthesisStep> steps;
  SSRCState target;
  double small_angle = 1e-2;
  bool prerotated = false;
  double prerotation_theta = 0.0;
  double prerotation_phi = 0.0;
  double predicted_fidelity = 0.0;
  int passes = 0;

  std::int64_t total_repetitions() const;
};

struct ExecutionResult {
  SSRCState state;
  double fidelity = 0.0;
};

// All photons in the last mode (index 0 of the basis).
SSRCState synthesis_initial_state(const BasisPtr& basis);

// Complex Gaussian amplitudes on the states with at most `max_order` photons outside the last mode.
SSRCState random_target(const BasisPtr& basis, int max_order, SplitMix64& rng);

// Exact <pattern state| X |initial state> for the step generator X of `pattern`.
double synthesis_matrix_element(int total_photons, const std::vector<int>& pattern, int source_mode);

SynthesisPlan plan_two_mode(const SSRCState& target, const SynthesisOptions& options = {});
SynthesisPlan plan_multimode(const SSRCState& target, const SynthesisOptions& options = {});

ExecutionResult execute_plan(const SynthesisPlan& plan, const SSRCState& initial);

struct ComplexityOptions {
  int samples = 5;
  double small_angle = 1e-2;
  int max_passes = 6;
  double stage_angle = 0.15;
  std::uint64_t seed = kDefaultSeed;
};

struct ComplexityRow {
  int N = 0;
  int samples = 0;
  double mean_steps = 0.0;
  double mean_repetitions = 0.0;
  double mean_fidelity = 0.0;
  double min_fidelity = 0.0;
  double met_fraction = 0.0;
};

struct ComplexityReport {
  double fidelity_target = 0.0;
  std::vector<ComplexityRow> rows;
  // Least-squares slopes of log(count) against log(N).
  double slope_steps = 0.0;
  double slope_repetitions = 0.0;
};

// Two-mode step counts for seeded random targets. Exploratory: no pass/fail.
ComplexityReport synthesis_complexity_probe(const std::vector<int>& N_list, double fidelity_target,
                                            const ComplexityOptions& options = {});

}  // namespace ssrc
