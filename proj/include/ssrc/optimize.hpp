#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ssrc {

struct NelderMeadOptions {
  std::size_t max_iterations = 4000;
  double initial_step = 0.2;
  // Stop when the simplex characteristic size falls below this.
  double size_tolerance = 1e-11;
  // Number of restarts from the best vertex with a fresh simplex.
  int polish_rounds = 2;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Derivative-free simplex descent (GSL nmsimplex2).
MinimizeResult nelder_mead(const Objective& f, const std::vector<double>& x0, const NelderMeadOptions& options = {});

}  // namespace ssrc
