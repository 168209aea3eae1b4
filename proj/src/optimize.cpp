#include "ssrc/optimize.hpp"

#include <cmath>
#include <limits>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "ssrc/error.hpp"

namespace ssrc {

namespace {

struct Context {
  const Objective* f;
  std::vector<double> scratch;
  std::size_t evaluations = 0;
};

double trampoline(const gsl_vector* x, void* params) {
  auto* ctx = static_cast<Context*>(params);
  for (std::size_t i = 0; i < ctx->scratch.size(); ++i) ctx->scratch[i] = gsl_vector_get(x, i);
  ++ctx->evaluations;
  const double value = (*ctx->f)(ctx->scratch);
  return std::isfinite(value) ? value : std::numeric_limits<double>::max();
}

struct Minimizer {
  gsl_multimin_fminimizer* state;
  explicit Minimizer(std::size_t n) : state(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n)) {
    if (!state) throw Error(ErrorCode::Internal, "failed to allocate simplex minimizer");
  }
  ~Minimizer() { gsl_multimin_fminimizer_free(state); }
  Minimizer(const Minimizer&) = delete;
  Minimizer& operator=(const Minimizer&) = delete;
};

struct Vector {
  gsl_vector* v;
  explicit Vector(std::size_t n) : v(gsl_vector_alloc(n)) {
    if (!v) throw Error(ErrorCode::Internal, "failed to allocate vector");
  }
  ~Vector() { gsl_vector_free(v); }
  Vector(const Vector&) = delete;
  Vector& operator=(const Vector&) = delete;
};

}  // namespace

MinimizeResult nelder_mead(const Objective& f, const std::vector<double>& x0, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cannot minimize over zero parameters");
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;

  Context ctx{&f, std::vector<double>(n), 0};
  gsl_multimin_function fn{&trampoline, n, &ctx};

  MinimizeResult result;
  result.x = x0;
  result.value = f(x0);
  ++ctx.evaluations;

  double step = options.initial_step;
  for (int round = 0; round <= options.polish_rounds; ++round) {
    Minimizer minimizer(n);
    Vector start(n), steps(n);
    for (std::size_t i = 0; i < n; ++i) {
      gsl_vector_set(start.v, i, result.x[i]);
      gsl_vector_set(steps.v, i, step);
    }
    if (gsl_multimin_fminimizer_set(minimizer.state, &fn, start.v, steps.v) != GSL_SUCCESS) {
      throw Error(ErrorCode::Internal, "failed to initialize simplex minimizer");
    }
    bool converged = false;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      ++result.iterations;
      if (gsl_multimin_fminimizer_iterate(minimizer.state) != GSL_SUCCESS) break;
      const double size = gsl_multimin_fminimizer_size(minimizer.state);
      if (gsl_multimin_test_size(size, options.size_tolerance) == GSL_SUCCESS) {
        converged = true;
        break;
      }
    }
    const double value = gsl_multimin_fminimizer_minimum(minimizer.state);
    if (value <= result.value) {
      result.value = value;
      const gsl_vector* best = gsl_multimin_fminimizer_x(minimizer.state);
      for (std::size_t i = 0; i < n; ++i) result.x[i] = gsl_vector_get(best, i);
    }
    result.converged = converged;
    step *= 0.1;
  }
  result.evaluations = ctx.evaluations;
  return result;
}

}  // namespace ssrc
