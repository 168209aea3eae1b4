#include "ssrc/ssrc.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "ssrc/config.hpp"
#include "ssrc/cvlimit.hpp"
#include "ssrc/error.hpp"
#include "ssrc/experiments.hpp"
#include "ssrc/log.hpp"
#include "ssrc/majorana.hpp"
#include "ssrc/serialization.hpp"
#include "ssrc/synthesis.hpp"

struct ssrc_basis {
  ssrc::BasisPtr ptr;
};
struct ssrc_state {
  ssrc::SSRCState value;
};
struct ssrc_operator {
  ssrc::SparseOperator value;
};

namespace {

thread_local std::string last_error;

ssrc_status fail(ssrc_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
ssrc_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return SSRC_OK;
  } catch (const ssrc::Error& e) {
    return fail(static_cast<ssrc_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SSRC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SSRC_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw ssrc::Error(ssrc::ErrorCode::InvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

ssrc::ModePair pair_of(int i, int j) { return ssrc::ModePair{i, j}; }

ssrc::Axis axis_of(ssrc_axis a) {
  switch (a) {
    case SSRC_AXIS_X:
      return ssrc::Axis::X;
    case SSRC_AXIS_Y:
      return ssrc::Axis::Y;
    case SSRC_AXIS_Z:
      return ssrc::Axis::Z;
    case SSRC_AXIS_PLUS:
      return ssrc::Axis::Plus;
    case SSRC_AXIS_MINUS:
      return ssrc::Axis::Minus;
  }
  throw ssrc::Error(ssrc::ErrorCode::InvalidArgument, "unknown axis");
}

ssrc::Occupation occupation_of(const ssrc_basis* basis, const int* occ) {
  return ssrc::Occupation(occ, occ + basis->ptr->num_modes());
}

}  // namespace

extern "C" {

const char* ssrc_version(void) { return SSRC_VERSION_STRING; }

const char* ssrc_status_name(ssrc_status status) {
  if (status == SSRC_OK) return "ok";
  if (status < SSRC_ERR_INVALID_ARGUMENT || status > SSRC_ERR_INTERNAL) return "unknown";
  return ssrc::error_code_name(static_cast<ssrc::ErrorCode>(status));
}

const char* ssrc_last_error(void) { return last_error.c_str(); }

void ssrc_set_log_level(ssrc_log_level level) {
  ssrc::log::set_level(static_cast<ssrc::log::Level>(level));
}

void ssrc_string_free(char* text) { std::free(text); }

ssrc_status ssrc_basis_create(int modes, int photons, size_t cap, ssrc_basis** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new ssrc_basis{ssrc::make_basis(modes, photons, cap == 0 ? ssrc::kDefaultDimensionCap : cap)};
  });
}

void ssrc_basis_free(ssrc_basis* basis) { delete basis; }

size_t ssrc_basis_dimension(const ssrc_basis* basis) { return basis ? basis->ptr->dimension() : 0; }
int ssrc_basis_modes(const ssrc_basis* basis) { return basis ? basis->ptr->num_modes() : 0; }
int ssrc_basis_photons(const ssrc_basis* basis) { return basis ? basis->ptr->total_photons() : 0; }

ssrc_status ssrc_basis_occupation(const ssrc_basis* basis, size_t index, int* occupation) {
  return guarded([&] {
    require(basis && occupation, "null argument");
    require(index < basis->ptr->dimension(), "index out of range");
    const ssrc::Occupation occ = basis->ptr->occupation(index);
    std::copy(occ.begin(), occ.end(), occupation);
  });
}

ssrc_status ssrc_basis_index(const ssrc_basis* basis, const int* occupation, size_t* index) {
  return guarded([&] {
    require(basis && occupation && index, "null argument");
    *index = basis->ptr->index_of(occupation_of(basis, occupation));
  });
}

ssrc_status ssrc_state_create(const ssrc_basis* basis, const double* re, const double* im, ssrc_state** out) {
  return guarded([&] {
    require(basis && re && out, "null argument");
    ssrc::CVector v(static_cast<Eigen::Index>(basis->ptr->dimension()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = ssrc::cplx(re[i], im ? im[i] : 0.0);
    *out = new ssrc_state{ssrc::SSRCState(basis->ptr, std::move(v))};
  });
}

ssrc_status ssrc_state_basis(const ssrc_basis* basis, const int* occupation, ssrc_state** out) {
  return guarded([&] {
    require(basis && occupation && out, "null argument");
    *out = new ssrc_state{ssrc::basis_state(basis->ptr, occupation_of(basis, occupation))};
  });
}

ssrc_status ssrc_state_random(const ssrc_basis* basis, uint64_t seed, ssrc_state** out) {
  return guarded([&] {
    require(basis && out, "null argument");
    ssrc::SplitMix64 rng(seed);
    *out = new ssrc_state{ssrc::random_state(basis->ptr, rng)};
  });
}

void ssrc_state_free(ssrc_state* state) { delete state; }

size_t ssrc_state_dimension(const ssrc_state* state) { return state ? state->value.dimension() : 0; }

ssrc_status ssrc_state_amplitudes(const ssrc_state* state, double* re, double* im) {
  return guarded([&] {
    require(state && re && im, "null argument");
    for (std::size_t i = 0; i < state->value.dimension(); ++i) {
      re[i] = state->value.amplitude(i).real();
      im[i] = state->value.amplitude(i).imag();
    }
  });
}

ssrc_status ssrc_state_to_json(const ssrc_state* state, char** json) {
  return guarded([&] {
    require(state && json, "null argument");
    *json = copy_string(ssrc::state_to_json(state->value).dump());
  });
}

ssrc_status ssrc_state_from_json(const char* json, ssrc_state** out) {
  return guarded([&] {
    require(json && out, "null argument");
    ssrc::Json j;
    try {
      j = ssrc::Json::parse(json);
    } catch (const ssrc::Json::exception& e) {
      throw ssrc::Error(ssrc::ErrorCode::InvalidArgument, e.what());
    }
    *out = new ssrc_state{ssrc::state_from_json(j)};
  });
}

ssrc_status ssrc_inner_product(const ssrc_state* x, const ssrc_state* y, double* re, double* im) {
  return guarded([&] {
    require(x && y && re && im, "null argument");
    const ssrc::cplx v = ssrc::inner_product(x->value, y->value);
    *re = v.real();
    *im = v.imag();
  });
}

ssrc_status ssrc_fidelity(const ssrc_state* x, const ssrc_state* y, double* out) {
  return guarded([&] {
    require(x && y && out, "null argument");
    *out = ssrc::fidelity(x->value, y->value);
  });
}

ssrc_status ssrc_j_operator(const ssrc_basis* basis, ssrc_axis axis, int mode_i, int mode_j, ssrc_operator** out) {
  return guarded([&] {
    require(basis && out, "null argument");
    *out = new ssrc_operator{ssrc::j_operator(basis->ptr, axis_of(axis), pair_of(mode_i, mode_j))};
  });
}

ssrc_status ssrc_rotation(const ssrc_basis* basis, double theta, double phi, int mode_i, int mode_j, ssrc_operator** out) {
  return guarded([&] {
    require(basis && out, "null argument");
    *out = new ssrc_operator{ssrc::rotation(basis->ptr, theta, phi, pair_of(mode_i, mode_j))};
  });
}

ssrc_status ssrc_exp_unitary(const ssrc_operator* generator, double chi, ssrc_operator** out) {
  return guarded([&] {
    require(generator && out, "null argument");
    *out = new ssrc_operator{ssrc::exp_unitary(generator->value, chi)};
  });
}

ssrc_status ssrc_sng_unitary(const ssrc_basis* basis, const double axis[3], double chi, int power, int mode_i, int mode_j,
                             ssrc_operator** out) {
  return guarded([&] {
    require(basis && axis && out, "null argument");
    *out = new ssrc_operator{
        ssrc::sng_unitary(basis->ptr, {axis[0], axis[1], axis[2]}, chi, power, pair_of(mode_i, mode_j))};
  });
}

ssrc_status ssrc_relative_phase(const ssrc_basis* basis, int mode_i, int mode_j, ssrc_operator** out) {
  return guarded([&] {
    require(basis && out, "null argument");
    *out = new ssrc_operator{ssrc::relative_phase_op(basis->ptr, pair_of(mode_i, mode_j))};
  });
}

void ssrc_operator_free(ssrc_operator* op) { delete op; }

ssrc_status ssrc_operator_apply(const ssrc_operator* op, const ssrc_state* state, ssrc_state** out) {
  return guarded([&] {
    require(op && state && out, "null argument");
    *out = new ssrc_state{op->value.apply(state->value)};
  });
}

ssrc_status ssrc_operator_unitarity_defect(const ssrc_operator* op, double* out) {
  return guarded([&] {
    require(op && out, "null argument");
    *out = op->value.unitarity_defect();
  });
}

ssrc_status ssrc_operator_to_json(const ssrc_operator* op, char** json) {
  return guarded([&] {
    require(op && json, "null argument");
    *json = copy_string(ssrc::operator_to_json(op->value).dump());
  });
}

ssrc_status ssrc_coherent_state(double alpha_re, double alpha_im, int photons, ssrc_state** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new ssrc_state{ssrc::coherent_from_rotation(ssrc::cplx(alpha_re, alpha_im), photons)};
  });
}

ssrc_status ssrc_squeezed_state(double r, double phi, int photons, ssrc_state** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new ssrc_state{ssrc::squeezed_from_rotation(r, phi, photons)};
  });
}

ssrc_status ssrc_state_to_majorana(const ssrc_state* state, double* theta, double* phi, double* condition) {
  return guarded([&] {
    require(state && theta && phi, "null argument");
    const ssrc::MajoranaSpec spec = ssrc::state_to_majorana(state->value);
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
      theta[i] = spec.points[i].theta;
      phi[i] = spec.points[i].phi;
    }
    if (condition) *condition = spec.condition_estimate;
  });
}

ssrc_status ssrc_majorana_to_state(int photons, const double* theta, const double* phi, ssrc_state** out) {
  return guarded([&] {
    require(out && (photons == 0 || (theta && phi)), "null argument");
    const ssrc::BasisPtr basis = ssrc::make_basis(2, photons);
    ssrc::MajoranaSpec spec;
    for (int i = 0; i < photons; ++i) spec.points.push_back({theta[i], phi[i]});
    *out = new ssrc_state{ssrc::majorana_to_state(spec, basis)};
  });
}

ssrc_status ssrc_synthesize(const ssrc_state* target, double small_angle, int correction_passes, int allow_prerotation,
                            uint64_t seed, char** plan_json, double* fidelity) {
  return guarded([&] {
    require(target != nullptr, "null target");
    ssrc::SynthesisOptions options;
    options.small_angle = small_angle;
    options.correction_passes = correction_passes;
    options.allow_prerotation = allow_prerotation != 0;
    options.seed = seed;
    const ssrc::SynthesisPlan plan = ssrc::plan_two_mode(target->value, options);
    const ssrc::ExecutionResult run = ssrc::execute_plan(plan, ssrc::synthesis_initial_state(plan.basis));
    if (fidelity) *fidelity = run.fidelity;
    if (plan_json) *plan_json = copy_string(ssrc::plan_to_json(plan).dump());
  });
}

ssrc_status ssrc_config_validate(const char* path, char** diagnostics) {
  return guarded([&] {
    require(path != nullptr, "null path");
    const ssrc::ConfigParse parsed = ssrc::load_config(path);
    std::string text;
    for (const std::string& v : parsed.violations) text += v + "\n";
    if (diagnostics) *diagnostics = copy_string(text);
    if (!parsed.ok()) {
      throw ssrc::Error(ssrc::ErrorCode::ConfigParse, std::to_string(parsed.violations.size()) + " violation(s)");
    }
  });
}

ssrc_status ssrc_config_run(const char* path, const char* out_dir, const uint64_t* seed, char** summary) {
  return guarded([&] {
    require(path != nullptr, "null path");
    const ssrc::ConfigParse parsed = ssrc::load_config(path);
    if (!parsed.ok()) {
      std::string text;
      for (const std::string& v : parsed.violations) text += "\n  " + v;
      throw ssrc::Error(ssrc::ErrorCode::ConfigParse, "invalid configuration:" + text);
    }
    ssrc::ExperimentConfig cfg = parsed.config;
    if (out_dir) cfg.output_directory = out_dir;
    if (seed) cfg.seed = *seed;
    const ssrc::RunArtifacts art = ssrc::run_and_write(cfg);
    if (summary) {
      std::string text = art.data_path + "\n" + art.meta_path + "\n";
      if (!art.report_path.empty()) text += art.report_path + "\n";
      *summary = copy_string(text);
    }
  });
}

}  // extern "C"
