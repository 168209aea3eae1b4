#ifndef SSRC_SSRC_H
#define SSRC_SSRC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(SSRC_BUILDING_LIBRARY)
#define SSRC_API __attribute__((visibility("default")))
#else
#define SSRC_API
#endif

/* Mirrors ssrc::ErrorCode. */
typedef enum ssrc_status {
  SSRC_OK = 0,
  SSRC_ERR_INVALID_ARGUMENT = 1,
  SSRC_ERR_DIMENSION_OVERFLOW = 2,
  SSRC_ERR_INVALID_OCCUPATION = 3,
  SSRC_ERR_BASIS_MISMATCH = 4,
  SSRC_ERR_INVALID_MODE = 5,
  SSRC_ERR_NON_HERMITIAN = 6,
  SSRC_ERR_DEGENERATE_NORMALIZATION = 7,
  SSRC_ERR_ZERO_LEADING_COEFFICIENT = 8,
  SSRC_ERR_TARGET_ORDER_EXCEEDS_MAX = 9,
  SSRC_ERR_AMPLITUDE_BOUND = 10,
  SSRC_ERR_WINDOW_TOO_SMALL = 11,
  SSRC_ERR_NON_ORTHOGONAL = 12,
  SSRC_ERR_NEAR_DEGENERATE = 13,
  SSRC_ERR_CONFIG_PARSE = 14,
  SSRC_ERR_IO = 15,
  SSRC_ERR_INTERNAL = 16
} ssrc_status;

typedef enum ssrc_axis { SSRC_AXIS_X = 0, SSRC_AXIS_Y, SSRC_AXIS_Z, SSRC_AXIS_PLUS, SSRC_AXIS_MINUS } ssrc_axis;

typedef enum ssrc_log_level {
  SSRC_LOG_DEBUG = 0,
  SSRC_LOG_INFO,
  SSRC_LOG_WARN,
  SSRC_LOG_ERROR,
  SSRC_LOG_OFF
} ssrc_log_level;

typedef struct ssrc_basis ssrc_basis;
typedef struct ssrc_state ssrc_state;
typedef struct ssrc_operator ssrc_operator;

SSRC_API const char* ssrc_version(void);
SSRC_API const char* ssrc_status_name(ssrc_status status);
/* Message of the last failed call on this thread; "" if none. */
SSRC_API const char* ssrc_last_error(void);
SSRC_API void ssrc_set_log_level(ssrc_log_level level);
/* Frees strings returned through char** out-parameters. */
SSRC_API void ssrc_string_free(char* text);

/* Bases. cap = 0 selects the default dimension cap (2^20). */
SSRC_API ssrc_status ssrc_basis_create(int modes, int photons, size_t cap, ssrc_basis** out);
SSRC_API void ssrc_basis_free(ssrc_basis* basis);
SSRC_API size_t ssrc_basis_dimension(const ssrc_basis* basis);
SSRC_API int ssrc_basis_modes(const ssrc_basis* basis);
SSRC_API int ssrc_basis_photons(const ssrc_basis* basis);
/* occupation must hold ssrc_basis_modes() entries. */
SSRC_API ssrc_status ssrc_basis_occupation(const ssrc_basis* basis, size_t index, int* occupation);
SSRC_API ssrc_status ssrc_basis_index(const ssrc_basis* basis, const int* occupation, size_t* index);

/* States. Amplitude arrays hold ssrc_basis_dimension() entries; input is normalized. */
SSRC_API ssrc_status ssrc_state_create(const ssrc_basis* basis, const double* re, const double* im, ssrc_state** out);
SSRC_API ssrc_status ssrc_state_basis(const ssrc_basis* basis, const int* occupation, ssrc_state** out);
SSRC_API ssrc_status ssrc_state_random(const ssrc_basis* basis, uint64_t seed, ssrc_state** out);
SSRC_API void ssrc_state_free(ssrc_state* state);
SSRC_API size_t ssrc_state_dimension(const ssrc_state* state);
SSRC_API ssrc_status ssrc_state_amplitudes(const ssrc_state* state, double* re, double* im);
SSRC_API ssrc_status ssrc_state_to_json(const ssrc_state* state, char** json);
SSRC_API ssrc_status ssrc_state_from_json(const char* json, ssrc_state** out);
/* <x|y>, conjugate-linear in x. */
SSRC_API ssrc_status ssrc_inner_product(const ssrc_state* x, const ssrc_state* y, double* re, double* im);
SSRC_API ssrc_status ssrc_fidelity(const ssrc_state* x, const ssrc_state* y, double* out);

/* Operators. mode_i, mode_j select the pair; (0, 1) is (a, b) on two modes. */
SSRC_API ssrc_status ssrc_j_operator(const ssrc_basis* basis, ssrc_axis axis, int mode_i, int mode_j, ssrc_operator** out);
SSRC_API ssrc_status ssrc_rotation(const ssrc_basis* basis, double theta, double phi, int mode_i, int mode_j,
                                   ssrc_operator** out);
/* exp(i chi G) for a Hermitian generator G. */
SSRC_API ssrc_status ssrc_exp_unitary(const ssrc_operator* generator, double chi, ssrc_operator** out);
SSRC_API ssrc_status ssrc_sng_unitary(const ssrc_basis* basis, const double axis[3], double chi, int power, int mode_i,
                                      int mode_j, ssrc_operator** out);
SSRC_API ssrc_status ssrc_relative_phase(const ssrc_basis* basis, int mode_i, int mode_j, ssrc_operator** out);
SSRC_API void ssrc_operator_free(ssrc_operator* op);
SSRC_API ssrc_status ssrc_operator_apply(const ssrc_operator* op, const ssrc_state* state, ssrc_state** out);
SSRC_API ssrc_status ssrc_operator_unitarity_defect(const ssrc_operator* op, double* out);
SSRC_API ssrc_status ssrc_operator_to_json(const ssrc_operator* op, char** json);

/* Continuous-variable constructions on two modes. */
SSRC_API ssrc_status ssrc_coherent_state(double alpha_re, double alpha_im, int photons, ssrc_state** out);
SSRC_API ssrc_status ssrc_squeezed_state(double r, double phi, int photons, ssrc_state** out);

/* Majorana points of a two-mode state: theta and phi hold N entries each. */
SSRC_API ssrc_status ssrc_state_to_majorana(const ssrc_state* state, double* theta, double* phi, double* condition);
SSRC_API ssrc_status ssrc_majorana_to_state(int photons, const double* theta, const double* phi, ssrc_state** out);

/* Plans and executes a two-mode synthesis; plan_json may be NULL. */
SSRC_API ssrc_status ssrc_synthesize(const ssrc_state* target, double small_angle, int correction_passes,
                                     int allow_prerotation, uint64_t seed, char** plan_json, double* fidelity);

/* Lists violations, one per line, in *diagnostics. Returns SSRC_ERR_CONFIG_PARSE if any. */
SSRC_API ssrc_status ssrc_config_validate(const char* path, char** diagnostics);
/* out_dir and seed may be NULL. *summary lists the written files, one per line. */
SSRC_API ssrc_status ssrc_config_run(const char* path, const char* out_dir, const uint64_t* seed, char** summary);

#ifdef __cplusplus
}
#endif

#endif
