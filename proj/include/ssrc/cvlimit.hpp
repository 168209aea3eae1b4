#pragma once

#include <string>
#include <vector>

#include "ssrc/hilbert.hpp"
#include "ssrc/schwinger.hpp"

namespace ssrc {

// Rotation of |N>_b that maps b^dag to (alpha/sqrt N) a^dag + sqrt(1 - |alpha|^2/N) b^dag.
// Amplitudes are evaluated in log space. Requires |alpha|^2 < N.
SSRCState coherent_from_rotation(cplx alpha, int N);

struct TruncatedSeries {
  CVector coefficients;  // renormalized on the window
  double tail_mass = 0.0;  // mass of the untruncated series beyond the window
};

// e^{-|alpha|^2/2} alpha^k / sqrt(k!), k <= n_max.
TruncatedSeries truncated_coherent_reference(cplx alpha, int n_max);

struct WindowFidelity {
  double fidelity = 0.0;
  double infidelity = 0.0;  // evaluated without cancellation
};

// Fidelity of a two-mode state (index = n_a) with a unit reference on the window
// n_a < reference.size().
WindowFidelity window_fidelity(const SSRCState& state, const CVector& reference);

WindowFidelity coherent_fidelity(cplx alpha, int N, int n_max);

// Amplitudes <m|_a <N-m|_b U |k>_a |N-k>_b for m <= n_max, with U from coherent_from_rotation.
CVector ssrc_displaced_fock_window(cplx alpha, int k, int N, int n_max);
// <m| D(alpha) |k> for m <= n_max.
CVector displaced_fock_window(cplx alpha, int k, int n_max);

struct DisplacementResult {
  double residual = 0.0;
  double ssrc_outside_mass = 0.0;
  double reference_outside_mass = 0.0;
};

// l2 distance between the two window-renormalized vectors. Throws WindowTooSmall if either
// side leaves more than 1e-6 of its mass outside the window.
DisplacementResult displacement_comparison(cplx alpha, int k, int N, int n_max);
double displacement_residual(cplx alpha, int k, int N, int n_max);

// State on (2 modes, 2N photons) proportional to (c^dag)^N (d^dag)^N |vac>.
SSRCState squeezed_from_rotation(double r, double phi, int N);

// log A from the finite-N sum, from the Gram expansion <vac| d^N c^N (c^dag)^N (d^dag)^N |vac>,
// and from the large-N asymptotic form.
double squeezed_log_normalization(double r, int N);
double squeezed_log_normalization_gram(double r, int N);
double squeezed_log_normalization_asymptotic(double r, int N);

// Squeezed-vacuum coefficients on n_a <= 2 n_max (odd entries zero).
TruncatedSeries truncated_squeezed_reference(double r, double phi, int n_max);

WindowFidelity squeezed_fidelity(double r, double phi, int N, int n_max);

// Q(N, phi) = (e^{-i phi} J- + e^{i phi} J+) / sqrt(2N) on a two-mode basis.
SparseOperator quadrature_operator(const BasisPtr& basis, double phi);

// max over the n_a <= n_max sector of |[Q(N,0), Q(N,pi/2)] - i|, evaluated from the matrices.
double commutator_residual(int N, int n_max);

struct UncertaintyRecord {
  double delta_jx = 0.0;
  double delta_jy = 0.0;
  double half_abs_jz = 0.0;
  double product = 0.0;
  bool satisfied = false;
};

UncertaintyRecord uncertainty_check(const SSRCState& state);

struct OverlapRecord {
  cplx exact{0.0, 0.0};        // closed form
  cplx state_route{0.0, 0.0};  // <coherent(beta)|coherent(alpha)>
  double route_gap = 0.0;
  double limit = 0.0;          // exp(-|alpha - beta|^2 / 2)
  double residual = 0.0;       // | |exact| - limit |
};

OverlapRecord overlap_asymptotics(cplx alpha, cplx beta, int N);
// Closed form (sqrt(1-|a|^2/N) sqrt(1-|b|^2/N) + a conj(b) / N)^N.
cplx overlap_closed_form(cplx alpha, cplx beta, int N);

struct PowerLawFit {
  double rate = 0.0;  // residual ~ N^{-rate}
  double intercept = 0.0;
  double r_squared = 0.0;
};

PowerLawFit fit_power_law(const std::vector<double>& N_list, const std::vector<double>& residuals);

struct ConvergenceReport {
  std::string parameter;
  std::string metric;
  std::vector<double> N_list;
  std::vector<double> exact;
  std::vector<double> limit;
  std::vector<double> residual;
  std::vector<double> ratio;
  PowerLawFit fit;
};

// exact (cos theta/2)^N vs exp(-N theta^2 / 8).
ConvergenceReport phase_locking_curve(double theta, const std::vector<double>& N_list);

}  // namespace ssrc
