#include "ssrc/cvlimit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ssrc/error.hpp"

namespace ssrc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lg(double x) { return std::lgamma(x); }

double log_binomial(double n, double k) { return lg(n + 1.0) - lg(k + 1.0) - lg(n - k + 1.0); }

// n * log(x) with 0 * log(0) = 0.
double log_pow(double x, int n) {
  if (n == 0) return 0.0;
  return x == 0.0 ? kNegInf : n * std::log(x);
}

cplx from_log(double log_magnitude, double phase) {
  if (log_magnitude == kNegInf) return 0.0;
  return std::polar(std::exp(log_magnitude), phase);
}

double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

void require_photons(int N, int minimum, const char* context) {
  if (N < minimum) {
    throw Error(ErrorCode::InvalidArgument, std::string(context) + ": photon number must be >= " + std::to_string(minimum));
  }
}

void require_amplitude(cplx alpha, int N, const char* context) {
  if (!(std::norm(alpha) < static_cast<double>(N)) && !(alpha == cplx(0.0) && N >= 0)) {
    std::ostringstream msg;
    msg << context << ": |alpha|^2 = " << std::norm(alpha) << " must be below N = " << N;
    throw Error(ErrorCode::AmplitudeBound, msg.str());
  }
}

// Renormalizes log-space amplitudes and returns them as a vector.
CVector normalized_from_logs(const std::vector<double>& logs, const std::vector<double>& phases) {
  double m = kNegInf;
  for (double x : logs) m = std::max(m, x);
  CVector v(static_cast<Eigen::Index>(logs.size()));
  for (std::size_t k = 0; k < logs.size(); ++k) v[static_cast<Eigen::Index>(k)] = from_log(logs[k] - m, phases[k]);
  return v / v.norm();
}

}  // namespace

SSRCState coherent_from_rotation(cplx alpha, int N) {
  require_photons(N, 0, "coherent_from_rotation");
  require_amplitude(alpha, N, "coherent_from_rotation");
  const BasisPtr basis = make_basis(2, N);
  CVector v = CVector::Zero(N + 1);
  if (alpha == cplx(0.0)) {
    v[0] = 1.0;
    return SSRCState(basis, std::move(v));
  }
  const double a = std::abs(alpha);
  const double log_a = std::log(a);
  const double log_gamma_factor = 0.5 * std::log1p(-std::norm(alpha) / N);
  const double arg = std::arg(alpha);
  // log of N!/((N-k)! N^k), accumulated as sum_i log1p(-i/N).
  double falling = 0.0;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) falling += std::log1p(-static_cast<double>(k - 1) / N);
    const double lm = 0.5 * (falling - lg(k + 1.0)) + k * log_a + (N - k) * log_gamma_factor;
    v[k] = from_log(lm, k * arg);
  }
  return SSRCState(basis, std::move(v));
}

TruncatedSeries truncated_coherent_reference(cplx alpha, int n_max) {
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 0");
  const double x = std::norm(alpha);
  TruncatedSeries out;
  std::vector<double> logs(static_cast<std::size_t>(n_max + 1));
  std::vector<double> phases(static_cast<std::size_t>(n_max + 1));
  for (int k = 0; k <= n_max; ++k) {
    logs[static_cast<std::size_t>(k)] = -0.5 * x + log_pow(std::abs(alpha), k) - 0.5 * lg(k + 1.0);
    phases[static_cast<std::size_t>(k)] = k * std::arg(alpha);
  }
  out.coefficients = normalized_from_logs(logs, phases);
  if (x > 0.0) {
    // Poisson tail, summed term by term.
    double tail = 0.0;
    for (long k = n_max + 1; k < n_max + 1 + 100000000L; ++k) {
      const double term = std::exp(-x + k * std::log(x) - lg(k + 1.0));
      tail += term;
      if (k > x && term <= 1e-18 * std::max(tail, 1e-300)) break;
    }
    out.tail_mass = tail;
  }
  return out;
}

WindowFidelity window_fidelity(const SSRCState& state, const CVector& reference) {
  if (state.basis().num_modes() != 2) throw Error(ErrorCode::InvalidArgument, "window fidelity needs a two-mode state");
  const auto L = reference.size();
  const auto D = static_cast<Eigen::Index>(state.dimension());
  cplx overlap = 0.0;
  for (Eigen::Index k = 0; k < std::min(L, D); ++k) overlap += std::conj(reference[k]) * state.amplitudes()[k];
  double infidelity = 0.0;
  for (Eigen::Index k = 0; k < L; ++k) {
    const cplx u = k < D ? state.amplitudes()[k] : cplx(0.0);
    infidelity += std::norm(u - overlap * reference[k]);
  }
  for (Eigen::Index k = L; k < D; ++k) infidelity += std::norm(state.amplitudes()[k]);
  return {std::norm(overlap), infidelity};
}

WindowFidelity coherent_fidelity(cplx alpha, int N, int n_max) {
  return window_fidelity(coherent_from_rotation(alpha, N), truncated_coherent_reference(alpha, n_max).coefficients);
}

CVector ssrc_displaced_fock_window(cplx alpha, int k, int N, int n_max) {
  require_photons(N, 1, "displacement");
  require_amplitude(alpha, N, "displacement");
  if (k < 0 || k > N) throw Error(ErrorCode::InvalidArgument, "k must lie in [0, N]");
  if (n_max < 0 || n_max > N) throw Error(ErrorCode::InvalidArgument, "n_max must lie in [0, N]");
  const double a = std::abs(alpha);
  const double arg = std::arg(alpha);
  const double log_gamma = 0.5 * std::log1p(-std::norm(alpha) / N);
  // sum_{i < count} log1p(-(start + i)/N); the powers of N cancel between the factors.
  auto shortfall = [&](int start, int count) {
    double s = 0.0;
    for (int i = 0; i < count; ++i) s += std::log1p(-static_cast<double>(start + i) / N);
    return s;
  };
  CVector out = CVector::Zero(n_max + 1);
  for (int m = 0; m <= n_max; ++m) {
    const double log_norm =
        0.5 * (lg(m + 1.0) - lg(k + 1.0)) + (m >= k ? -0.5 * shortfall(k, m - k) : 0.5 * shortfall(m, k - m));
    cplx sum = 0.0;
    for (int l = 0; l <= std::min(k, m); ++l) {
      const int j = m - l;
      if (j > N - k) continue;
      // C(k,l) C(N-k,j) gamma^{l+N-k-j} alpha^j (-conj alpha)^{k-l} / N^{(j+k-l)/2}
      const double lm = log_binomial(k, l) - lg(j + 1.0) + shortfall(k, j) + (l + N - k - j) * log_gamma +
                        log_pow(a, j + k - l) + log_norm;
      const double phase = j * arg + (k - l) * (kPi - arg);
      sum += from_log(lm, phase);
    }
    out[m] = sum;
  }
  return out;
}

CVector displaced_fock_window(cplx alpha, int k, int n_max) {
  if (k < 0 || n_max < 0) throw Error(ErrorCode::InvalidArgument, "k and n_max must be >= 0");
  const double a = std::abs(alpha);
  const double arg = std::arg(alpha);
  CVector out = CVector::Zero(n_max + 1);
  for (int m = 0; m <= n_max; ++m) {
    cplx sum = 0.0;
    for (int l = 0; l <= std::min(m, k); ++l) {
      const double lm = -0.5 * a * a + 0.5 * (lg(m + 1.0) + lg(k + 1.0)) - lg(l + 1.0) - lg(m - l + 1.0) -
                        lg(k - l + 1.0) + log_pow(a, m - l) + log_pow(a, k - l);
      const double phase = (m - l) * arg + (k - l) * (kPi - arg);
      sum += from_log(lm, phase);
    }
    out[m] = sum;
  }
  return out;
}

DisplacementResult displacement_comparison(cplx alpha, int k, int N, int n_max) {
  if (k > n_max) throw Error(ErrorCode::InvalidArgument, "k must not exceed n_max");
  const CVector u = ssrc_displaced_fock_window(alpha, k, N, n_max);
  const CVector v = displaced_fock_window(alpha, k, n_max);
  DisplacementResult result;
  result.ssrc_outside_mass = std::max(0.0, 1.0 - u.squaredNorm());
  result.reference_outside_mass = std::max(0.0, 1.0 - v.squaredNorm());
  if (result.ssrc_outside_mass > 1e-6 || result.reference_outside_mass > 1e-6) {
    std::ostringstream msg;
    msg << "mass outside the n_max = " << n_max << " window: SSRC " << result.ssrc_outside_mass << ", reference "
        << result.reference_outside_mass;
    throw Error(ErrorCode::WindowTooSmall, msg.str());
  }
  result.residual = (u / u.norm() - v / v.norm()).norm();
  return result;
}

double displacement_residual(cplx alpha, int k, int N, int n_max) {
  return displacement_comparison(alpha, k, N, n_max).residual;
}

SSRCState squeezed_from_rotation(double r, double phi, int N) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "squeezing r must be finite and >= 0");
  require_photons(N, 0, "squeezed_from_rotation");
  const BasisPtr basis = make_basis(2, 2 * N);
  const double t = std::tanh(r);
  std::vector<double> logs(static_cast<std::size_t>(2 * N + 1), kNegInf);
  std::vector<double> phases(static_cast<std::size_t>(2 * N + 1), 0.0);
  for (int k = 0; k <= N; ++k) {
    logs[static_cast<std::size_t>(2 * k)] =
        log_binomial(N, k) + log_pow(t, k) + 0.5 * (lg(2.0 * k + 1.0) + lg(2.0 * (N - k) + 1.0));
    phases[static_cast<std::size_t>(2 * k)] = k * (kPi + phi);
  }
  CVector v = normalized_from_logs(logs, phases);
  for (int n = 1; n <= 2 * N; n += 2) v[n] = 0.0;
  return SSRCState(basis, std::move(v));
}

double squeezed_log_normalization(double r, int N) {
  require_photons(N, 0, "squeezed normalization");
  const double log_prefactor = std::log1p(std::exp(-2.0 * r)) - std::log(2.0);  // log(e^{-r} cosh r)
  const double t = std::tanh(r);
  std::vector<double> terms;
  for (int k = 0; k <= N; ++k) {
    terms.push_back(log_pow(t, 2 * k) + 2.0 * lg(N + 1.0) + lg(2.0 * k + 1.0) + lg(2.0 * (N - k) + 1.0) -
                    2.0 * lg(k + 1.0) - 2.0 * lg(N - k + 1.0));
  }
  return 0.5 * (2.0 * N * log_prefactor + log_sum_exp(terms));
}

double squeezed_log_normalization_gram(double r, int N) {
  require_photons(N, 0, "squeezed normalization");
  std::vector<double> terms;
  for (int j = 0; j <= N; ++j) terms.push_back(2.0 * log_binomial(N, j) - 4.0 * r * j);
  return 0.5 * (2.0 * lg(N + 1.0) + log_sum_exp(terms));
}

double squeezed_log_normalization_asymptotic(double r, int N) {
  require_photons(N, 1, "squeezed normalization");
  const double log_prefactor = std::log1p(std::exp(-2.0 * r));  // log(2 e^{-r} cosh r)
  return N * log_prefactor + lg(N + 1.0) - 0.25 * std::log(kPi * N) + 0.5 * std::log(std::cosh(r));
}

TruncatedSeries truncated_squeezed_reference(double r, double phi, int n_max) {
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 0");
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "squeezing r must be finite and >= 0");
  const double t = std::tanh(r);
  const double log_cosh = std::log(std::cosh(r));
  auto log_weight = [&](long k) {
    // log of |coefficient|^2 at n_a = 2k
    return 2.0 * log_pow(t, static_cast<int>(k)) + lg(2.0 * k + 1.0) - 2.0 * k * std::log(2.0) - 2.0 * lg(k + 1.0) -
           log_cosh;
  };
  std::vector<double> logs(static_cast<std::size_t>(2 * n_max + 1), kNegInf);
  std::vector<double> phases(static_cast<std::size_t>(2 * n_max + 1), 0.0);
  for (int k = 0; k <= n_max; ++k) {
    logs[static_cast<std::size_t>(2 * k)] = 0.5 * log_weight(k);
    phases[static_cast<std::size_t>(2 * k)] = k * (kPi + phi);
  }
  TruncatedSeries out;
  out.coefficients = normalized_from_logs(logs, phases);
  for (int n = 1; n <= 2 * n_max; n += 2) out.coefficients[n] = 0.0;
  if (t > 0.0) {
    double tail = 0.0;
    for (long k = n_max + 1; k < n_max + 1 + 100000000L; ++k) {
      const double term = std::exp(log_weight(k));
      tail += term;
      if (term <= 1e-18 * std::max(tail, 1e-300)) break;
    }
    out.tail_mass = tail;
  }
  return out;
}

WindowFidelity squeezed_fidelity(double r, double phi, int N, int n_max) {
  return window_fidelity(squeezed_from_rotation(r, phi, N), truncated_squeezed_reference(r, phi, n_max).coefficients);
}

SparseOperator quadrature_operator(const BasisPtr& basis, double phi) {
  if (basis->num_modes() != 2) throw Error(ErrorCode::InvalidArgument, "quadrature operator needs a two-mode basis");
  const int N = basis->total_photons();
  require_photons(N, 1, "quadrature_operator");
  const SparseMatrix plus = j_operator(basis, Axis::Plus).matrix();
  const double scale = 1.0 / std::sqrt(2.0 * N);
  SparseMatrix q = plus * std::polar(scale, phi) + SparseMatrix(plus.adjoint()) * std::polar(scale, -phi);
  return SparseOperator(basis, std::move(q), true);
}

double commutator_residual(int N, int n_max) {
  require_photons(N, 1, "commutator_residual");
  if (n_max < 0 || n_max > N) throw Error(ErrorCode::InvalidArgument, "n_max must lie in [0, N]");
  const BasisPtr basis = make_basis(2, N);
  const SparseMatrix q0 = quadrature_operator(basis, 0.0).matrix();
  const SparseMatrix qp = quadrature_operator(basis, 0.5 * kPi).matrix();
  const SparseMatrix c = SparseMatrix(q0 * qp) - SparseMatrix(qp * q0);
  double worst = 0.0;
  for (std::ptrdiff_t col = 0; col <= n_max; ++col) {
    bool diagonal_seen = false;
    for (SparseMatrix::InnerIterator it(c, col); it; ++it) {
      if (it.row() > n_max) continue;
      const cplx expected = it.row() == col ? cplx(0.0, 1.0) : cplx(0.0);
      if (it.row() == col) diagonal_seen = true;
      worst = std::max(worst, std::abs(it.value() - expected));
    }
    if (!diagonal_seen) worst = std::max(worst, 1.0);
  }
  return worst;
}

UncertaintyRecord uncertainty_check(const SSRCState& state) {
  if (state.basis().num_modes() != 2) throw Error(ErrorCode::InvalidArgument, "uncertainty check needs a two-mode state");
  const BasisPtr& basis = state.basis_ptr();
  const CVector& psi = state.amplitudes();
  auto spread = [&](Axis axis, double* mean_out) {
    const CVector jpsi = j_operator(basis, axis).apply(psi);
    const double mean = psi.dot(jpsi).real();
    if (mean_out) *mean_out = mean;
    return (jpsi - mean * psi).norm();
  };
  UncertaintyRecord rec;
  double mean_z = 0.0;
  rec.delta_jx = spread(Axis::X, nullptr);
  rec.delta_jy = spread(Axis::Y, nullptr);
  spread(Axis::Z, &mean_z);
  rec.half_abs_jz = 0.5 * std::abs(mean_z);
  rec.product = rec.delta_jx * rec.delta_jy;
  rec.satisfied = rec.product >= rec.half_abs_jz - 1e-12 * std::max(1.0, rec.half_abs_jz);
  return rec;
}

cplx overlap_closed_form(cplx alpha, cplx beta, int N) {
  require_photons(N, 1, "overlap");
  require_amplitude(alpha, N, "overlap");
  require_amplitude(beta, N, "overlap");
  const double n = static_cast<double>(N);
  const cplx base = std::sqrt(1.0 - std::norm(alpha) / n) * std::sqrt(1.0 - std::norm(beta) / n) + alpha * std::conj(beta) / n;
  if (base == cplx(0.0)) return 0.0;
  return std::exp(n * std::log(base));
}

OverlapRecord overlap_asymptotics(cplx alpha, cplx beta, int N) {
  OverlapRecord rec;
  rec.exact = overlap_closed_form(alpha, beta, N);
  rec.state_route = inner_product(coherent_from_rotation(beta, N), coherent_from_rotation(alpha, N));
  rec.route_gap = std::abs(rec.exact - rec.state_route);
  rec.limit = std::exp(-0.5 * std::norm(alpha - beta));
  rec.residual = std::abs(std::abs(rec.exact) - rec.limit);
  return rec;
}

PowerLawFit fit_power_law(const std::vector<double>& N_list, const std::vector<double>& residuals) {
  if (N_list.size() != residuals.size()) throw Error(ErrorCode::InvalidArgument, "fit inputs differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] > 0.0 && residuals[i] > 0.0) {
      xs.push_back(std::log(N_list[i]));
      ys.push_back(std::log(residuals[i]));
    }
  }
  PowerLawFit fit;
  const std::size_t n = xs.size();
  if (n < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) return fit;
  const double slope = sxy / sxx;
  fit.rate = -slope;
  fit.intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (fit.intercept + slope * xs[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

ConvergenceReport phase_locking_curve(double theta, const std::vector<double>& N_list) {
  if (!(theta > 0.0 && theta < kPi)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, pi)");
  ConvergenceReport report;
  report.parameter = "theta";
  report.metric = "fock_overlap";
  for (double N : N_list) {
    if (!(N >= 1.0)) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    const double exact = std::exp(N * std::log(std::cos(0.5 * theta)));
    const double limit = std::exp(-N * theta * theta / 8.0);
    report.N_list.push_back(N);
    report.exact.push_back(exact);
    report.limit.push_back(limit);
    report.residual.push_back(std::abs(exact - limit));
    report.ratio.push_back(exact / limit);
  }
  report.fit = fit_power_law(report.N_list, report.residual);
  return report;
}

}  // namespace ssrc
