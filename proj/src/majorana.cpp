#include "ssrc/majorana.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ssrc/assignment.hpp"
#include "ssrc/error.hpp"
#include "ssrc/log.hpp"

namespace ssrc {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double phi) {
  double w = std::fmod(phi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  if (w >= 2.0 * kPi) w = 0.0;
  return w;
}

// log C(N, n)
double log_binomial(int N, int n) {
  return std::lgamma(N + 1.0) - std::lgamma(n + 1.0) - std::lgamma(N - n + 1.0);
}

void require_two_mode(const FockBasis& basis, const char* context) {
  if (basis.num_modes() != 2) {
    throw Error(ErrorCode::InvalidArgument, std::string(context) + " requires a two-mode basis");
  }
}

using Poly = std::vector<cplx>;  // coefficient of w^k at index k

cplx horner(const Poly& p, cplx w) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * w + *it;
  return acc;
}

cplx horner_derivative(const Poly& p, cplx w) {
  cplx acc = 0.0;
  for (std::size_t k = p.size() - 1; k >= 1; --k) {
    acc = acc * w + static_cast<double>(k) * p[k];
    if (k == 1) break;
  }
  return acc;
}

MajoranaPoint point_from_root(cplx w) {
  // Q(w) = prod (w + z_k) with z_k = tan(theta_k/2) e^{i phi_k}.
  const cplx z = -w;
  const double r = std::abs(z);
  MajoranaPoint p;
  p.theta = 2.0 * std::atan(r);
  p.phi = r == 0.0 ? 0.0 : wrap_phase(std::arg(z));
  return p;
}

Eigen::Vector3d to_sphere(cplx w) { return bloch_vector(point_from_root(w)); }

// Merges roots whose chordal separation is below `tol`; cluster mean is taken in w for
// clusters inside the unit disk and in 1/w outside.
std::vector<cplx> merge_roots(const std::vector<cplx>& roots, double tol) {
  const std::size_t n = roots.size();
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    std::vector<std::size_t> stack{s};
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      for (std::size_t t = 0; t < n; ++t) {
        if (label[t] >= 0) continue;
        if ((to_sphere(roots[cur]) - to_sphere(roots[t])).norm() < tol) {
          label[t] = next;
          stack.push_back(t);
        }
      }
    }
    ++next;
  }
  std::vector<cplx> merged(n);
  for (int c = 0; c < next; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t t = 0; t < n; ++t)
      if (label[t] == c) members.push_back(t);
    cplx mean_w = 0.0;
    double mean_abs = 0.0;
    for (auto t : members) {
      mean_w += roots[t];
      mean_abs += std::abs(roots[t]);
    }
    mean_w /= static_cast<double>(members.size());
    mean_abs /= static_cast<double>(members.size());
    cplx value = mean_w;
    if (mean_abs > 1.0) {
      bool finite = true;
      cplx mean_inv = 0.0;
      for (auto t : members) {
        if (roots[t] == cplx(0.0)) finite = false;
        else mean_inv += 1.0 / roots[t];
      }
      mean_inv /= static_cast<double>(members.size());
      if (finite && mean_inv != cplx(0.0)) value = 1.0 / mean_inv;
    }
    for (auto t : members) merged[t] = value;
  }
  return merged;
}

}  // namespace

Eigen::Vector3d bloch_vector(const MajoranaPoint& point) {
  return {std::sin(point.theta) * std::cos(point.phi), std::sin(point.theta) * std::sin(point.phi),
          std::cos(point.theta)};
}

SSRCState majorana_to_state(const MajoranaSpec& spec, const BasisPtr& basis) {
  require_two_mode(*basis, "majorana_to_state");
  if (spec.pair.i != 0 || spec.pair.j != 1) {
    throw Error(ErrorCode::InvalidMode, "majorana_to_state uses the (a, b) = (0, 1) mode pair");
  }
  const int N = basis->total_photons();
  if (static_cast<int>(spec.points.size()) != N) {
    throw Error(ErrorCode::InvalidArgument, "number of points " + std::to_string(spec.points.size()) +
                                                " does not match photon number " + std::to_string(N));
  }
  // p[n] multiplies (a^dag)^n (b^dag)^{N-n}.
  std::vector<cplx> p{1.0};
  for (const MajoranaPoint& point : spec.points) {
    const double c = std::cos(0.5 * point.theta);
    const cplx s = std::polar(std::sin(0.5 * point.theta), point.phi);
    std::vector<cplx> next(p.size() + 1, 0.0);
    for (std::size_t n = 0; n < p.size(); ++n) {
      next[n] += c * p[n];
      next[n + 1] += s * p[n];
    }
    p.swap(next);
  }
  // c_n = p_n sqrt(n!(N-n)!) = p_n sqrt(N!) / sqrt(C(N,n)); the common sqrt(N!) drops out.
  CVector amplitudes(N + 1);
  for (int n = 0; n <= N; ++n) amplitudes[n] = p[static_cast<std::size_t>(n)] * std::exp(-0.5 * log_binomial(N, n));
  if (!(amplitudes.norm() >= 1e-300)) {
    throw Error(ErrorCode::DegenerateNormalization, "Majorana product has vanishing norm");
  }
  return SSRCState(basis, std::move(amplitudes));
}

MajoranaSpec state_to_majorana(const SSRCState& state) {
  require_two_mode(state.basis(), "state_to_majorana");
  const int N = state.basis().total_photons();
  MajoranaSpec spec;
  if (N == 0) return spec;

  // q[n] = c_n sqrt(C(N, n)) is proportional to p_n; Q(w) = sum_n q_n w^{N-n}.
  std::vector<cplx> q(static_cast<std::size_t>(N + 1));
  double qmax = 0.0;
  for (int n = 0; n <= N; ++n) {
    q[static_cast<std::size_t>(n)] = state.amplitude(static_cast<std::size_t>(n)) * std::exp(0.5 * log_binomial(N, n));
    qmax = std::max(qmax, std::abs(q[static_cast<std::size_t>(n)]));
  }
  const double zero_tol = 1e-14 * qmax;
  int lead = 0;  // vanishing q_0, q_1, ...: degree deficit, points at theta = pi
  while (lead <= N && std::abs(q[static_cast<std::size_t>(lead)]) <= zero_tol) ++lead;
  int trail = 0;  // vanishing q_N, q_{N-1}, ...: roots at w = 0, points at theta = 0
  while (trail < N - lead && std::abs(q[static_cast<std::size_t>(N - trail)]) <= zero_tol) ++trail;

  // Reduced polynomial in ascending powers of w: coefficient of w^k is q_{N-trail-k}.
  const int degree = N - lead - trail;
  Poly poly(static_cast<std::size_t>(degree + 1));
  for (int k = 0; k <= degree; ++k) poly[static_cast<std::size_t>(k)] = q[static_cast<std::size_t>(N - trail - k)];

  std::vector<cplx> roots;
  if (degree > 0) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
    const cplx leading = poly[static_cast<std::size_t>(degree)];
    for (int r = 1; r < degree; ++r) companion(r, r - 1) = 1.0;
    for (int r = 0; r < degree; ++r) companion(r, degree - 1) = -poly[static_cast<std::size_t>(r)] / leading;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::Internal, "companion eigenvalue solve failed");
    for (int k = 0; k < degree; ++k) roots.push_back(solver.eigenvalues()[k]);
    // Newton polish, kept only when the residual drops.
    for (cplx& w : roots) {
      for (int it = 0; it < 3; ++it) {
        const cplx f = horner(poly, w);
        const cplx df = horner_derivative(poly, w);
        if (df == cplx(0.0)) break;
        const cplx candidate = w - f / df;
        if (std::abs(horner(poly, candidate)) < std::abs(f)) w = candidate;
        else break;
      }
    }
  }

  auto assemble = [&](const std::vector<cplx>& rs) {
    std::vector<MajoranaPoint> points;
    points.reserve(static_cast<std::size_t>(N));
    for (int k = 0; k < lead; ++k) points.push_back({kPi, 0.0});
    for (int k = 0; k < trail; ++k) points.push_back({0.0, 0.0});
    for (cplx w : rs) points.push_back(point_from_root(w));
    return points;
  };
  auto reconstruction_fidelity = [&](const std::vector<MajoranaPoint>& points) {
    MajoranaSpec trial;
    trial.points = points;
    return fidelity(majorana_to_state(trial, state.basis_ptr()), state);
  };

  std::vector<MajoranaPoint> best = assemble(roots);
  double best_fidelity = reconstruction_fidelity(best);
  if (roots.size() > 1) {
    for (double tol : {1e-6, 1e-4, 1e-3, 1e-2, 1e-1}) {
      const std::vector<MajoranaPoint> candidate = assemble(merge_roots(roots, tol));
      const double f = reconstruction_fidelity(candidate);
      if (f >= best_fidelity - 1e-15) {
        best = candidate;
        best_fidelity = std::max(best_fidelity, f);
      }
    }
  }
  spec.points = std::move(best);

  // Root condition estimate sum_k |a_k| |w|^k / (|w| |Q'(w)|).
  double kappa = 0.0;
  for (cplx w : roots) {
    double num = 0.0;
    double pw = 1.0;
    for (const cplx& a : poly) {
      num += std::abs(a) * pw;
      pw *= std::abs(w);
    }
    const double den = std::abs(w) * std::abs(horner_derivative(poly, w));
    const double k = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
    if (std::abs(w) > 0.0) kappa = std::max(kappa, k);
  }
  spec.condition_estimate = kappa;
  spec.ill_conditioned = kappa > kIllConditionedThreshold;
  if (spec.ill_conditioned) {
    std::ostringstream msg;
    msg << "state_to_majorana: ill-conditioned roots (condition estimate " << kappa << ")";
    log::warn(msg.str());
  }
  return spec;
}

std::vector<MajoranaPoint> transform_points(const std::vector<MajoranaPoint>& points, const Eigen::Matrix2cd& u) {
  std::vector<MajoranaPoint> out;
  out.reserve(points.size());
  for (const MajoranaPoint& p : points) {
    const Eigen::Vector2cd v(std::cos(0.5 * p.theta), std::polar(std::sin(0.5 * p.theta), p.phi));
    const Eigen::Vector2cd w = u * v;
    MajoranaPoint q;
    q.theta = 2.0 * std::atan2(std::abs(w[1]), std::abs(w[0]));
    q.phi = (std::abs(w[1]) == 0.0 || std::abs(w[0]) == 0.0) ? 0.0 : wrap_phase(std::arg(w[1]) - std::arg(w[0]));
    out.push_back(q);
  }
  return out;
}

Eigen::Matrix2cd single_particle_rotation(double theta, double phi) {
  return rotation(make_basis(2, 1), theta, phi).dense();
}

PointMatch match_points(const std::vector<MajoranaPoint>& a, const std::vector<MajoranaPoint>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "point multisets differ in size");
  const auto n = static_cast<Eigen::Index>(a.size());
  PointMatch match;
  if (n == 0) return match;
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      cost(r, c) = (bloch_vector(a[static_cast<std::size_t>(r)]) - bloch_vector(b[static_cast<std::size_t>(c)])).squaredNorm();
    }
  }
  match.assignment = solve_assignment(cost);
  double sum = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const double d2 = cost(r, match.assignment[static_cast<std::size_t>(r)]);
    match.max_distance = std::max(match.max_distance, std::sqrt(d2));
    sum += d2;
  }
  match.rms_distance = std::sqrt(sum / static_cast<double>(n));
  return match;
}

}  // namespace ssrc
