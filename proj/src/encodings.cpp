#include "ssrc/encodings.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ssrc/cvlimit.hpp"
#include "ssrc/error.hpp"
#include "ssrc/optimize.hpp"

namespace ssrc {

namespace {

constexpr double kPi = std::numbers::pi;

void require_unitary(const SparseOperator& u, const char* name) {
  const double defect = u.unitarity_defect();
  if (defect > 1e-8) {
    std::ostringstream msg;
    msg << name << " is not unitary (defect " << defect << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

Eigen::MatrixXcd code_matrix(const Encoding& encoding) {
  const auto dim = static_cast<Eigen::Index>(encoding.basis->dimension());
  Eigen::MatrixXcd c(dim, static_cast<Eigen::Index>(encoding.code_states.size()));
  for (std::size_t j = 0; j < encoding.code_states.size(); ++j) c.col(static_cast<Eigen::Index>(j)) = encoding.code_states[j].amplitudes();
  return c;
}

// Fast evaluation of the SG-manifold gate error on a two-mode encoding.
class SgEvaluator {
 public:
  SgEvaluator(const Encoding& encoding, const Eigen::MatrixXcd& target)
      : target_conj_(target.conjugate()), codes_(code_matrix(encoding)) {
    if (encoding.basis->num_modes() != 2) throw Error(ErrorCode::InvalidArgument, "SG search needs a two-mode encoding");
    if (target.rows() != codes_.cols() || target.cols() != codes_.cols()) {
      throw Error(ErrorCode::InvalidArgument, "target gate dimension does not match the code dimension");
    }
    N_ = encoding.basis->total_photons();
    const Eigen::MatrixXcd jy = j_operator(encoding.basis, Axis::Y).dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(jy);
    vecs_ = solver.eigenvectors();
    vals_ = solver.eigenvalues();
  }

  int photons() const { return N_; }

  // R^dag |code_j> for R = e^{i phi Jz} e^{i theta Jy}.
  Eigen::MatrixXcd pulled_back(const Eigen::MatrixXcd& dtheta, double phi) const {
    Eigen::MatrixXcd w = codes_;
    for (Eigen::Index n = 0; n <= N_; ++n) w.row(n) *= std::polar(1.0, -phi * (n - 0.5 * N_));
    return dtheta * w;
  }

  Eigen::MatrixXcd d_theta(double theta) const {
    Eigen::VectorXcd ph(vals_.size());
    for (Eigen::Index k = 0; k < vals_.size(); ++k) ph[k] = std::polar(1.0, -theta * vals_[k]);
    return vecs_ * ph.asDiagonal() * vecs_.adjoint();
  }

  // s_n with tr(G^dag A(eta)) = sum_n s_n e^{i eta (n - N/2)}.
  Eigen::VectorXcd weights(const Eigen::MatrixXcd& v) const {
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(N_ + 1);
    const auto d = v.cols();
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        const cplx g = target_conj_(i, j);
        if (g == cplx(0.0)) continue;
        s += g * (v.col(i).conjugate().cwiseProduct(v.col(j)));
      }
    return s;
  }

  double error(const std::vector<double>& p) const {
    const Eigen::MatrixXcd v = pulled_back(d_theta(p[0]), p[1]);
    const Eigen::VectorXcd s = weights(v);
    cplx f = 0.0;
    for (Eigen::Index n = 0; n <= N_; ++n) f += s[n] * std::polar(1.0, p[2] * static_cast<double>(n));
    return std::max(0.0, 1.0 - std::abs(f) / static_cast<double>(codes_.cols()));
  }

  double dimension() const { return static_cast<double>(codes_.cols()); }

 private:
  Eigen::MatrixXcd target_conj_;
  Eigen::MatrixXcd codes_;
  Eigen::MatrixXcd vecs_;
  Eigen::VectorXd vals_;
  int N_ = 0;
};

std::vector<double> grid_axis(double hi, double step) {
  std::vector<double> axis;
  const auto count = static_cast<long>(std::floor(hi / step + 1e-9));
  for (long i = 0; i <= count; ++i) axis.push_back(static_cast<double>(i) * step);
  if (hi - axis.back() > 1e-12) axis.push_back(hi);
  return axis;
}

std::vector<double> uniform_start(SplitMix64& rng, std::size_t n, double hi) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(0.0, hi);
  return x;
}

cplx permanent(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  // Ryser's formula.
  cplx total = 0.0;
  const unsigned long subsets = 1UL << n;
  for (unsigned long mask = 1; mask < subsets; ++mask) {
    cplx prod = 1.0;
    for (int r = 0; r < n; ++r) {
      cplx row_sum = 0.0;
      for (int c = 0; c < n; ++c)
        if (mask & (1UL << c)) row_sum += m(r, c);
      prod *= row_sum;
    }
    const int bits = __builtin_popcountl(mask);
    total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
  }
  return total;
}

Eigen::Matrix4cd unitary_from_hermitian(const std::vector<double>& p) {
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  int k = 4;
  for (int r = 0; r < 4; ++r) h(r, r) = p[static_cast<std::size_t>(r)];
  for (int r = 0; r < 4; ++r)
    for (int c = r + 1; c < 4; ++c) {
      h(r, c) = cplx(p[static_cast<std::size_t>(k)], p[static_cast<std::size_t>(k + 6)]);
      h(c, r) = std::conj(h(r, c));
      ++k;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h);
  Eigen::Vector4cd ph;
  for (int i = 0; i < 4; ++i) ph[i] = std::polar(1.0, solver.eigenvalues()[i]);
  return solver.eigenvectors() * ph.asDiagonal() * solver.eigenvectors().adjoint();
}

std::vector<std::size_t> code_indices(const Encoding& encoding) {
  std::vector<std::size_t> idx;
  for (const SSRCState& s : encoding.code_states) {
    Eigen::Index at = 0;
    const double peak = s.amplitudes().cwiseAbs().maxCoeff(&at);
    if (std::abs(peak - 1.0) > 1e-14) {
      throw Error(ErrorCode::InvalidArgument, "permanent lifting needs Fock-type code states");
    }
    idx.push_back(static_cast<std::size_t>(at));
  }
  return idx;
}

template <typename F>
GateSearchResult multistart(const F& objective, const std::vector<std::vector<double>>& starts, const Eigen::MatrixXcd& target,
                            const SearchOptions& options, double initial_step) {
  GateSearchResult result;
  result.target = target;
  result.seed = options.seed;
  result.restarts = static_cast<int>(starts.size());
  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.initial_step = initial_step;
  for (const auto& x0 : starts) {
    const MinimizeResult r = nelder_mead(objective, x0, nm);
    result.iterations += r.iterations;
    result.evaluations += r.evaluations;
    if (result.best_parameters.empty() || r.value < result.best_error) {
      result.best_error = r.value;
      result.best_parameters = r.x;
    }
  }
  return result;
}

}  // namespace

Encoding make_encoding(const SparseOperator& u0, const SparseOperator& u1, std::string label) {
  require_same_basis(u0.basis(), u1.basis(), "make_encoding");
  if (u0.basis().num_modes() != 2) throw Error(ErrorCode::InvalidArgument, "make_encoding needs a two-mode basis");
  require_unitary(u0, "U0");
  require_unitary(u1, "U1");
  const BasisPtr& basis = u0.basis_ptr();
  const int N = basis->total_photons();
  const SSRCState zero = u0.apply(basis_state(basis, {0, N}));
  const SSRCState one = u1.apply(basis_state(basis, {N, 0}));
  const double overlap = std::abs(inner_product(zero, one));
  if (overlap > 1e-10) {
    std::ostringstream msg;
    msg << "code states overlap " << overlap;
    throw Error(ErrorCode::NonOrthogonal, msg.str());
  }
  Encoding enc{basis, {zero, one}, u0, u1, std::move(label), overlap, N};
  return enc;
}

Encoding fock_encoding(int N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "encodings need N >= 1");
  const BasisPtr basis = make_basis(2, N);
  const SparseOperator eye = identity_operator(basis);
  return make_encoding(eye, eye, N == 1 ? "dual-rail" : "fock");
}

Encoding coherent_like_encoding(cplx alpha, int N) {
  const SSRCState raw0 = coherent_from_rotation(-alpha, N);
  const SSRCState raw1 = coherent_from_rotation(alpha, N);
  const cplx s = inner_product(raw0, raw1);
  if (std::abs(s) > 1.0 - 1e-6) {
    std::ostringstream msg;
    msg << "raw coherent-like states overlap " << std::abs(s);
    throw Error(ErrorCode::NearDegenerate, msg.str());
  }
  Eigen::Matrix2cd gram;
  gram << 1.0, s, std::conj(s), 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(gram);
  const Eigen::Vector2d inv_sqrt = solver.eigenvalues().cwiseSqrt().cwiseInverse();
  const Eigen::Matrix2cd transform = solver.eigenvectors() * inv_sqrt.cast<cplx>().asDiagonal() * solver.eigenvectors().adjoint();
  const CVector c0 = raw0.amplitudes() * transform(0, 0) + raw1.amplitudes() * transform(1, 0);
  const CVector c1 = raw0.amplitudes() * transform(0, 1) + raw1.amplitudes() * transform(1, 1);
  const BasisPtr& basis = raw0.basis_ptr();
  Encoding enc{basis, {SSRCState(basis, c0), SSRCState(basis, c1)}, std::nullopt, std::nullopt, "coherent-like",
               std::abs(s), N};
  return enc;
}

Encoding two_qubit_fock_encoding(int N, std::size_t dimension_cap) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "encodings need N >= 1");
  const BasisPtr basis = make_basis(4, 2 * N, dimension_cap);
  std::vector<SSRCState> states;
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      states.push_back(basis_state(basis, {q1 ? N : 0, q1 ? 0 : N, q2 ? N : 0, q2 ? 0 : N}));
  Encoding enc{basis, std::move(states), std::nullopt, std::nullopt, N == 1 ? "dual-rail-pair" : "fock-pair", 0.0, N};
  return enc;
}

LogicalAction logical_action_from_images(const Eigen::MatrixXcd& images, const Encoding& encoding) {
  const Eigen::MatrixXcd codes = code_matrix(encoding);
  LogicalAction out;
  out.matrix = codes.adjoint() * images;
  out.leakage = std::max(0.0, 1.0 - out.matrix.squaredNorm() / static_cast<double>(codes.cols()));
  return out;
}

LogicalAction logical_gate_matrix(const SparseOperator& u, const Encoding& encoding) {
  require_same_basis(u.basis(), *encoding.basis, "logical_gate_matrix");
  const Eigen::MatrixXcd codes = code_matrix(encoding);
  const Eigen::MatrixXcd images = u.matrix() * codes;
  return logical_action_from_images(images, encoding);
}

double gate_error(const Eigen::MatrixXcd& logical, const Eigen::MatrixXcd& target) {
  if (logical.rows() != target.rows() || logical.cols() != target.cols()) {
    throw Error(ErrorCode::InvalidArgument, "logical and target matrices differ in shape");
  }
  const double d = static_cast<double>(target.rows());
  return std::max(0.0, 1.0 - std::abs((target.adjoint() * logical).trace()) / d);
}

double gate_error(const SparseOperator& u, const Eigen::MatrixXcd& target, const Encoding& encoding) {
  return gate_error(logical_gate_matrix(u, encoding).matrix, target);
}

namespace gates {

Eigen::MatrixXcd identity(int d) { return Eigen::MatrixXcd::Identity(d, d); }

Eigen::MatrixXcd pauli_x() {
  Eigen::MatrixXcd m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Eigen::MatrixXcd hadamard() {
  Eigen::MatrixXcd m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

Eigen::MatrixXcd t_gate() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, kPi / 4.0);
  return m;
}

Eigen::MatrixXcd ry(double theta) {
  Eigen::MatrixXcd m(2, 2);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  m << c, -s, s, c;
  return m;
}

Eigen::MatrixXcd cnot() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return m;
}

Eigen::MatrixXcd by_name(const std::string& name) {
  if (name == "identity") return identity(2);
  if (name == "identity2") return identity(4);
  if (name == "x") return pauli_x();
  if (name == "hadamard") return hadamard();
  if (name == "t") return t_gate();
  if (name == "t-hadamard") return t_gate() * hadamard();
  if (name == "cnot") return cnot();
  if (name.rfind("ry:", 0) == 0) {
    std::size_t used = 0;
    const std::string arg = name.substr(3);
    double theta = 0.0;
    try {
      theta = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size() || !std::isfinite(theta)) {
      throw Error(ErrorCode::InvalidArgument, "bad rotation angle in gate name '" + name + "'");
    }
    return ry(theta);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown gate '" + name + "'");
}

}  // namespace gates

SparseOperator sg_manifold_unitary(const BasisPtr& basis, double theta, double phi, double eta) {
  const SparseOperator r = rotation(basis, theta, phi);
  const SparseOperator d = exp_unitary(j_operator(basis, Axis::Z), eta);
  return r * d * r.adjoint();
}

GateSearchResult sg_gate_search(const Eigen::MatrixXcd& target, const Encoding& encoding, const SearchOptions& options) {
  if (options.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  const SgEvaluator eval(encoding, target);
  auto objective = [&](const std::vector<double>& p) { return eval.error(p); };

  // Coarse grid seeds the first restart.
  const int g = std::max(2, options.coarse_grid);
  std::vector<double> best_start{0.0, 0.0, 0.0};
  double best_value = 2.0;
  for (int a = 0; a < g; ++a) {
    const double theta = kPi * a / (g - 1);
    for (int b = 0; b < 2 * g; ++b) {
      const double phi = 2.0 * kPi * b / (2 * g);
      for (int c = 0; c < 2 * g; ++c) {
        const std::vector<double> p{theta, phi, 2.0 * kPi * c / (2 * g)};
        const double v = eval.error(p);
        if (v < best_value) {
          best_value = v;
          best_start = p;
        }
      }
    }
  }
  std::vector<std::vector<double>> starts{best_start};
  SplitMix64 rng(options.seed);
  for (int k = 1; k < options.restarts; ++k) {
    std::vector<double> x{rng.uniform(0.0, kPi), rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi)};
    starts.push_back(std::move(x));
  }
  GateSearchResult result = multistart(objective, starts, target, options, 0.3);
  const SparseOperator u =
      sg_manifold_unitary(encoding.basis, result.best_parameters[0], result.best_parameters[1], result.best_parameters[2]);
  const LogicalAction action = logical_gate_matrix(u, encoding);
  result.best_error = gate_error(action.matrix, target);
  result.leakage = action.leakage;
  return result;
}

GridFloor sg_grid_floor(const Eigen::MatrixXcd& target, const Encoding& encoding, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
  const SgEvaluator eval(encoding, target);
  const int N = eval.photons();
  const std::vector<double> thetas = grid_axis(kPi, step);
  const std::vector<double> phis = grid_axis(2.0 * kPi, step);
  const std::vector<double> etas = grid_axis(2.0 * kPi, step);
  Eigen::MatrixXcd powers(static_cast<Eigen::Index>(etas.size()), N + 1);
  for (std::size_t e = 0; e < etas.size(); ++e)
    for (int n = 0; n <= N; ++n) powers(static_cast<Eigen::Index>(e), n) = std::polar(1.0, etas[e] * n);

  GridFloor floor;
  floor.step = step;
  double best = 2.0;
  std::vector<double> arg{0.0, 0.0, 0.0};
  for (double theta : thetas) {
    const Eigen::MatrixXcd dt = eval.d_theta(theta);
    for (double phi : phis) {
      const Eigen::VectorXcd s = eval.weights(eval.pulled_back(dt, phi));
      const Eigen::VectorXcd f = powers * s;
      Eigen::Index at = 0;
      const double peak = f.cwiseAbs().maxCoeff(&at);
      const double value = std::max(0.0, 1.0 - peak / eval.dimension());
      if (value < best) {
        best = value;
        arg = {theta, phi, etas[static_cast<std::size_t>(at)]};
      }
    }
  }
  floor.points = thetas.size() * phis.size() * etas.size();
  floor.grid_min = best;
  floor.lipschitz_bound = best - 1.25 * N * step;

  NelderMeadOptions nm;
  nm.initial_step = step;
  const MinimizeResult polished = nelder_mead([&](const std::vector<double>& p) { return eval.error(p); }, arg, nm);
  floor.polished_min = std::min(best, polished.value);
  floor.argmin = polished.value < best ? polished.x : arg;
  return floor;
}

PassiveMesh::PassiveMesh(BasisPtr basis) : basis_(std::move(basis)) {
  if (basis_->num_modes() != 4) throw Error(ErrorCode::InvalidArgument, "passive mesh needs four modes");
  for (ModePair pair : {ModePair{0, 1}, ModePair{2, 3}, ModePair{1, 2}}) {
    mixers_.emplace_back(j_operator(basis_, Axis::Y, pair));
  }
  for (int m = 0; m < 4; ++m) {
    Eigen::VectorXd n(static_cast<Eigen::Index>(basis_->dimension()));
    for (std::size_t s = 0; s < basis_->dimension(); ++s) n[static_cast<Eigen::Index>(s)] = basis_->occupation_at(s, m);
    numbers_.push_back(std::move(n));
  }
}

Eigen::MatrixXcd PassiveMesh::apply(const std::vector<double>& params, const Eigen::MatrixXcd& columns) const {
  if (params.size() != static_cast<std::size_t>(kParameters)) throw Error(ErrorCode::InvalidArgument, "mesh needs 16 parameters");
  static constexpr int kMixer[6] = {0, 1, 2, 0, 1, 2};
  static constexpr int kPhaseMode[6] = {0, 2, 1, 0, 2, 1};
  Eigen::MatrixXcd v = columns;
  auto phase = [&](int mode, double angle) {
    const Eigen::VectorXd& n = numbers_[static_cast<std::size_t>(mode)];
    for (Eigen::Index s = 0; s < v.rows(); ++s) v.row(s) *= std::polar(1.0, angle * n[s]);
  };
  for (int b = 0; b < 6; ++b) {
    phase(kPhaseMode[b], params[static_cast<std::size_t>(2 * b + 1)]);
    v = mixers_[static_cast<std::size_t>(kMixer[b])].apply(params[static_cast<std::size_t>(2 * b)], v);
  }
  for (int m = 0; m < 4; ++m) phase(m, params[static_cast<std::size_t>(12 + m)]);
  return v;
}

Eigen::Matrix4cd PassiveMesh::single_particle(const std::vector<double>& params) {
  const BasisPtr basis = make_basis(4, 1);
  const PassiveMesh mesh(basis);
  std::vector<std::size_t> index_of_mode(4);
  for (int m = 0; m < 4; ++m) {
    Occupation occ(4, 0);
    occ[static_cast<std::size_t>(m)] = 1;
    index_of_mode[static_cast<std::size_t>(m)] = basis->index_of(occ);
  }
  const Eigen::MatrixXcd images = mesh.apply(params, Eigen::MatrixXcd::Identity(4, 4));
  Eigen::Matrix4cd u;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      u(r, c) = images(static_cast<Eigen::Index>(index_of_mode[static_cast<std::size_t>(r)]),
                       static_cast<Eigen::Index>(index_of_mode[static_cast<std::size_t>(c)]));
  return u;
}

Eigen::MatrixXcd lift_linear_optics(const Eigen::MatrixXcd& u, const FockBasis& basis, const std::vector<std::size_t>& columns) {
  const int K = basis.num_modes();
  if (u.rows() != K || u.cols() != K) throw Error(ErrorCode::InvalidArgument, "single-particle matrix size must equal mode count");
  const int P = basis.total_photons();
  auto modes_of = [&](std::size_t index) {
    std::vector<int> modes;
    for (int m = 0; m < K; ++m)
      for (int c = 0; c < basis.occupation_at(index, m); ++c) modes.push_back(m);
    return modes;
  };
  auto log_fact = [&](std::size_t index) {
    double s = 0.0;
    for (int m = 0; m < K; ++m) s += std::lgamma(basis.occupation_at(index, m) + 1.0);
    return s;
  };
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(basis.dimension()), static_cast<Eigen::Index>(columns.size()));
  Eigen::MatrixXcd sub(P, P);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const std::vector<int> in = modes_of(columns[c]);
    const double lc = log_fact(columns[c]);
    for (std::size_t r = 0; r < basis.dimension(); ++r) {
      const std::vector<int> outm = modes_of(r);
      for (int i = 0; i < P; ++i)
        for (int j = 0; j < P; ++j) sub(i, j) = u(outm[static_cast<std::size_t>(i)], in[static_cast<std::size_t>(j)]);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = permanent(sub) * std::exp(-0.5 * (lc + log_fact(r)));
    }
  }
  return out;
}

CnotSearchResult cnot_search(const Encoding& pair, const Eigen::MatrixXcd& target, const SearchOptions& options) {
  if (pair.basis->num_modes() != 4 || pair.code_states.size() != 4) {
    throw Error(ErrorCode::InvalidArgument, "cnot_search needs a four-mode two-qubit encoding");
  }
  if (target.rows() != 4 || target.cols() != 4) throw Error(ErrorCode::InvalidArgument, "two-qubit target must be 4x4");
  if (options.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  const PassiveMesh mesh(pair.basis);
  const Eigen::MatrixXcd codes = code_matrix(pair);
  const std::vector<std::size_t> idx = code_indices(pair);

  auto mesh_error = [&](const std::vector<double>& p) {
    return gate_error(logical_action_from_images(mesh.apply(p, codes), pair).matrix, target);
  };
  auto exp_error = [&](const std::vector<double>& p) {
    const Eigen::MatrixXcd images = lift_linear_optics(unitary_from_hermitian(p), *pair.basis, idx);
    return gate_error(logical_action_from_images(images, pair).matrix, target);
  };

  SplitMix64 rng(options.seed);
  std::vector<std::vector<double>> mesh_starts{std::vector<double>(PassiveMesh::kParameters, 0.0)};
  for (int k = 1; k < options.restarts; ++k) mesh_starts.push_back(uniform_start(rng, PassiveMesh::kParameters, 2.0 * kPi));
  std::vector<std::vector<double>> exp_starts;
  for (int k = 0; k < options.restarts; ++k) {
    std::vector<double> x(16);
    for (auto& v : x) v = 2.0 * rng.normal();
    exp_starts.push_back(std::move(x));
  }
  CnotSearchResult out;
  out.mesh = multistart(mesh_error, mesh_starts, target, options, 0.5);
  out.mesh.leakage = logical_action_from_images(mesh.apply(out.mesh.best_parameters, codes), pair).leakage;
  out.exponential = multistart(exp_error, exp_starts, target, options, 0.5);
  out.exponential.leakage =
      logical_action_from_images(lift_linear_optics(unitary_from_hermitian(out.exponential.best_parameters), *pair.basis, idx), pair)
          .leakage;
  out.floor = std::min(out.mesh.best_error, out.exponential.best_error);
  return out;
}

SSRCState prepare_register(int qubits, int N, std::size_t dimension_cap) {
  if (qubits < 1 || N < 0) throw Error(ErrorCode::InvalidArgument, "prepare_register needs qubits >= 1 and N >= 0");
  const int modes = 2 * qubits;
  const BasisPtr basis = make_basis(modes, qubits * N, dimension_cap);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->dimension()));
  v[0] = 1.0;  // all photons in the last mode
  for (int k = 0; k + 1 < qubits; ++k) {
    const SparseOperator shift = relative_phase_op(basis, {2 * k + 1, modes - 1});
    for (int rep = 0; rep < N; ++rep) v = shift.apply(v);
  }
  Occupation target(static_cast<std::size_t>(modes), 0);
  for (int k = 0; k < qubits; ++k) target[static_cast<std::size_t>(2 * k + 1)] = N;
  const std::size_t at = basis->index_of(target);
  if (v[static_cast<Eigen::Index>(at)] != cplx(1.0) || v.squaredNorm() != 1.0) {
    throw Error(ErrorCode::Internal, "register preparation did not reach the product state");
  }
  return SSRCState(basis, std::move(v));
}

}  // namespace ssrc
