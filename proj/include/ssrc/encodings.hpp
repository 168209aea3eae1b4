#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssrc/hilbert.hpp"
#include "ssrc/rng.hpp"
#include "ssrc/schwinger.hpp"

namespace ssrc {

struct Encoding {
  BasisPtr basis;
  std::vector<SSRCState> code_states;  // logical basis, orthonormal
  std::optional<SparseOperator> u0;
  std::optional<SparseOperator> u1;
  std::string label;
  double raw_overlap = 0.0;  // |<raw 0|raw 1>| before orthonormalization
  int photons_per_qubit = 0;

  std::size_t logical_dimension() const { return code_states.size(); }
};

// |0> = U0 |N>_b, |1> = U1 |N>_a on a two-mode basis.
Encoding make_encoding(const SparseOperator& u0, const SparseOperator& u1, std::string label = "custom");
// {|N>_b, |N>_a}; for N = 1 this is the dual-rail encoding.
Encoding fock_encoding(int N);
// Symmetric (Loewdin) orthonormalization of {coherent(-alpha), coherent(alpha)}.
Encoding coherent_like_encoding(cplx alpha, int N);
// Two copies of `single` on modes (a1, b1, a2, b2), logical order |00>, |01>, |10>, |11>.
// Only Fock-type single encodings (code states are basis states) are supported.
Encoding two_qubit_fock_encoding(int N, std::size_t dimension_cap = kDefaultDimensionCap);

struct LogicalAction {
  Eigen::MatrixXcd matrix;  // A_ij = <i|U|j>
  double leakage = 0.0;
};

LogicalAction logical_gate_matrix(const SparseOperator& u, const Encoding& encoding);
LogicalAction logical_action_from_images(const Eigen::MatrixXcd& images, const Encoding& encoding);

// E = 1 - |tr(G^dag A)| / d, clamped at 0.
double gate_error(const Eigen::MatrixXcd& logical, const Eigen::MatrixXcd& target);
double gate_error(const SparseOperator& u, const Eigen::MatrixXcd& target, const Encoding& encoding);

namespace gates {
Eigen::MatrixXcd identity(int d);
Eigen::MatrixXcd pauli_x();
Eigen::MatrixXcd hadamard();
Eigen::MatrixXcd t_gate();
// exp(-i theta sigma_y / 2)
Eigen::MatrixXcd ry(double theta);
Eigen::MatrixXcd cnot();
// Accepts: identity, x, hadamard, t, t-hadamard (T H), ry:<angle>, cnot, identity2.
Eigen::MatrixXcd by_name(const std::string& name);
}  // namespace gates

struct GateSearchResult {
  Eigen::MatrixXcd target;
  std::vector<double> best_parameters;
  double best_error = 1.0;
  double leakage = 0.0;
  int restarts = 0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;
};

struct SearchOptions {
  int restarts = 8;
  std::uint64_t seed = kDefaultSeed;
  // Coarse grid used to seed the first restart (points per axis for theta; 2x for phi, eta).
  int coarse_grid = 16;
  std::size_t max_iterations = 4000;
};

// R(theta, phi) e^{i eta Jz} R(theta, phi)^dag: every rotation, up to global phase.
SparseOperator sg_manifold_unitary(const BasisPtr& basis, double theta, double phi, double eta);

GateSearchResult sg_gate_search(const Eigen::MatrixXcd& target, const Encoding& encoding, const SearchOptions& options = {});

struct GridFloor {
  double step = 0.0;
  double grid_min = 1.0;
  double polished_min = 1.0;     // local descent from the grid minimum
  double lipschitz_bound = 0.0;  // grid_min - 1.25 N step, a rigorous lower bound when positive
  std::vector<double> argmin;    // (theta, phi, eta) of the polished minimum
  std::size_t points = 0;
};

// Exhaustive scan of theta in [0, pi], phi and eta in [0, 2 pi] at spacing `step`.
GridFloor sg_grid_floor(const Eigen::MatrixXcd& target, const Encoding& encoding, double step = 0.01);

// Four-mode passive network: six two-mode blocks e^{i t Jy(m,n)} e^{i p n_m} on pairs
// (0,1), (2,3), (1,2), (0,1), (2,3), (1,2), then four output phases. 16 parameters.
class PassiveMesh {
 public:
  static constexpr int kParameters = 16;
  explicit PassiveMesh(BasisPtr basis);

  // Images U|col> of the given columns.
  Eigen::MatrixXcd apply(const std::vector<double>& params, const Eigen::MatrixXcd& columns) const;
  // 4x4 single-particle unitary of the same parameters.
  static Eigen::Matrix4cd single_particle(const std::vector<double>& params);

 private:
  BasisPtr basis_;
  std::vector<SpectralGenerator> mixers_;  // Jy on each of the three distinct pairs
  std::vector<Eigen::VectorXd> numbers_;   // n_m diagonals
};

struct CnotSearchResult {
  GateSearchResult mesh;
  // Independent search over exp(iH), H a 4x4 Hermitian, lifted by permanents.
  GateSearchResult exponential;
  double floor = 1.0;  // min of the two
};

CnotSearchResult cnot_search(const Encoding& pair, const Eigen::MatrixXcd& target, const SearchOptions& options = {});

// Lifts a single-particle 4x4 unitary to the images of the given basis columns (permanents).
Eigen::MatrixXcd lift_linear_optics(const Eigen::MatrixXcd& u, const FockBasis& basis,
                                    const std::vector<std::size_t>& columns);

// Product of |0>_{a_k} |N>_{b_k} over K qubits on modes (a1, b1, a2, b2, ...), reached from
// all photons in the last mode by relative-phase shifts.
SSRCState prepare_register(int qubits, int N, std::size_t dimension_cap = kDefaultDimensionCap);

}  // namespace ssrc
