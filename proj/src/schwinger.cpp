#include "ssrc/schwinger.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ssrc/error.hpp"

namespace ssrc {

namespace {

using Triplet = Eigen::Triplet<cplx, std::ptrdiff_t>;

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& triplets) {
  SparseMatrix m(static_cast<std::ptrdiff_t>(dim), static_cast<std::ptrdiff_t>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

double max_abs(const SparseMatrix& m) {
  double best = 0.0;
  for (std::ptrdiff_t k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  }
  return best;
}

SparseMatrix raising_matrix(const FockBasis& basis, ModePair pair) {
  std::vector<Triplet> triplets;
  const std::size_t dim = basis.dimension();
  triplets.reserve(dim);
  Occupation occ(static_cast<std::size_t>(basis.num_modes()));
  for (std::size_t s = 0; s < dim; ++s) {
    const int* src = basis.occupation_data(s);
    const int ni = src[pair.i];
    const int nj = src[pair.j];
    if (nj == 0) continue;
    std::copy(src, src + basis.num_modes(), occ.begin());
    occ[static_cast<std::size_t>(pair.i)] += 1;
    occ[static_cast<std::size_t>(pair.j)] -= 1;
    const std::size_t row = basis.index_of_unchecked(occ.data());
    triplets.emplace_back(static_cast<std::ptrdiff_t>(row), static_cast<std::ptrdiff_t>(s),
                          cplx(std::sqrt(static_cast<double>(ni + 1) * static_cast<double>(nj)), 0.0));
  }
  return from_triplets(dim, triplets);
}

SparseMatrix jz_matrix(const FockBasis& basis, ModePair pair) {
  std::vector<Triplet> triplets;
  const std::size_t dim = basis.dimension();
  for (std::size_t s = 0; s < dim; ++s) {
    const int* occ = basis.occupation_data(s);
    const double value = 0.5 * static_cast<double>(occ[pair.i] - occ[pair.j]);
    if (value != 0.0) triplets.emplace_back(static_cast<std::ptrdiff_t>(s), static_cast<std::ptrdiff_t>(s), cplx(value, 0.0));
  }
  return from_triplets(dim, triplets);
}

SparseMatrix diagonal_phases(const FockBasis& basis, ModePair pair, double angle) {
  std::vector<Triplet> triplets;
  const std::size_t dim = basis.dimension();
  triplets.reserve(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    const int* occ = basis.occupation_data(s);
    const double m = 0.5 * static_cast<double>(occ[pair.i] - occ[pair.j]);
    triplets.emplace_back(static_cast<std::ptrdiff_t>(s), static_cast<std::ptrdiff_t>(s), std::polar(1.0, angle * m));
  }
  return from_triplets(dim, triplets);
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

CVector taylor_exp_action(const SparseMatrix& g, double chi, CVector v) {
  double norm1 = 0.0;
  for (std::ptrdiff_t k = 0; k < g.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(g, k); it; ++it) col += std::abs(it.value());
    norm1 = std::max(norm1, col);
  }
  const double scaled = norm1 * std::abs(chi);
  const int steps = std::max(1, static_cast<int>(std::ceil(scaled)));
  const cplx factor(0.0, chi / steps);
  for (int s = 0; s < steps; ++s) {
    CVector term = v;
    CVector acc = v;
    for (int k = 1; k <= 200; ++k) {
      term = (factor / static_cast<double>(k)) * (g * term);
      acc += term;
      if (term.norm() <= 1e-17 * acc.norm()) break;
    }
    v = std::move(acc);
  }
  return v;
}

}  // namespace

SparseOperator::SparseOperator(BasisPtr basis, SparseMatrix matrix, bool hermitian)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), hermitian_(hermitian) {
  if (!basis_) throw Error(ErrorCode::InvalidArgument, "null basis");
  const auto dim = static_cast<std::ptrdiff_t>(basis_->dimension());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw Error(ErrorCode::InvalidArgument, "operator shape does not match basis dimension");
  }
  matrix_.prune([](std::ptrdiff_t, std::ptrdiff_t, const cplx& v) { return v != cplx(0.0, 0.0); });
  matrix_.makeCompressed();
}

std::vector<SparseOperator::Entry> SparseOperator::entries() const {
  std::vector<Entry> out;
  out.reserve(static_cast<std::size_t>(matrix_.nonZeros()));
  for (std::ptrdiff_t k = 0; k < matrix_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) {
      out.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value()});
    }
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return out;
}

CVector SparseOperator::apply(const CVector& v) const {
  if (static_cast<std::size_t>(v.size()) != dimension()) {
    throw Error(ErrorCode::BasisMismatch, "vector length does not match operator dimension");
  }
  return matrix_ * v;
}

SSRCState SparseOperator::apply(const SSRCState& state) const {
  require_same_basis(*basis_, state.basis(), "operator apply");
  return SSRCState::renormalized(state.basis_ptr(), matrix_ * state.amplitudes(), "operator apply");
}

SparseOperator SparseOperator::adjoint() const {
  SparseMatrix adj = matrix_.adjoint();
  return SparseOperator(basis_, std::move(adj), hermitian_);
}

SparseOperator SparseOperator::operator*(const SparseOperator& rhs) const {
  require_same_basis(*basis_, rhs.basis(), "operator product");
  SparseMatrix product = matrix_ * rhs.matrix_;
  return SparseOperator(basis_, std::move(product), false);
}

SparseOperator SparseOperator::operator+(const SparseOperator& rhs) const {
  require_same_basis(*basis_, rhs.basis(), "operator sum");
  SparseMatrix sum = matrix_ + rhs.matrix_;
  return SparseOperator(basis_, std::move(sum), hermitian_ && rhs.hermitian_);
}

SparseOperator SparseOperator::operator-(const SparseOperator& rhs) const {
  require_same_basis(*basis_, rhs.basis(), "operator difference");
  SparseMatrix diff = matrix_ - rhs.matrix_;
  return SparseOperator(basis_, std::move(diff), hermitian_ && rhs.hermitian_);
}

SparseOperator SparseOperator::scaled(cplx factor) const {
  SparseMatrix m = matrix_ * factor;
  return SparseOperator(basis_, std::move(m), hermitian_ && factor.imag() == 0.0);
}

Eigen::MatrixXcd SparseOperator::dense() const { return Eigen::MatrixXcd(matrix_); }

double SparseOperator::hermiticity_defect() const {
  SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  return max_abs(diff);
}

double SparseOperator::unitarity_defect() const {
  SparseMatrix product = SparseMatrix(matrix_.adjoint()) * matrix_;
  SparseMatrix eye(matrix_.rows(), matrix_.cols());
  eye.setIdentity();
  SparseMatrix diff = product - eye;
  return max_abs(diff);
}

double max_abs_difference(const SparseOperator& a, const SparseOperator& b) {
  require_same_basis(a.basis(), b.basis(), "operator comparison");
  SparseMatrix diff = a.matrix() - b.matrix();
  return max_abs(diff);
}

void validate_mode_pair(const FockBasis& basis, ModePair pair) {
  const int K = basis.num_modes();
  if (pair.i < 0 || pair.j < 0 || pair.i >= K || pair.j >= K || pair.i == pair.j) {
    std::ostringstream msg;
    msg << "mode pair (" << pair.i << ", " << pair.j << ") invalid for " << K << " modes";
    throw Error(ErrorCode::InvalidMode, msg.str());
  }
}

SparseOperator identity_operator(const BasisPtr& basis) {
  SparseMatrix eye(static_cast<std::ptrdiff_t>(basis->dimension()), static_cast<std::ptrdiff_t>(basis->dimension()));
  eye.setIdentity();
  return SparseOperator(basis, std::move(eye), true);
}

SparseOperator number_operator(const BasisPtr& basis, int mode) {
  if (mode < 0 || mode >= basis->num_modes()) throw Error(ErrorCode::InvalidMode, "mode index out of range");
  std::vector<Triplet> triplets;
  for (std::size_t s = 0; s < basis->dimension(); ++s) {
    const int n = basis->occupation_at(s, mode);
    if (n != 0) triplets.emplace_back(static_cast<std::ptrdiff_t>(s), static_cast<std::ptrdiff_t>(s), cplx(n, 0.0));
  }
  return SparseOperator(basis, from_triplets(basis->dimension(), triplets), true);
}

SparseOperator j_operator(const BasisPtr& basis, Axis axis, ModePair pair) {
  validate_mode_pair(*basis, pair);
  switch (axis) {
    case Axis::Plus: return SparseOperator(basis, raising_matrix(*basis, pair), false);
    case Axis::Minus: return SparseOperator(basis, SparseMatrix(raising_matrix(*basis, pair).adjoint()), false);
    case Axis::Z: return SparseOperator(basis, jz_matrix(*basis, pair), true);
    case Axis::X: {
      const SparseMatrix plus = raising_matrix(*basis, pair);
      SparseMatrix x = (plus + SparseMatrix(plus.adjoint())) * cplx(0.5, 0.0);
      return SparseOperator(basis, std::move(x), true);
    }
    case Axis::Y: {
      const SparseMatrix plus = raising_matrix(*basis, pair);
      // (J+ - J-)/(2i) = -i/2 (J+ - J-)
      SparseMatrix y = (plus - SparseMatrix(plus.adjoint())) * cplx(0.0, -0.5);
      return SparseOperator(basis, std::move(y), true);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown axis");
}

SparseOperator j_axis_operator(const BasisPtr& basis, const std::array<double, 3>& axis, ModePair pair) {
  validate_mode_pair(*basis, pair);
  if (!(std::isfinite(axis[0]) && std::isfinite(axis[1]) && std::isfinite(axis[2]))) {
    throw Error(ErrorCode::InvalidArgument, "non-finite axis component");
  }
  const SparseMatrix plus = raising_matrix(*basis, pair);
  const SparseMatrix minus = plus.adjoint();
  // n_x (J+ + J-)/2 + n_y (J+ - J-)/(2i) + n_z Jz
  const cplx cp(0.5 * axis[0], -0.5 * axis[1]);
  const cplx cm(0.5 * axis[0], 0.5 * axis[1]);
  SparseMatrix m = plus * cp + minus * cm + jz_matrix(*basis, pair) * cplx(axis[2], 0.0);
  return SparseOperator(basis, std::move(m), true);
}

SpectralGenerator::SpectralGenerator(const SparseOperator& generator, std::size_t max_dense_block)
    : basis_(generator.basis_ptr()) {
  const SparseMatrix& g = generator.matrix();
  const std::size_t dim = generator.dimension();
  UnionFind uf(dim);
  for (std::ptrdiff_t k = 0; k < g.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(g, k); it; ++it) {
      uf.unite(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()));
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::ptrdiff_t> group_of_root(dim, -1);
  for (std::size_t s = 0; s < dim; ++s) {
    const std::size_t root = uf.find(s);
    if (group_of_root[root] < 0) {
      group_of_root[root] = static_cast<std::ptrdiff_t>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(group_of_root[root])].push_back(s);
  }

  std::vector<std::size_t> local(dim, 0);
  for (auto& indices : groups) {
    for (std::size_t p = 0; p < indices.size(); ++p) local[indices[p]] = p;
    const auto n = static_cast<Eigen::Index>(indices.size());
    if (indices.size() > max_dense_block) {
      std::vector<Triplet> triplets;
      for (std::size_t p = 0; p < indices.size(); ++p) {
        for (SparseMatrix::InnerIterator it(g, static_cast<std::ptrdiff_t>(indices[p])); it; ++it) {
          triplets.emplace_back(static_cast<std::ptrdiff_t>(local[static_cast<std::size_t>(it.row())]),
                                static_cast<std::ptrdiff_t>(p), it.value());
        }
      }
      large_.push_back({indices, from_triplets(indices.size(), triplets)});
      continue;
    }
    Block block;
    block.indices = indices;
    if (n == 1) {
      block.eigenvalues = Eigen::VectorXd::Constant(1, g.coeff(static_cast<std::ptrdiff_t>(indices[0]),
                                                               static_cast<std::ptrdiff_t>(indices[0]))
                                                           .real());
      block.eigenvectors = Eigen::MatrixXcd::Identity(1, 1);
    } else {
      Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
      for (std::size_t p = 0; p < indices.size(); ++p) {
        for (SparseMatrix::InnerIterator it(g, static_cast<std::ptrdiff_t>(indices[p])); it; ++it) {
          dense(static_cast<Eigen::Index>(local[static_cast<std::size_t>(it.row())]), static_cast<Eigen::Index>(p)) =
              it.value();
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
      if (solver.info() != Eigen::Success) throw Error(ErrorCode::Internal, "Hermitian eigendecomposition failed");
      block.eigenvalues = solver.eigenvalues();
      block.eigenvectors = solver.eigenvectors();
    }
    blocks_.push_back(std::move(block));
  }
}

SparseOperator SpectralGenerator::unitary(double chi) const {
  if (!large_.empty()) {
    throw Error(ErrorCode::DimensionOverflow,
                "generator block too large for an explicit exponential; use the action-only path");
  }
  std::vector<Triplet> triplets;
  const std::size_t dim = basis_->dimension();
  for (const Block& block : blocks_) {
    const auto n = static_cast<Eigen::Index>(block.indices.size());
    if (n == 1) {
      triplets.emplace_back(static_cast<std::ptrdiff_t>(block.indices[0]), static_cast<std::ptrdiff_t>(block.indices[0]),
                            std::polar(1.0, chi * block.eigenvalues[0]));
      continue;
    }
    Eigen::VectorXcd phases(n);
    for (Eigen::Index k = 0; k < n; ++k) phases[k] = std::polar(1.0, chi * block.eigenvalues[k]);
    const Eigen::MatrixXcd u = block.eigenvectors * phases.asDiagonal() * block.eigenvectors.adjoint();
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) {
        triplets.emplace_back(static_cast<std::ptrdiff_t>(block.indices[static_cast<std::size_t>(r)]),
                              static_cast<std::ptrdiff_t>(block.indices[static_cast<std::size_t>(c)]), u(r, c));
      }
    }
  }
  return SparseOperator(basis_, from_triplets(dim, triplets), false);
}

CVector SpectralGenerator::apply(double chi, const CVector& v) const {
  if (static_cast<std::size_t>(v.size()) != basis_->dimension()) {
    throw Error(ErrorCode::BasisMismatch, "vector length does not match generator dimension");
  }
  CVector out(v.size());
  for (const Block& block : blocks_) {
    const auto n = static_cast<Eigen::Index>(block.indices.size());
    if (n == 1) {
      const auto s = static_cast<Eigen::Index>(block.indices[0]);
      out[s] = std::polar(1.0, chi * block.eigenvalues[0]) * v[s];
      continue;
    }
    Eigen::VectorXcd sub(n);
    for (Eigen::Index k = 0; k < n; ++k) sub[k] = v[static_cast<Eigen::Index>(block.indices[static_cast<std::size_t>(k)])];
    Eigen::VectorXcd coeffs = block.eigenvectors.adjoint() * sub;
    for (Eigen::Index k = 0; k < n; ++k) coeffs[k] *= std::polar(1.0, chi * block.eigenvalues[k]);
    sub = block.eigenvectors * coeffs;
    for (Eigen::Index k = 0; k < n; ++k) out[static_cast<Eigen::Index>(block.indices[static_cast<std::size_t>(k)])] = sub[k];
  }
  for (const LargeBlock& block : large_) {
    const auto n = static_cast<Eigen::Index>(block.indices.size());
    CVector sub(n);
    for (Eigen::Index k = 0; k < n; ++k) sub[k] = v[static_cast<Eigen::Index>(block.indices[static_cast<std::size_t>(k)])];
    sub = taylor_exp_action(block.generator, chi, std::move(sub));
    for (Eigen::Index k = 0; k < n; ++k) out[static_cast<Eigen::Index>(block.indices[static_cast<std::size_t>(k)])] = sub[k];
  }
  return out;
}

Eigen::MatrixXcd SpectralGenerator::apply(double chi, const Eigen::MatrixXcd& columns) const {
  Eigen::MatrixXcd out(columns.rows(), columns.cols());
  for (Eigen::Index c = 0; c < columns.cols(); ++c) out.col(c) = apply(chi, CVector(columns.col(c)));
  return out;
}

namespace {

void require_hermitian(const SparseOperator& generator) {
  if (!generator.hermitian()) throw Error(ErrorCode::NonHermitian, "generator is not flagged Hermitian");
  const double scale = std::max(1.0, max_abs(generator.matrix()));
  const double defect = generator.hermiticity_defect();
  if (defect > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "generator deviates from Hermitian by " << defect;
    throw Error(ErrorCode::NonHermitian, msg.str());
  }
}

}  // namespace

SparseOperator exp_unitary(const SparseOperator& generator, double chi) {
  require_hermitian(generator);
  return SpectralGenerator(generator).unitary(chi);
}

CVector apply_exp(const SparseOperator& generator, double chi, const CVector& v) {
  require_hermitian(generator);
  if (static_cast<std::size_t>(v.size()) != generator.dimension()) {
    throw Error(ErrorCode::BasisMismatch, "vector length does not match generator dimension");
  }
  return taylor_exp_action(generator.matrix(), chi, v);
}

SparseOperator rotation(const BasisPtr& basis, double theta, double phi, ModePair pair) {
  validate_mode_pair(*basis, pair);
  const SparseOperator jy = j_operator(basis, Axis::Y, pair);
  const SparseOperator ry = SpectralGenerator(jy).unitary(theta);
  SparseMatrix rz = diagonal_phases(*basis, pair, phi);
  SparseMatrix product = rz * ry.matrix();
  return SparseOperator(basis, std::move(product), false);
}

SparseOperator sng_unitary(const BasisPtr& basis, const std::array<double, 3>& axis, double chi, int power,
                           ModePair pair) {
  if (power < 2) throw Error(ErrorCode::InvalidArgument, "power must be at least 2; use exp_unitary for linear generators");
  const SparseOperator jn = j_axis_operator(basis, axis, pair);
  SparseMatrix g = jn.matrix();
  for (int p = 1; p < power; ++p) g = SparseMatrix(g * jn.matrix());
  // Symmetrize away rounding so the Hermitian check measures structure, not noise.
  SparseMatrix sym = (g + SparseMatrix(g.adjoint())) * cplx(0.5, 0.0);
  return exp_unitary(SparseOperator(basis, std::move(sym), true), chi);
}

SparseOperator relative_phase_op(const BasisPtr& basis, ModePair pair) {
  validate_mode_pair(*basis, pair);
  std::vector<Triplet> triplets;
  const std::size_t dim = basis->dimension();
  triplets.reserve(dim);
  Occupation occ(static_cast<std::size_t>(basis->num_modes()));
  for (std::size_t s = 0; s < dim; ++s) {
    const int* src = basis->occupation_data(s);
    std::copy(src, src + basis->num_modes(), occ.begin());
    auto& ni = occ[static_cast<std::size_t>(pair.i)];
    auto& nj = occ[static_cast<std::size_t>(pair.j)];
    if (nj > 0) {
      ni += 1;
      nj -= 1;
    } else {
      nj = ni;
      ni = 0;
    }
    triplets.emplace_back(static_cast<std::ptrdiff_t>(basis->index_of_unchecked(occ.data())),
                          static_cast<std::ptrdiff_t>(s), cplx(1.0, 0.0));
  }
  return SparseOperator(basis, from_triplets(dim, triplets), false);
}

}  // namespace ssrc
