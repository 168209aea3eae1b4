#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Sparse>

#include "ssrc/hilbert.hpp"

namespace ssrc {

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor, std::ptrdiff_t>;

enum class Axis { X, Y, Z, Plus, Minus };

// J+ on the pair is a_i^dag a_j; Jz = (n_i - n_j)/2. For K = 2 the default (0, 1) is (a, b).
struct ModePair {
  int i = 0;
  int j = 1;
};

class SparseOperator {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    cplx value;
  };

  SparseOperator(BasisPtr basis, SparseMatrix matrix, bool hermitian);

  const FockBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const SparseMatrix& matrix() const { return matrix_; }
  bool hermitian() const { return hermitian_; }
  std::size_t dimension() const { return basis_->dimension(); }

  // Stored entries, sorted by (row, col).
  std::vector<Entry> entries() const;

  CVector apply(const CVector& v) const;
  // Result renormalized with drift logging; intended for unitaries.
  SSRCState apply(const SSRCState& state) const;

  SparseOperator adjoint() const;
  SparseOperator operator*(const SparseOperator& rhs) const;
  SparseOperator operator+(const SparseOperator& rhs) const;
  SparseOperator operator-(const SparseOperator& rhs) const;
  SparseOperator scaled(cplx factor) const;

  Eigen::MatrixXcd dense() const;
  double hermiticity_defect() const;
  // max |U^dag U - I| elementwise.
  double unitarity_defect() const;

 private:
  BasisPtr basis_;
  SparseMatrix matrix_;
  bool hermitian_;
};

// Max elementwise |A - B| (bases must match).
double max_abs_difference(const SparseOperator& a, const SparseOperator& b);

SparseOperator identity_operator(const BasisPtr& basis);
SparseOperator number_operator(const BasisPtr& basis, int mode);

SparseOperator j_operator(const BasisPtr& basis, Axis axis, ModePair pair = {});
// n_x Jx + n_y Jy + n_z Jz.
SparseOperator j_axis_operator(const BasisPtr& basis, const std::array<double, 3>& axis, ModePair pair = {});

// Block-diagonalized Hermitian generator with cached eigendecompositions, so that
// e^{i chi G} is cheap for many chi. Blocks are the connected components of the sparsity
// pattern; blocks larger than `max_dense_block` are only applied through a scaled Taylor
// series acting on the vector.
class SpectralGenerator {
 public:
  explicit SpectralGenerator(const SparseOperator& generator, std::size_t max_dense_block = 2048);

  const BasisPtr& basis_ptr() const { return basis_; }
  bool has_large_blocks() const { return !large_.empty(); }
  std::size_t block_count() const { return blocks_.size() + large_.size(); }

  // Throws DimensionOverflow if a block exceeds the dense limit.
  SparseOperator unitary(double chi) const;
  CVector apply(double chi, const CVector& v) const;
  Eigen::MatrixXcd apply(double chi, const Eigen::MatrixXcd& columns) const;

 private:
  struct Block {
    std::vector<std::size_t> indices;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
  };
  struct LargeBlock {
    std::vector<std::size_t> indices;
    SparseMatrix generator;
  };

  BasisPtr basis_;
  std::vector<Block> blocks_;
  std::vector<LargeBlock> large_;
};

// e^{i chi G} for Hermitian G. Throws NonHermitian if the flag is unset or the matrix is
// not Hermitian within 1e-12 (relative to its largest entry).
SparseOperator exp_unitary(const SparseOperator& generator, double chi);

// Action-only e^{i chi G} v by scaled Taylor series; any dimension.
CVector apply_exp(const SparseOperator& generator, double chi, const CVector& v);

// R(theta, phi) = e^{i phi Jz} e^{i theta Jy}.
SparseOperator rotation(const BasisPtr& basis, double theta, double phi, ModePair pair = {});

// e^{i chi (n . J)^power}, power >= 2.
SparseOperator sng_unitary(const BasisPtr& basis, const std::array<double, 3>& axis, double chi, int power,
                           ModePair pair = {});

// Moves one photon from mode j to mode i, cyclically within each (n_i + n_j) ladder.
SparseOperator relative_phase_op(const BasisPtr& basis, ModePair pair = {});

void validate_mode_pair(const FockBasis& basis, ModePair pair);

}  // namespace ssrc
