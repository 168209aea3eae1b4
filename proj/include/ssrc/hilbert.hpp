#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ssrc/rng.hpp"

namespace ssrc {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using Occupation = std::vector<int>;

inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 20;

// C(N+K-1, K-1), saturating at UINT64_MAX.
std::uint64_t basis_dimension(int num_modes, int total_photons);

// Occupation basis of K modes sharing N photons.
//
// Ordering: occupation vectors are sorted in descending lexicographic order of
// (n_K, n_{K-1}, ..., n_1). Index 0 holds all photons in the last mode; for K = 2
// with modes (a, b) the index equals n_a.
class FockBasis {
 public:
  FockBasis(int num_modes, int total_photons, std::size_t dimension_cap = kDefaultDimensionCap);

  int num_modes() const { return num_modes_; }
  int total_photons() const { return total_photons_; }
  std::size_t dimension() const { return dimension_; }

  Occupation occupation(std::size_t index) const;
  int occupation_at(std::size_t index, int mode) const {
    return table_[index * static_cast<std::size_t>(num_modes_) + static_cast<std::size_t>(mode)];
  }
  const int* occupation_data(std::size_t index) const {
    return table_.data() + index * static_cast<std::size_t>(num_modes_);
  }

  // Throws InvalidOccupation on wrong length, negative entries or wrong total.
  std::size_t index_of(const Occupation& occupation) const;
  // No validation; `occupation` must hold num_modes() entries summing to N.
  std::size_t index_of_unchecked(const int* occupation) const;

  bool same_as(const FockBasis& other) const {
    return num_modes_ == other.num_modes_ && total_photons_ == other.total_photons_;
  }

 private:
  std::uint64_t compositions(int photons, int modes) const;

  int num_modes_;
  int total_photons_;
  std::size_t dimension_;
  std::vector<int> table_;
  std::vector<std::uint64_t> compositions_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr make_basis(int num_modes, int total_photons, std::size_t dimension_cap = kDefaultDimensionCap);

void require_same_basis(const FockBasis& x, const FockBasis& y, const char* context);

class SSRCState {
 public:
  // Normalizes `amplitudes`; throws DegenerateNormalization if the norm is below 1e-300.
  SSRCState(BasisPtr basis, CVector amplitudes);

  // For vectors that should already be unit norm (results of unitary maps). Renormalizes
  // and logs a warning when the drift exceeds 1e-10.
  static SSRCState renormalized(BasisPtr basis, CVector amplitudes, const char* context);

  // Keeps the amplitudes bit for bit; they must already have unit norm within 1e-12.
  static SSRCState from_normalized(BasisPtr basis, CVector amplitudes);

  const FockBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const CVector& amplitudes() const { return amplitudes_; }
  cplx amplitude(std::size_t index) const { return amplitudes_[static_cast<Eigen::Index>(index)]; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }

 private:
  struct Trusted {};
  SSRCState(BasisPtr basis, CVector amplitudes, Trusted);

  BasisPtr basis_;
  CVector amplitudes_;
};

SSRCState basis_state(const BasisPtr& basis, const Occupation& occupation);

// Complex Gaussian amplitudes, normalized.
SSRCState random_state(const BasisPtr& basis, SplitMix64& rng);

// Conjugate-linear in x.
cplx inner_product(const SSRCState& x, const SSRCState& y);
double fidelity(const SSRCState& x, const SSRCState& y);

}  // namespace ssrc
