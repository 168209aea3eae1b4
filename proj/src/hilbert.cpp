#include "ssrc/hilbert.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "ssrc/error.hpp"
#include "ssrc/log.hpp"

namespace ssrc {

namespace {
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
}

std::uint64_t basis_dimension(int num_modes, int total_photons) {
  if (num_modes < 1 || total_photons < 0) return 0;
  const int k = num_modes - 1;
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<unsigned __int128>(total_photons + i) / static_cast<unsigned __int128>(i);
    if (result > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(result);
}

FockBasis::FockBasis(int num_modes, int total_photons, std::size_t dimension_cap)
    : num_modes_(num_modes), total_photons_(total_photons), dimension_(0) {
  if (num_modes < 1) throw Error(ErrorCode::InvalidArgument, "number of modes must be at least 1");
  if (total_photons < 0) throw Error(ErrorCode::InvalidArgument, "total photon number must be non-negative");
  const std::uint64_t dim = basis_dimension(num_modes, total_photons);
  if (dim > dimension_cap) {
    std::ostringstream msg;
    msg << "basis dimension " << (dim == kSaturated ? std::string(">= 2^64") : std::to_string(dim))
        << " for K=" << num_modes << ", N=" << total_photons << " exceeds the cap " << dimension_cap;
    throw Error(ErrorCode::DimensionOverflow, msg.str());
  }
  dimension_ = static_cast<std::size_t>(dim);

  const int K = num_modes_;
  const int N = total_photons_;
  compositions_.assign(static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(K + 1), 0);
  auto slot = [&](int r, int m) -> std::uint64_t& {
    return compositions_[static_cast<std::size_t>(r) * static_cast<std::size_t>(K + 1) + static_cast<std::size_t>(m)];
  };
  for (int r = 0; r <= N; ++r) {
    slot(r, 0) = (r == 0) ? 1 : 0;
    for (int m = 1; m <= K; ++m) {
      const std::uint64_t a = slot(r, m - 1);
      const std::uint64_t b = r > 0 ? slot(r - 1, m) : 0;
      slot(r, m) = (a > kSaturated - b) ? kSaturated : a + b;
    }
  }

  table_.resize(dimension_ * static_cast<std::size_t>(K));
  std::vector<int> current(static_cast<std::size_t>(K), 0);
  std::size_t next = 0;
  std::function<void(int, int)> fill = [&](int mode, int remaining) {
    if (mode == 0) {
      current[0] = remaining;
      std::copy(current.begin(), current.end(), table_.begin() + static_cast<std::ptrdiff_t>(next * static_cast<std::size_t>(K)));
      ++next;
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      current[static_cast<std::size_t>(mode)] = v;
      fill(mode - 1, remaining - v);
    }
  };
  fill(K - 1, N);
  if (next != dimension_) throw Error(ErrorCode::Internal, "basis enumeration size mismatch");
}

std::uint64_t FockBasis::compositions(int photons, int modes) const {
  if (photons < 0) return 0;
  return compositions_[static_cast<std::size_t>(photons) * static_cast<std::size_t>(num_modes_ + 1) +
                       static_cast<std::size_t>(modes)];
}

Occupation FockBasis::occupation(std::size_t index) const {
  if (index >= dimension_) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  const int* p = occupation_data(index);
  return Occupation(p, p + num_modes_);
}

std::size_t FockBasis::index_of_unchecked(const int* occupation) const {
  if (num_modes_ == 2) return static_cast<std::size_t>(occupation[0]);
  std::uint64_t index = 0;
  int remaining = total_photons_;
  for (int mode = num_modes_ - 1; mode >= 1; --mode) {
    const int v = occupation[mode];
    // States earlier in the order carry more photons in this mode.
    index += compositions(remaining - v - 1, mode + 1);
    remaining -= v;
  }
  return static_cast<std::size_t>(index);
}

std::size_t FockBasis::index_of(const Occupation& occupation) const {
  if (occupation.size() != static_cast<std::size_t>(num_modes_)) {
    throw Error(ErrorCode::InvalidOccupation, "occupation has " + std::to_string(occupation.size()) +
                                                  " entries, expected " + std::to_string(num_modes_));
  }
  long long sum = 0;
  for (int n : occupation) {
    if (n < 0) throw Error(ErrorCode::InvalidOccupation, "negative occupation entry");
    sum += n;
  }
  if (sum != total_photons_) {
    throw Error(ErrorCode::InvalidOccupation, "occupation sums to " + std::to_string(sum) + ", expected " +
                                                  std::to_string(total_photons_));
  }
  return index_of_unchecked(occupation.data());
}

BasisPtr make_basis(int num_modes, int total_photons, std::size_t dimension_cap) {
  return std::make_shared<const FockBasis>(num_modes, total_photons, dimension_cap);
}

void require_same_basis(const FockBasis& x, const FockBasis& y, const char* context) {
  if (!x.same_as(y)) {
    std::ostringstream msg;
    msg << context << ": basis (K=" << x.num_modes() << ", N=" << x.total_photons() << ") vs (K=" << y.num_modes()
        << ", N=" << y.total_photons() << ")";
    throw Error(ErrorCode::BasisMismatch, msg.str());
  }
}

SSRCState::SSRCState(BasisPtr basis, CVector amplitudes) : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_) throw Error(ErrorCode::InvalidArgument, "null basis");
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_->dimension()) {
    throw Error(ErrorCode::InvalidArgument, "amplitude vector length " + std::to_string(amplitudes_.size()) +
                                                " does not match basis dimension " +
                                                std::to_string(basis_->dimension()));
  }
  if (!amplitudes_.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite amplitude");
  const double norm = amplitudes_.norm();
  if (!(norm >= 1e-300)) throw Error(ErrorCode::DegenerateNormalization, "state norm below 1e-300");
  if (norm != 1.0) amplitudes_ /= norm;
}

SSRCState::SSRCState(BasisPtr basis, CVector amplitudes, Trusted)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {}

SSRCState SSRCState::renormalized(BasisPtr basis, CVector amplitudes, const char* context) {
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << context << ": normalization drift " << std::abs(norm - 1.0) << " corrected";
    log::warn(msg.str());
  }
  return SSRCState(std::move(basis), std::move(amplitudes));
}

SSRCState SSRCState::from_normalized(BasisPtr basis, CVector amplitudes) {
  if (!basis) throw Error(ErrorCode::InvalidArgument, "null basis");
  if (static_cast<std::size_t>(amplitudes.size()) != basis->dimension()) {
    throw Error(ErrorCode::InvalidArgument, "amplitude vector length does not match basis dimension");
  }
  if (!amplitudes.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite amplitude");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "amplitudes are not normalized");
  return SSRCState(std::move(basis), std::move(amplitudes), Trusted{});
}

SSRCState basis_state(const BasisPtr& basis, const Occupation& occupation) {
  const std::size_t index = basis->index_of(occupation);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->dimension()));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return SSRCState(basis, std::move(v));
}

SSRCState random_state(const BasisPtr& basis, SplitMix64& rng) {
  CVector v(static_cast<Eigen::Index>(basis->dimension()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v[i] = cplx(re, im);
  }
  return SSRCState(basis, std::move(v));
}

cplx inner_product(const SSRCState& x, const SSRCState& y) {
  require_same_basis(x.basis(), y.basis(), "inner_product");
  return x.amplitudes().dot(y.amplitudes());
}

double fidelity(const SSRCState& x, const SSRCState& y) { return std::norm(inner_product(x, y)); }

}  // namespace ssrc
