#include <gtest/gtest.h>

#include <set>

#include "ssrc/error.hpp"
#include "ssrc/hilbert.hpp"

using namespace ssrc;

TEST(Basis, DimensionIsStarsAndBars) {
  EXPECT_EQ(basis_dimension(2, 5), 6u);
  EXPECT_EQ(basis_dimension(3, 3), 10u);
  EXPECT_EQ(basis_dimension(4, 2), 10u);
  EXPECT_EQ(basis_dimension(1, 7), 1u);
  EXPECT_EQ(basis_dimension(5, 0), 1u);
  EXPECT_EQ(make_basis(4, 6)->dimension(), 84u);
}

TEST(Basis, TwoModeIndexIsOccupationOfFirstMode) {
  const BasisPtr b = make_basis(2, 7);
  for (std::size_t i = 0; i < b->dimension(); ++i) {
    EXPECT_EQ(b->occupation_at(i, 0), static_cast<int>(i));
    EXPECT_EQ(b->occupation_at(i, 1), 7 - static_cast<int>(i));
  }
}

TEST(Basis, IndexZeroHoldsAllPhotonsInLastMode) {
  for (int K : {2, 3, 5}) {
    const BasisPtr b = make_basis(K, 4);
    EXPECT_EQ(b->occupation_at(0, K - 1), 4);
  }
}

TEST(Basis, IndexRoundTripAndUniqueness) {
  for (auto [K, N] : {std::pair{3, 4}, std::pair{4, 5}, std::pair{6, 3}}) {
    const BasisPtr b = make_basis(K, N);
    std::set<Occupation> seen;
    for (std::size_t i = 0; i < b->dimension(); ++i) {
      const Occupation occ = b->occupation(i);
      int total = 0;
      for (int n : occ) total += n;
      EXPECT_EQ(total, N);
      EXPECT_EQ(b->index_of(occ), i);
      EXPECT_EQ(b->index_of_unchecked(occ.data()), i);
      seen.insert(occ);
    }
    EXPECT_EQ(seen.size(), b->dimension());
  }
}

TEST(Basis, OrderingIsDescendingInReversedOccupation) {
  const BasisPtr b = make_basis(3, 3);
  for (std::size_t i = 1; i < b->dimension(); ++i) {
    Occupation prev = b->occupation(i - 1), cur = b->occupation(i);
    std::reverse(prev.begin(), prev.end());
    std::reverse(cur.begin(), cur.end());
    EXPECT_GT(prev, cur);
  }
}

TEST(Basis, RejectsBadOccupations) {
  const BasisPtr b = make_basis(3, 2);
  EXPECT_THROW(b->index_of({1, 1}), Error);
  EXPECT_THROW(b->index_of({3, -1, 0}), Error);
  try {
    b->index_of({1, 1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidOccupation);
  }
}

TEST(Basis, DimensionCap) {
  try {
    make_basis(4, 200, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionOverflow);
  }
  EXPECT_NO_THROW(make_basis(4, 10, 286));
  EXPECT_THROW(make_basis(0, 2), Error);
  EXPECT_THROW(make_basis(2, -1), Error);
}

TEST(State, NormalizesInput) {
  const BasisPtr b = make_basis(2, 2);
  CVector v(3);
  v << 3.0, cplx(0.0, 4.0), 0.0;
  const SSRCState s(b, v);
  EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-15);
  EXPECT_NEAR(s.amplitude(1).imag(), 0.8, 1e-15);
}

TEST(State, RejectsZeroAndNonFinite) {
  const BasisPtr b = make_basis(2, 2);
  try {
    SSRCState(b, CVector::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateNormalization);
  }
  CVector v = CVector::Ones(3);
  v[1] = std::nan("");
  EXPECT_THROW(SSRCState(b, v), Error);
  EXPECT_THROW(SSRCState(b, CVector::Ones(4)), Error);
}

TEST(State, FromNormalizedKeepsBits) {
  const BasisPtr b = make_basis(2, 3);
  SplitMix64 rng(7);
  const SSRCState s = random_state(b, rng);
  const SSRCState t = SSRCState::from_normalized(b, s.amplitudes());
  EXPECT_TRUE((s.amplitudes().array() == t.amplitudes().array()).all());
  EXPECT_THROW(SSRCState::from_normalized(b, 2.0 * s.amplitudes()), Error);
}

TEST(State, InnerProductIsConjugateLinearInFirstArgument) {
  const BasisPtr b = make_basis(2, 1);
  CVector x(2), y(2);
  x << cplx(0.0, 1.0), 0.0;
  y << 1.0, 0.0;
  EXPECT_NEAR(std::abs(inner_product(SSRCState(b, x), SSRCState(b, y)) - cplx(0.0, -1.0)), 0.0, 1e-15);
  EXPECT_NEAR(fidelity(SSRCState(b, x), SSRCState(b, y)), 1.0, 1e-15);
}

TEST(State, RandomStateIsSeedDeterministic) {
  const BasisPtr b = make_basis(3, 3);
  SplitMix64 r1(42), r2(42), r3(43);
  const SSRCState a = random_state(b, r1), c = random_state(b, r2), d = random_state(b, r3);
  EXPECT_TRUE((a.amplitudes().array() == c.amplitudes().array()).all());
  EXPECT_LT(fidelity(a, d), 1.0 - 1e-6);
}

TEST(State, MismatchedBasesAreRejected) {
  const SSRCState a = basis_state(make_basis(2, 2), {1, 1});
  const SSRCState b = basis_state(make_basis(2, 3), {1, 2});
  try {
    inner_product(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BasisMismatch);
  }
}

TEST(Rng, SplitMixReferenceSequence) {
  // Published splitmix64 outputs for seed 0.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(Rng, UniformAndNormalMoments) {
  SplitMix64 rng(kDefaultSeed);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
}
