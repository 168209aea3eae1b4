#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ssrc/error.hpp"
#include "ssrc/schwinger.hpp"
#include "test_support.hpp"

using namespace ssrc;

namespace {

constexpr double kPi = std::numbers::pi;

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) { return a * b - b * a; }

}  // namespace

class Su2Algebra : public ::testing::TestWithParam<int> {};

TEST_P(Su2Algebra, CommutatorsAndCasimir) {
  const int N = GetParam();
  const BasisPtr b = make_basis(2, N);
  const SparseOperator jx = j_operator(b, Axis::X), jy = j_operator(b, Axis::Y), jz = j_operator(b, Axis::Z);
  const SparseOperator jp = j_operator(b, Axis::Plus), jm = j_operator(b, Axis::Minus);
  const cplx i(0.0, 1.0);
  EXPECT_LE(max_abs_difference(commutator(jx, jy), jz.scaled(i)), 1e-10);
  EXPECT_LE(max_abs_difference(commutator(jy, jz), jx.scaled(i)), 1e-10);
  EXPECT_LE(max_abs_difference(commutator(jz, jx), jy.scaled(i)), 1e-10);
  EXPECT_LE(max_abs_difference(commutator(jp, jm), jz.scaled(2.0)), 1e-10);
  const SparseOperator casimir = jx * jx + jy * jy + jz * jz;
  const double j = N / 2.0;
  EXPECT_LE(max_abs_difference(casimir, identity_operator(b).scaled(j * (j + 1))), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(PhotonNumbers, Su2Algebra, ::testing::Values(1, 2, 5, 20, 100));

TEST(Schwinger, MultimodePairsSatisfyAlgebra) {
  const BasisPtr b = make_basis(4, 3);
  for (ModePair p : {ModePair{0, 1}, ModePair{2, 3}, ModePair{1, 3}, ModePair{3, 0}}) {
    const SparseOperator jx = j_operator(b, Axis::X, p), jy = j_operator(b, Axis::Y, p), jz = j_operator(b, Axis::Z, p);
    EXPECT_LE(max_abs_difference(commutator(jx, jy), jz.scaled(cplx(0, 1))), 1e-12);
    EXPECT_LT(jx.hermiticity_defect(), 1e-15);
  }
  EXPECT_THROW(j_operator(b, Axis::X, {1, 1}), Error);
  EXPECT_THROW(j_operator(b, Axis::X, {0, 4}), Error);
}

TEST(Schwinger, JzIsHalfOccupationDifference) {
  const BasisPtr b = make_basis(2, 4);
  const Eigen::MatrixXcd jz = j_operator(b, Axis::Z).dense();
  for (int n = 0; n <= 4; ++n) EXPECT_DOUBLE_EQ(jz(n, n).real(), (n - (4 - n)) / 2.0);
}

TEST(Schwinger, JPlusMovesPhotonIntoFirstMode) {
  const BasisPtr b = make_basis(2, 3);
  const SparseOperator jp = j_operator(b, Axis::Plus);
  const CVector out = jp.apply(basis_state(b, {1, 2}).amplitudes());
  EXPECT_NEAR(std::abs(out[2] - std::sqrt(2.0 * 2.0)), 0.0, 1e-15);
}

TEST(Schwinger, NumberOperatorsSumToN) {
  const BasisPtr b = make_basis(3, 4);
  const SparseOperator total = number_operator(b, 0) + number_operator(b, 1) + number_operator(b, 2);
  EXPECT_LE(max_abs_difference(total, identity_operator(b).scaled(4.0)), 0.0);
}

TEST(Exp, UnitaryAndMatchesTaylorAction) {
  const BasisPtr b = make_basis(3, 5);
  const SparseOperator g = j_axis_operator(b, {0.3, -0.4, 0.5}, {0, 2});
  const SparseOperator u = exp_unitary(g, 0.9);
  EXPECT_LT(u.unitarity_defect(), 1e-12);
  SplitMix64 rng(3);
  const CVector v = random_state(b, rng).amplitudes();
  EXPECT_LT((u.apply(v) - apply_exp(g, 0.9, v)).norm(), 1e-12);
}

TEST(Exp, RejectsNonHermitianGenerator) {
  const BasisPtr b = make_basis(2, 3);
  try {
    exp_unitary(j_operator(b, Axis::Plus), 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonHermitian);
  }
}

TEST(Exp, SpectralGeneratorHandlesLargeBlocksByAction) {
  const BasisPtr b = make_basis(2, 40);
  const SparseOperator g = j_operator(b, Axis::X);
  const SpectralGenerator small(g, 8);
  EXPECT_TRUE(small.has_large_blocks());
  EXPECT_THROW(small.unitary(0.3), Error);
  const SpectralGenerator full(g);
  SplitMix64 rng(11);
  const CVector v = random_state(b, rng).amplitudes();
  EXPECT_LT((small.apply(0.3, v) - full.apply(0.3, v)).norm(), 1e-10);
}

TEST(Exp, IdentityAtZeroAngle) {
  const BasisPtr b = make_basis(2, 6);
  EXPECT_LE(max_abs_difference(exp_unitary(j_operator(b, Axis::Y), 0.0), identity_operator(b)), 1e-15);
}

TEST(Rotation, SinglePhotonIsLogicalRy) {
  const BasisPtr b = make_basis(2, 1);
  const double theta = 0.7;
  const Eigen::MatrixXcd r = rotation(b, theta, 0.0).dense();
  // Index 0 is |0>_a|1>_b, index 1 is |1>_a|0>_b.
  EXPECT_NEAR(std::abs(r(0, 0) - std::cos(theta / 2)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r(1, 0) - std::sin(theta / 2)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r(0, 1) + std::sin(theta / 2)), 0.0, 1e-14);
}

TEST(Rotation, ComposesAndInverts) {
  const BasisPtr b = make_basis(2, 7);
  const SparseOperator r = rotation(b, 1.1, 0.4);
  EXPECT_LT(r.unitarity_defect(), 1e-12);
  EXPECT_LE(max_abs_difference(r * r.adjoint(), identity_operator(b)), 1e-12);
  EXPECT_LE(max_abs_difference(rotation(b, 0.3, 0.0) * rotation(b, 0.5, 0.0), rotation(b, 0.8, 0.0)), 1e-12);
}

TEST(Rotation, PhaseLockingOverlap) {
  const BasisPtr b = make_basis(2, 30);
  const SSRCState vac = basis_state(b, {0, 30});
  const SSRCState rotated = rotation(b, 0.4, 1.3).apply(vac);
  EXPECT_NEAR(std::abs(inner_product(vac, rotated)), std::pow(std::cos(0.2), 30), 1e-12);
}

TEST(Sng, SymmetrizedAndUnitary) {
  const BasisPtr b = make_basis(2, 6);
  const SparseOperator u = sng_unitary(b, {0.0, 1.0, 0.0}, 0.37, 2);
  EXPECT_LT(u.unitarity_defect(), 1e-12);
  const SparseOperator jy = j_operator(b, Axis::Y);
  const SparseOperator jy2(b, (jy * jy).matrix(), true);
  EXPECT_LE(max_abs_difference(u, exp_unitary(jy2, 0.37)), 1e-12);
  EXPECT_THROW(sng_unitary(b, {0.0, 1.0, 0.0}, 0.1, 1), Error);
}

TEST(Sng, MatchesIndependentFixture) {
  const Json fx = ssrc::testing::load_fixture("sng_jx2_n2.json");
  const BasisPtr b = make_basis(fx["K"].get<int>(), fx["N"].get<int>());
  const auto axis = fx["axis"].get<std::vector<double>>();
  const Eigen::MatrixXcd u =
      sng_unitary(b, {axis[0], axis[1], axis[2]}, fx["chi"].get<double>(), fx["power"].get<int>()).dense();
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(u.rows(), u.cols());
  for (const auto& e : fx["entries"]) expected(e[0].get<int>(), e[1].get<int>()) = cplx(e[2].get<double>(), e[3].get<double>());
  EXPECT_LT((u - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Sng, SquaredJzIsDiagonalPhase) {
  const BasisPtr b = make_basis(2, 4);
  const Eigen::MatrixXcd u = sng_unitary(b, {0.0, 0.0, 1.0}, 0.5, 2).dense();
  for (int n = 0; n <= 4; ++n) {
    const double m = n - 2.0;
    EXPECT_NEAR(std::abs(u(n, n) - std::polar(1.0, 0.5 * m * m)), 0.0, 1e-14);
  }
}

TEST(RelativePhase, CyclicShiftOfPeriodNPlusOne) {
  const int N = 5;
  const BasisPtr b = make_basis(2, N);
  const SparseOperator p = relative_phase_op(b);
  EXPECT_LT(p.unitarity_defect(), 1e-15);
  SparseOperator power = identity_operator(b);
  for (int k = 0; k < N + 1; ++k) power = p * power;
  EXPECT_LE(max_abs_difference(power, identity_operator(b)), 0.0);
  const CVector moved = p.apply(basis_state(b, {2, 3}).amplitudes());
  EXPECT_EQ(moved[3], cplx(1.0));
  const CVector wrapped = p.apply(basis_state(b, {N, 0}).amplitudes());
  EXPECT_EQ(wrapped[0], cplx(1.0));
}

TEST(RelativePhase, PreservesOtherModes) {
  const BasisPtr b = make_basis(3, 3);
  const SparseOperator p = relative_phase_op(b, {0, 2});
  const CVector v = p.apply(basis_state(b, {0, 1, 2}).amplitudes());
  EXPECT_EQ(v[static_cast<Eigen::Index>(b->index_of({1, 1, 1}))], cplx(1.0));
}

TEST(SparseOperator, EntriesSortedAndPruned) {
  const BasisPtr b = make_basis(2, 3);
  const auto entries = j_operator(b, Axis::X).entries();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    EXPECT_TRUE(std::pair(entries[i - 1].row, entries[i - 1].col) < std::pair(entries[i].row, entries[i].col));
  }
  for (const auto& e : entries) EXPECT_NE(e.value, cplx(0.0));
  EXPECT_EQ(entries.size(), 6u);
}

TEST(SparseOperator, BasisMismatchIsRejected) {
  const SparseOperator a = identity_operator(make_basis(2, 2));
  const SparseOperator c = identity_operator(make_basis(2, 3));
  EXPECT_THROW(a * c, Error);
  EXPECT_THROW(a + c, Error);
}

TEST(Rotation, RotatedVacuumAtPiIsFullTransfer) {
  const BasisPtr b = make_basis(2, 9);
  const SSRCState out = rotation(b, kPi, 0.0).apply(basis_state(b, {0, 9}));
  EXPECT_NEAR(std::abs(out.amplitude(9)), 1.0, 1e-12);
}
