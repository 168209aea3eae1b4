#include <gtest/gtest.h>

#include <cmath>

#include "ssrc/cvlimit.hpp"
#include "ssrc/error.hpp"
#include "test_support.hpp"

using namespace ssrc;
using ssrc::testing::load_fixture;
using ssrc::testing::relative_error;

namespace {

cplx complex_of(const Json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

}  // namespace

TEST(PhaseLocking, MatchesFixture) {
  for (const Json& row : load_fixture("phase_locking.json")) {
    const double theta = row["theta"].get<double>();
    const double N = row["N"].get<double>();
    const ConvergenceReport rep = phase_locking_curve(theta, {N});
    EXPECT_LT(relative_error(rep.exact[0], row["exact"].get<double>()), 1e-12);
    EXPECT_LT(relative_error(rep.limit[0], row["limit"].get<double>()), 1e-12);
  }
}

TEST(PhaseLocking, RatioApproachesOneAtFixedProduct) {
  const double product = 4.0;
  double previous = 0.0;
  for (double theta : {0.4, 0.2, 0.1, 0.05}) {
    const double N = product / (theta * theta);
    const ConvergenceReport rep = phase_locking_curve(theta, {N});
    const double gap = std::abs(rep.ratio[0] - 1.0);
    if (previous > 0.0) {
      EXPECT_LT(gap, previous);
    }
    previous = gap;
  }
  EXPECT_THROW(phase_locking_curve(0.0, {10}), Error);
}

TEST(Coherent, AmplitudesAreBinomialExpansion) {
  const int N = 12;
  const cplx alpha(0.7, -0.4);
  const SSRCState s = coherent_from_rotation(alpha, N);
  const double x = std::norm(alpha) / N;
  for (int k = 0; k <= N; ++k) {
    const double log_mag = 0.5 * (std::lgamma(N + 1.0) - std::lgamma(N - k + 1.0) - std::lgamma(k + 1.0)) +
                           k * std::log(std::abs(alpha) / std::sqrt(N)) + 0.5 * (N - k) * std::log1p(-x);
    const cplx expected = std::polar(std::exp(log_mag), k * std::arg(alpha));
    EXPECT_NEAR(std::abs(s.amplitude(static_cast<std::size_t>(k)) - expected), 0.0, 1e-14);
  }
}

TEST(Coherent, ZeroAmplitudeIsVacuum) {
  const SSRCState s = coherent_from_rotation(0.0, 9);
  EXPECT_EQ(s.amplitude(0), cplx(1.0));
  try {
    coherent_from_rotation(3.0, 9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AmplitudeBound);
  }
}

TEST(Coherent, MatchesFixture) {
  for (const Json& row : load_fixture("coherent.json")) {
    const WindowFidelity w =
        coherent_fidelity(complex_of(row["alpha"]), row["N"].get<int>(), row["n_max"].get<int>());
    EXPECT_LT(relative_error(w.infidelity, row["infidelity"].get<double>()), 1e-8);
    EXPECT_LT(std::abs(w.fidelity - row["fidelity"].get<double>()), 1e-14);
    EXPECT_GT(w.fidelity, 1.0 - 5.0 / row["N"].get<double>());
  }
}

TEST(Coherent, ReferenceTail) {
  const TruncatedSeries zero = truncated_coherent_reference(0.0, 5);
  EXPECT_EQ(zero.coefficients[0], cplx(1.0));
  EXPECT_EQ(zero.tail_mass, 0.0);
  const TruncatedSeries single = truncated_coherent_reference(1.0, 0);
  EXPECT_EQ(single.coefficients.size(), 1);
  EXPECT_NEAR(single.tail_mass, 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_LT(truncated_coherent_reference(2.0, 30).tail_mass, 1e-12);
  EXPECT_THROW(truncated_coherent_reference(1.0, -1), Error);
}

TEST(Displacement, MatchesFixtureAndDecreases) {
  double previous = INFINITY;
  for (const Json& row : load_fixture("displacement.json")) {
    const double r = displacement_residual(complex_of(row["alpha"]), row["k"].get<int>(), row["N"].get<int>(),
                                           row["n_max"].get<int>());
    EXPECT_LT(relative_error(r, row["residual"].get<double>()), 1e-8);
    EXPECT_LT(r, previous);
    previous = r;
  }
}

TEST(Displacement, ZeroAlphaLeavesFockStateFixed) {
  const CVector d = displaced_fock_window(0.0, 2, 5);
  EXPECT_NEAR(std::abs(d[2]), 1.0, 1e-15);
  EXPECT_NEAR(displacement_residual(0.0, 2, 50, 5), 0.0, 1e-14);
}

TEST(Displacement, WindowTooSmallAndBadArguments) {
  try {
    displacement_comparison(3.0, 2, 1000, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowTooSmall);
  }
  EXPECT_THROW(displacement_residual(1.0, 5, 1000, 3), Error);
}

TEST(Squeezed, ParityZerosAreExact) {
  const SSRCState s = squeezed_from_rotation(0.5, 0.3, 20);
  for (std::size_t n = 1; n < s.dimension(); n += 2) EXPECT_EQ(s.amplitude(n), cplx(0.0));
  const TruncatedSeries ref = truncated_squeezed_reference(0.5, 0.3, 10);
  for (Eigen::Index n = 1; n < ref.coefficients.size(); n += 2) EXPECT_EQ(ref.coefficients[n], cplx(0.0));
}

TEST(Squeezed, FidelityMatchesFixture) {
  const Json fidelity_rows = load_fixture("squeezed.json")["fidelity"];
  for (const Json& row : fidelity_rows) {
    const WindowFidelity w = squeezed_fidelity(row["r"].get<double>(), row["phi"].get<double>(), row["N"].get<int>(),
                                               row["n_max"].get<int>());
    EXPECT_LT(relative_error(w.fidelity, row["fidelity"].get<double>()), 1e-8);
    EXPECT_LT(relative_error(w.infidelity, row["infidelity"].get<double>()), 1e-6);
    EXPECT_GT(w.fidelity, 0.999);
  }
}

TEST(Squeezed, NormalizationRoutesMatchFixture) {
  const Json normalization_rows = load_fixture("squeezed.json")["normalization"];
  for (const Json& row : normalization_rows) {
    const double r = row["r"].get<double>();
    const int N = row["N"].get<int>();
    const double log_a = row["log_A"].get<double>();
    EXPECT_LT(std::abs(std::expm1(squeezed_log_normalization(r, N) - log_a)), 1e-8) << "r=" << r << " N=" << N;
    EXPECT_LT(std::abs(std::expm1(squeezed_log_normalization_gram(r, N) - log_a)), 1e-8) << "r=" << r << " N=" << N;
  }
}

TEST(Squeezed, AsymptoticNormalizationApproachesExact) {
  const double small = std::abs(squeezed_log_normalization_asymptotic(0.5, 400) - squeezed_log_normalization(0.5, 400));
  const double large = std::abs(squeezed_log_normalization_asymptotic(0.5, 25) - squeezed_log_normalization(0.5, 25));
  EXPECT_LT(small, large);
}

TEST(Squeezed, ZeroSqueezingIsVacuum) {
  const TruncatedSeries ref = truncated_squeezed_reference(0.0, 0.0, 4);
  EXPECT_NEAR(std::abs(ref.coefficients[0]), 1.0, 1e-15);
  EXPECT_THROW(squeezed_from_rotation(-0.1, 0.0, 4), Error);
}

TEST(Quadrature, ZeroPhaseIsScaledJx) {
  for (int N : {4, 25, 200}) {
    const BasisPtr b = make_basis(2, N);
    const SparseOperator q = quadrature_operator(b, 0.0);
    EXPECT_LE(max_abs_difference(q, j_operator(b, Axis::X).scaled(std::sqrt(2.0 / N))), 1e-12);
  }
}

TEST(Quadrature, CommutatorResidualIsExact) {
  for (int N : {10, 100, 1000}) {
    for (int n_max : {0, 3, 10}) {
      EXPECT_NEAR(commutator_residual(N, n_max), 2.0 * n_max / N, 1e-12);
    }
  }
  EXPECT_THROW(commutator_residual(5, 6), Error);
}

TEST(Quadrature, UncertaintySaturatesOnLastModeState) {
  for (int N : {1, 10, 100}) {
    const BasisPtr b = make_basis(2, N);
    const UncertaintyRecord u = uncertainty_check(basis_state(b, {0, N}));
    EXPECT_NEAR(u.product, u.half_abs_jz, 1e-10);
    EXPECT_TRUE(u.satisfied);
  }
  SplitMix64 rng(12);
  const UncertaintyRecord random = uncertainty_check(random_state(make_basis(2, 6), rng));
  EXPECT_TRUE(random.satisfied);
  EXPECT_GE(random.product, random.half_abs_jz - 1e-12);
}

TEST(Quadrature, SqueezedStateVarianceRatio) {
  const UncertaintyRecord u = uncertainty_check(squeezed_from_rotation(0.5, 0.0, 500));
  EXPECT_TRUE(u.satisfied);
  EXPECT_NEAR(u.delta_jx / u.delta_jy, std::exp(-1.0), 0.05 * std::exp(-1.0));
}

TEST(Overlap, MatchesFixture) {
  for (const Json& row : load_fixture("overlap.json")) {
    const OverlapRecord rec = overlap_asymptotics(complex_of(row["alpha"]), complex_of(row["beta"]), row["N"].get<int>());
    const cplx expected = complex_of(row["exact"]);
    EXPECT_LT(std::abs(rec.exact - expected) / std::abs(expected), 1e-10);
    EXPECT_LT(rec.route_gap, 1e-10);
    EXPECT_LT(relative_error(rec.limit, row["limit"].get<double>()), 1e-14);
  }
}

TEST(Overlap, ClosedFormAtEqualArgumentsIsOne) {
  EXPECT_NEAR(std::abs(overlap_closed_form(cplx(0.4, 0.2), cplx(0.4, 0.2), 50) - 1.0), 0.0, 1e-13);
}

TEST(PowerLaw, RecoversExactRate) {
  const std::vector<double> N{10, 100, 1000};
  const PowerLawFit fit = fit_power_law(N, {3.0 / 10, 3.0 / 100, 3.0 / 1000});
  EXPECT_NEAR(fit.rate, 1.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_THROW(fit_power_law(N, {1.0}), Error);
}
