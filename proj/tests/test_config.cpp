#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "ssrc/config.hpp"
#include "ssrc/error.hpp"

using namespace ssrc;

namespace {

bool mentions(const ConfigParse& p, const std::string& text) {
  return std::any_of(p.violations.begin(), p.violations.end(),
                     [&](const std::string& v) { return v.find(text) != std::string::npos; });
}

}  // namespace

TEST(Config, MinimalCommutatorConfig) {
  const ConfigParse p = parse_config("experiment: commutator\ngrid:\n  N: [10, 100]\n  n_max: 5\n");
  ASSERT_TRUE(p.ok()) << p.violations.front();
  EXPECT_EQ(p.config.seed, kDefaultSeed);
  EXPECT_EQ(p.config.format, "csv");
  EXPECT_EQ(p.config.grid.N, (std::vector<int>{10, 100}));
  EXPECT_EQ(p.config.grid.n_max, (std::vector<int>{5}));
}

TEST(Config, DocumentedDefaultSeed) { EXPECT_EQ(kDefaultSeed, 0x55355243ULL); }

TEST(Config, HexAndDecimalSeeds) {
  EXPECT_EQ(parse_seed("0x10"), 16u);
  EXPECT_EQ(parse_seed("42"), 42u);
  EXPECT_EQ(parse_seed("010"), 10u);
  EXPECT_EQ(parse_seed("0xffffffffffffffff"), UINT64_MAX);
  EXPECT_THROW(parse_seed("-3"), Error);
  EXPECT_THROW(parse_seed("12abc"), Error);
  const ConfigParse p = parse_config("experiment: commutator\nseed: 0xdeadbeef\ngrid:\n  N: [10]\n  n_max: [1]\n");
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p.config.seed, 0xdeadbeefULL);
  EXPECT_TRUE(mentions(parse_config("experiment: commutator\nseed: banana\ngrid:\n  N: [10]\n  n_max: [1]\n"), "seed"));
}

TEST(Config, ComplexAlphaValues) {
  const ConfigParse p = parse_config("experiment: overlap\ngrid:\n  N: [50]\n  alpha: [1.0, [0.5, -0.25]]\n  beta: 0\n");
  ASSERT_TRUE(p.ok());
  ASSERT_EQ(p.config.grid.alpha.size(), 2u);
  EXPECT_EQ(p.config.grid.alpha[1], cplx(0.5, -0.25));
  EXPECT_EQ(p.config.grid.beta, (std::vector<cplx>{cplx(0.0)}));
  EXPECT_FALSE(parse_config("experiment: overlap\ngrid:\n  N: [50]\n  alpha: [[1, 2, 3]]\n  beta: 0\n").ok());
}

TEST(Config, EmptyGridIsRejected) {
  const ConfigParse p = parse_config("experiment: commutator\ngrid:\n  N: []\n  n_max: [2]\n");
  EXPECT_FALSE(p.ok());
  EXPECT_TRUE(mentions(p, "grid.N"));
}

TEST(Config, CollectsEveryViolation) {
  const ConfigParse p = parse_config(
      "experiment: convergence-displacement\nbogus: 1\noutput:\n  format: xml\ngrid:\n  N: [100, 10]\n"
      "  alpha: [20]\n  k: [5]\n  n_max: [3]\n");
  EXPECT_TRUE(mentions(p, "bogus"));
  EXPECT_TRUE(mentions(p, "format"));
  EXPECT_TRUE(mentions(p, "strictly increasing"));
  EXPECT_TRUE(mentions(p, "alpha"));
  EXPECT_TRUE(mentions(p, "k <= n_max"));
}

TEST(Config, UnknownExperimentAndSyntax) {
  EXPECT_TRUE(mentions(parse_config("experiment: teleport\ngrid:\n  N: [1]\n"), "unknown experiment"));
  EXPECT_TRUE(mentions(parse_config("experiment: [unclosed\n"), "YAML"));
  EXPECT_TRUE(mentions(parse_config("grid:\n  N: [1]\n"), "experiment"));
  EXPECT_FALSE(parse_config("- a\n- b\n").ok());
}

TEST(Config, DimensionCapReportsDimension) {
  const ConfigParse p =
      parse_config("experiment: cnot-feasibility\nrun:\n  dimension_cap: 50\ngrid:\n  N: [3]\n  restarts: [1]\n");
  EXPECT_TRUE(mentions(p, "dimension 84"));
}

TEST(Config, EncodingFeasibilityChecks) {
  EXPECT_TRUE(mentions(parse_config("experiment: encoding-feasibility\ngrid:\n  N: [1]\n  gates: [cnot]\n"), "cnot"));
  EXPECT_TRUE(mentions(
      parse_config("experiment: encoding-feasibility\ngrid:\n  N: [4]\n  gates: [x]\n  encoding: coherent-like\n"),
      "alpha"));
  EXPECT_TRUE(mentions(
      parse_config("experiment: encoding-feasibility\ngrid:\n  N: [4]\n  gates: [x]\n  grid_step: 1e-5\n"),
      "grid_step"));
  EXPECT_TRUE(parse_config("experiment: encoding-feasibility\ngrid:\n  N: [4]\n  gates: [\"ry:0.3\"]\n").ok());
}

TEST(Config, SynthesisChecks) {
  EXPECT_TRUE(mentions(parse_config("experiment: synthesis-bench\ngrid:\n  N: [2]\n  small_angle: [2.0]\n"),
                       "small_angle"));
  EXPECT_TRUE(mentions(parse_config("experiment: synthesis-complexity\ngrid:\n  N: [64]\n  fidelity_target: 0.9\n"),
                       "N <= 32"));
  EXPECT_TRUE(mentions(parse_config("experiment: synthesis-complexity\ngrid:\n  N: [4]\n"), "fidelity_target"));
}

TEST(Config, CanonicalYamlReparses) {
  const ConfigParse p = parse_config(
      "experiment: overlap\nseed: 7\ngrid:\n  N: [50, 60]\n  alpha: [[0.1, 0.2]]\n  beta: [-1]\n");
  ASSERT_TRUE(p.ok());
  const ConfigParse q = parse_config(config_to_yaml(p.config));
  ASSERT_TRUE(q.ok()) << q.violations.front();
  EXPECT_EQ(config_to_yaml(q.config), config_to_yaml(p.config));
  EXPECT_EQ(q.config.grid.alpha, p.config.grid.alpha);
}

TEST(Config, ShippedConfigsAreValid) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(SSRC_CONFIG_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    const ConfigParse p = load_config(entry.path().string());
    EXPECT_TRUE(p.ok()) << entry.path() << ": " << (p.ok() ? "" : p.violations.front());
    EXPECT_EQ(p.config.experiment, entry.path().stem().string());
    ++count;
  }
  EXPECT_EQ(count, static_cast<int>(experiment_names().size()));
}

TEST(Config, MissingFileIsIoError) {
  try {
    load_config("/nonexistent/config.yaml");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}
