// Verification suites: every check passes on the shipped defaults, the
// entropy-flow oracle agrees with the collision engine far inside tolerance,
// and the regression check requires (rather than forbids) a violation.

#include <set>
#include <string>

#include <gtest/gtest.h>

#include "sqtr/verify.hpp"

using sqtr::CheckResult;
using sqtr::ScenarioConfig;

TEST(Verification, AllChecksPassOnDefaults) {
  const ScenarioConfig cfg;
  const auto checks = sqtr::run_verification(cfg, 0);
  ASSERT_EQ(checks.size(), 8u);
  std::set<std::string> names;
  for (const CheckResult& c : checks) {
    EXPECT_TRUE(c.pass) << c.invariant << ": residual " << c.residual
                        << " vs tolerance " << c.tolerance;
    EXPECT_TRUE(std::isfinite(c.residual)) << c.invariant;
    EXPECT_GT(c.tolerance, 0.0) << c.invariant;
    EXPECT_FALSE(c.detail.empty()) << c.invariant;
    names.insert(c.invariant);
  }
  EXPECT_EQ(names.size(), checks.size()) << "check names must be unique";
  EXPECT_TRUE(names.count("construction_equivalence"));
  EXPECT_TRUE(names.count("entropy_flow_oracle"));
  EXPECT_TRUE(names.count("first_order_entropy_scaling"));
  EXPECT_TRUE(names.count("collision_conservation"));
  EXPECT_TRUE(names.count("detuned_collision_regression"));
  EXPECT_TRUE(names.count("second_law_sweep"));
  EXPECT_TRUE(names.count("equilibrium_fixed_point"));
  EXPECT_TRUE(names.count("vacuum_relaxation"));
}

TEST(Verification, EntropyFlowOracleIsTightAtSmallerAngles) {
  ScenarioConfig cfg;
  cfg.collision.theta_c = 0.05;
  const CheckResult c = sqtr::check_entropy_flow_oracle(cfg);
  EXPECT_TRUE(c.pass);
  EXPECT_LE(c.residual, 1e-7);
}

TEST(Verification, ConservationHoldsAtMachinePrecision) {
  const ScenarioConfig cfg;
  const CheckResult c = sqtr::check_collision_conservation(cfg, 31337);
  EXPECT_TRUE(c.pass);
  EXPECT_LE(c.residual, 1e-12);
}

TEST(Verification, DetunedRegressionDemandsAViolation) {
  const ScenarioConfig cfg;
  const CheckResult c = sqtr::check_detuned_collision_regression(cfg);
  EXPECT_TRUE(c.pass);
  EXPECT_GT(c.residual, 1e-3);
}

TEST(Verification, SecondLawSweepIsSeedStableAndNonNegative) {
  const ScenarioConfig cfg;
  for (const std::uint64_t seed : {0ull, 7ull, 424242ull}) {
    const CheckResult c = sqtr::check_second_law_sweep(cfg, seed, 2000);
    EXPECT_TRUE(c.pass) << "seed " << seed;
    EXPECT_EQ(c.residual, 0.0) << "seed " << seed;
  }
}

TEST(Verification, ConstructionEquivalenceHonorsConfiguredTolerance) {
  ScenarioConfig cfg;
  cfg.oracle.tolerance = 1e-16;  // below the honest numerical agreement
  const CheckResult c = sqtr::check_construction_equivalence(cfg);
  EXPECT_FALSE(c.pass);
  EXPECT_GT(c.residual, 1e-16);
  EXPECT_LT(c.residual, 1e-8);
}

TEST(Verification, FirstOrderScalingRunsAtTheFixedDemonstrationPoint) {
  // The entropy-machinery self-test is config-independent by design: tying
  // it to arbitrary reservoirs would fail honestly for strongly squeezed
  // reference spectra, where the quadratic window degrades.
  ScenarioConfig a;
  ScenarioConfig b;
  b.reservoir.xi = 1.0;
  b.reservoir.beta0 = 0.5;
  const CheckResult ca = sqtr::check_first_order_entropy_scaling(a);
  const CheckResult cb = sqtr::check_first_order_entropy_scaling(b);
  EXPECT_TRUE(ca.pass) << "residual " << ca.residual;
  EXPECT_TRUE(cb.pass) << "residual " << cb.residual;
  EXPECT_DOUBLE_EQ(ca.residual, cb.residual);
}

TEST(Verification, VacuumRelaxationTracksConfiguredBudget) {
  ScenarioConfig cfg;
  cfg.collision.steps = 400;  // far too few collisions to converge
  const CheckResult c = sqtr::check_vacuum_relaxation(cfg);
  EXPECT_FALSE(c.pass);
  cfg.collision.steps = 2500;
  EXPECT_TRUE(sqtr::check_vacuum_relaxation(cfg).pass);
}
