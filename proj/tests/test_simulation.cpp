#include <cmath>

#include <gtest/gtest.h>

#include "famrisk/errors.hpp"
#include "famrisk/simulation.hpp"

using namespace famrisk;

namespace {

SimulationConfig dichotomous_config(double q, double irr, double low_risk,
                                    std::int64_t families, std::uint64_t seed) {
  SimulationConfig config{DichotomousRiskModel(q, irr, low_risk)};
  config.n_families = families;
  config.root_seed = seed;
  return config;
}

void expect_within_3se(const Estimate& e, double expected) {
  ASSERT_TRUE(e.defined);
  EXPECT_GT(e.standard_error, 0.0);
  EXPECT_NEAR(e.value, expected, 3.0 * e.standard_error)
      << "estimate " << e.value << " +- " << e.standard_error;
}

}  // namespace

TEST(Simulate, NoHeterogeneityGivesUnitFrr) {
  const auto out = simulate(dichotomous_config(0.2, 1.0, 0.05, 1'000'000, 1));
  expect_within_3se(out.frr_one, 1.0);
  expect_within_3se(out.frr_two, 1.0);
  EXPECT_NEAR(out.disease_rate, 0.05, 3.0 * std::sqrt(0.05 * 0.95 / 3e6));
  EXPECT_NEAR(out.empirical_mean_risk, 0.05, 1e-12);
}

TEST(Simulate, ReproducesAnalyticFrr) {
  const auto model = DichotomousRiskModel::with_population_risk(0.027, 12.2, 0.05);
  SimulationConfig config{model};
  config.n_families = 2'000'000;
  config.root_seed = 2;
  const auto out = simulate(config);
  expect_within_3se(out.frr_one, frr_one_affected(model));
  expect_within_3se(out.frr_two, frr_two_affected(model));
  EXPECT_GT(out.conditioning_events_one, 0);
  EXPECT_GT(out.conditioning_events_two, 0);
}

TEST(Simulate, BetaModelFrrAndGini) {
  const auto model = fit_from_risk_and_frr(0.05, 2.3);
  SimulationConfig config{model};
  config.n_families = 1'000'000;
  config.root_seed = 3;
  const auto out = simulate(config);
  // For a beta model FRR2 = E[P^3] / (E[P] E[P^2]).
  const double a = model.params().alpha(), b = model.params().beta();
  const double m1 = a / (a + b);
  const double m2 = m1 * (a + 1) / (a + b + 1);
  const double m3 = m2 * (a + 2) / (a + b + 2);
  expect_within_3se(out.frr_one, frr_of(model));
  expect_within_3se(out.frr_two, m3 / (m1 * m2));
  expect_within_3se(out.empirical_gini, gini(model));
}

TEST(Simulate, ParkinsonGini) {
  // 0.55 is a rounded value; the standard error at 10^6 families is ~5e-4,
  // so the 3-SE check is made against the unrounded Gini.
  const BetaRiskModel model(BetaParams(0.75, 74));
  SimulationConfig config{model};
  config.n_families = 1'000'000;
  config.root_seed = 4;
  const auto out = simulate(config);
  expect_within_3se(out.empirical_gini, gini(model));
  EXPECT_NEAR(out.empirical_gini.value, 0.55, 0.005);
}

TEST(Simulate, Deterministic) {
  const auto config = dichotomous_config(0.1, 5.2, 0.02, 200'000, 77);
  const auto a = simulate(config);
  const auto b = simulate(config);
  EXPECT_EQ(a.frr_one.value, b.frr_one.value);
  EXPECT_EQ(a.frr_one.standard_error, b.frr_one.standard_error);
  EXPECT_EQ(a.frr_two.value, b.frr_two.value);
  EXPECT_EQ(a.empirical_gini.value, b.empirical_gini.value);
  EXPECT_EQ(a.conditioning_events_two, b.conditioning_events_two);
  const auto c = simulate(dichotomous_config(0.1, 5.2, 0.02, 200'000, 78));
  EXPECT_NE(a.frr_one.value, c.frr_one.value);
}

TEST(Simulate, StandardErrorShrinksWithSampleSize) {
  const auto small = simulate(dichotomous_config(0.1, 5.2, 0.05, 1'000'000, 5));
  const auto large = simulate(dichotomous_config(0.1, 5.2, 0.05, 2'000'000, 6));
  const double ratio = small.frr_one.standard_error / large.frr_one.standard_error;
  EXPECT_NEAR(ratio, std::sqrt(2.0), 0.2 * std::sqrt(2.0));
}

TEST(Simulate, FrrInvariantToLowRisk) {
  const double expected = frr_one_affected({0.025, 8.2});
  const auto low = simulate(dichotomous_config(0.025, 8.2, 0.001, 4'000'000, 7));
  const auto high = simulate(dichotomous_config(0.025, 8.2, 0.01, 1'000'000, 8));
  expect_within_3se(low.frr_one, expected);
  expect_within_3se(high.frr_one, expected);
  const double combined_se = std::hypot(low.frr_one.standard_error,
                                        high.frr_one.standard_error);
  EXPECT_NEAR(low.frr_one.value, high.frr_one.value, 3.0 * combined_se);
}

TEST(Simulate, UndefinedWithoutConditioningEvents) {
  const auto out = simulate(dichotomous_config(0.5, 1.0, 1e-12, 1000, 9));
  EXPECT_FALSE(out.frr_one.defined);
  EXPECT_TRUE(std::isnan(out.frr_one.value));
  EXPECT_FALSE(out.frr_two.defined);
  EXPECT_EQ(out.conditioning_events_one, 0);
}

TEST(Simulate, PairFamiliesHaveNoSecondOrderEstimate) {
  auto config = dichotomous_config(0.1, 5.0, 0.1, 100'000, 10);
  config.family_size = 2;
  const auto out = simulate(config);
  EXPECT_TRUE(out.frr_one.defined);
  EXPECT_FALSE(out.frr_two.defined);
}

TEST(Simulate, RejectsInvalidConfig) {
  auto config = dichotomous_config(0.1, 5.0, 0.1, 1000, 1);
  config.family_size = 1;
  EXPECT_THROW(simulate(config), DomainError);
  config = dichotomous_config(0.1, 5.0, 0.1, 0, 1);
  EXPECT_THROW(simulate(config), DomainError);
  SimulationConfig no_low{DichotomousRiskModel(0.1, 5.0)};
  EXPECT_THROW(simulate(no_low), DomainError);
}

TEST(EstimateGiniBySampling, PointMassIsZero) {
  const auto e = estimate_gini_by_sampling(BetaRiskModel::point_mass(0.1), 1000, 1);
  EXPECT_EQ(e.value, 0.0);
  EXPECT_TRUE(e.defined);
}

TEST(EstimateGiniBySampling, UniformIsOneThird) {
  const auto e = estimate_gini_by_sampling(BetaRiskModel(BetaParams(1, 1)), 1'000'000, 2);
  expect_within_3se(e, 1.0 / 3.0);
}

TEST(EstimateGiniBySampling, BreastCancer) {
  const auto e = estimate_gini_by_sampling(BetaRiskModel(BetaParams(0.98, 7.19)),
                                           1'000'000, 3);
  expect_within_3se(e, gini(BetaRiskModel(BetaParams(0.98, 7.19))));
  EXPECT_NEAR(e.value, 0.47, 0.005);
}

TEST(EstimateGiniBySampling, MatchesQuadratureGini) {
  for (const auto& [mu, frr] : {std::pair{0.01, 2.3}, std::pair{0.002, 12.0},
                                std::pair{0.3, 2.24}}) {
    const auto model = fit_from_risk_and_frr(mu, frr);
    expect_within_3se(estimate_gini_by_sampling(model, 1'000'000, 4), gini(model));
  }
}

TEST(EstimateGiniBySampling, Deterministic) {
  const auto model = fit_from_risk_and_frr(0.01, 6.0);
  const auto a = estimate_gini_by_sampling(model, 10000, 11);
  const auto b = estimate_gini_by_sampling(model, 10000, 11);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.standard_error, b.standard_error);
  EXPECT_THROW(estimate_gini_by_sampling(model, 1, 1), DomainError);
}
