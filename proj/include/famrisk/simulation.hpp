#pragma once

// Monte Carlo family registry: one risk level per family, members diseased
// independently given that level. Used as a brute-force check of the
// analytic FRR and Gini formulas.

#include <cstdint>
#include <variant>

#include "famrisk/beta_risk.hpp"
#include "famrisk/dichotomous.hpp"

namespace famrisk {

struct SimulationConfig {
  // The dichotomous model must carry low_risk.
  std::variant<DichotomousRiskModel, BetaRiskModel> risk_model;
  int family_size = 3;
  std::int64_t n_families = 1'000'000;
  std::uint64_t root_seed = 1;
  // Seed-split replicates used for standard errors.
  int n_batches = 100;
};

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  // False when no conditioning event occurred; value and standard_error are
  // NaN then.
  bool defined = false;
};

struct SimulationOutcome {
  Estimate frr_one;
  Estimate frr_two;
  double empirical_mean_risk = 0.0;
  double disease_rate = 0.0;
  Estimate empirical_gini;
  // Ordered (target, conditioner) pairs with a diseased conditioner.
  std::int64_t conditioning_events_one = 0;
  // (target, conditioner pair) triples with both conditioners diseased.
  std::int64_t conditioning_events_two = 0;
};

/// Simulates `config.n_families` families. FRR1 averages over ordered
/// (target, conditioner) pairs within each family, FRR2 over (target, pair of
/// conditioners). Batches use seeds derived from root_seed and are merged in
/// batch order, so the outcome does not depend on scheduling. Throws
/// DomainError for an invalid configuration.
SimulationOutcome simulate(const SimulationConfig& config);

/// Gini index estimated as mean|X - Y| / (2 * mean) over n independent pairs
/// of risk draws, with a delta-method standard error.
Estimate estimate_gini_by_sampling(const BetaRiskModel& model, std::int64_t n,
                                   std::uint64_t seed);

}  // namespace famrisk
