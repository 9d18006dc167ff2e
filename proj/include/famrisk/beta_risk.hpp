#pragma once

// Continuous risk model: the family risk level P is Beta(alpha, beta)
// distributed, with FRR = E[P^2] / E[P]^2 = 1 + CV^2.

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "famrisk/special_functions.hpp"

namespace famrisk {

// Either a proper beta distribution or, for FRR = 1, a point mass at the
// mean risk (zero variance cannot be represented by finite shapes).
class BetaRiskModel {
 public:
  explicit BetaRiskModel(const BetaParams& params);

  // Zero-variance model: every family has risk `mean`.
  static BetaRiskModel point_mass(double mean);

  bool is_point_mass() const noexcept { return !params_.has_value(); }
  // Throws DomainError for a point-mass model.
  const BetaParams& params() const;

  double mean() const noexcept { return mean_; }

  // Risk level below which a fraction u of families lies.
  double quantile(double u) const;

 private:
  BetaRiskModel(std::optional<BetaParams> params, double mean);

  std::optional<BetaParams> params_;
  double mean_;
};

/// Beta model with mean `mu` and FRR `frr`:
/// alpha = (1 - mu) / (frr - 1) - mu, beta = alpha (1 - mu) / mu.
/// frr = 1 gives the point mass. Throws InfeasibleError when frr >= 1/mu,
/// since E[P^2] <= E[P] for P in [0,1]; DomainError for mu outside (0,1) or
/// frr < 1.
BetaRiskModel fit_from_risk_and_frr(double mu, double frr);

/// alpha / (alpha + beta)
double mean_risk(const BetaRiskModel& model);
/// beta / (alpha (alpha + beta + 1))
double cv_squared(const BetaRiskModel& model);
/// 1 + cv_squared
double frr_of(const BetaRiskModel& model);

/// Lorenz ordinate: share of the total disease burden carried by the
/// fraction u of families at lowest risk, I_{Q(u)}(alpha + 1, beta).
double lorenz_at(const BetaRiskModel& model, double u);

struct LorenzCurve {
  Eigen::ArrayXd population_fraction;
  Eigen::ArrayXd burden_fraction;
  double gini = 0.0;
};

/// Lorenz curve on `points` equally spaced population fractions in [0,1],
/// together with the Gini index.
LorenzCurve lorenz_curve(const BetaRiskModel& model, int points = 1001);

/// Gini index 1 - 2 * integral of the Lorenz curve, by adaptive quadrature
/// on panels refined geometrically towards u = 1.
double gini(const BetaRiskModel& model);

/// Burden share of the top fraction f of families by risk: 1 - L(1 - f).
double top_share(const BetaRiskModel& model, double fraction);

/// Mean risk in the top fraction f divided by the mean risk in the rest.
double mean_risk_ratio(const BetaRiskModel& model, double fraction);

/// Median risk in the top fraction f, Q(1 - f/2), divided by the median
/// risk in the rest, Q((1 - f)/2).
double median_risk_ratio(const BetaRiskModel& model, double fraction);

/// n independent family risk draws, deterministic per seed.
Eigen::VectorXd sample_risks(const BetaRiskModel& model, int n,
                             std::uint64_t seed);

}  // namespace famrisk
