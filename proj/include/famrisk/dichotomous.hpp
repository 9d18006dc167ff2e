#pragma once

// Two-group risk model: a fraction q of families is at high risk, IRR times
// the risk of the low-risk group. All members of a family share the group.

#include <optional>
#include <utility>

#include <Eigen/Core>

namespace famrisk {

// Number of affected relatives conditioned on.
enum class Affected { One = 1, Two = 2 };

class DichotomousRiskModel {
 public:
  // Throws DomainError unless 0 < q < 1, irr >= 1, and, when given,
  // low_risk is a probability with irr * low_risk <= 1.
  DichotomousRiskModel(double q, double irr,
                       std::optional<double> low_risk = std::nullopt);

  double q() const noexcept { return q_; }
  double irr() const noexcept { return irr_; }
  const std::optional<double>& low_risk() const noexcept { return low_risk_; }

  // p_h = irr * p_l; requires low_risk.
  double high_risk() const;
  // Population-average risk q p_h + (1-q) p_l; requires low_risk.
  double mean_risk() const;

  // Model whose low-group risk is set so the population risk equals
  // `population_risk`.
  static DichotomousRiskModel with_population_risk(double q, double irr,
                                                   double population_risk);

 private:
  double q_;
  double irr_;
  std::optional<double> low_risk_;
};

/// FRR given one affected relative:
/// (q IRR^2 + 1 - q) / (q IRR + 1 - q)^2. Does not depend on low_risk.
double frr_one_affected(const DichotomousRiskModel& model);

/// FRR given two affected relatives:
/// (q IRR^3 + 1 - q) / ((q IRR + 1 - q)(q IRR^2 + 1 - q)).
double frr_two_affected(const DichotomousRiskModel& model);

double frr(const DichotomousRiskModel& model, Affected affected);

/// Least upper bound of the FRR over irr at fixed q. Both maps increase
/// monotonically in irr towards 1/q without reaching it.
double frr_supremum(double q, Affected affected);

struct RiskStructureSolution {
  double irr = 1.0;
  // NaN when `degenerate`.
  double q = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  // frr1 = frr2 = 1: no heterogeneity, so q is not identified.
  bool degenerate = false;
};

struct SolverOptions {
  double tolerance = 1e-9;
  int max_iterations = 200;
  int grid_size = 50;
};

/// Solves FRR1(q, irr) = frr1 and FRR2(q, irr) = frr2 for (irr, q).
///
/// Damped Newton in (log(irr - 1), logit q) with a central-difference
/// Jacobian, started from every node of a grid_size x grid_size grid.
/// Converged roots are clustered; more than one distinct root raises
/// AmbiguityError. No root raises InfeasibleError carrying the best residual.
/// frr1 = frr2 = 1 returns a degenerate solution with irr = 1.
RiskStructureSolution solve_risk_structure(double frr1, double frr2,
                                           const SolverOptions& options = {});

/// The irr >= 1 at which the selected forward map equals `frr` at fixed q.
/// Throws InfeasibleError (best_residual = supremum) when frr >= 1/q.
double irr_given_frr(double q, double frr, Affected affected);

enum class SweepVariable { Irr, Q };

struct FrrSeries {
  Eigen::ArrayXd abscissa;
  Eigen::ArrayXd frr;
};

/// Forward map evaluated over `grid`, holding the other parameter at `fixed`.
FrrSeries frr_curve(SweepVariable sweep, const Eigen::ArrayXd& grid,
                    double fixed, Affected affected);

struct PeakLocation {
  double q_star = 0.0;
  double frr_max = 1.0;
};

/// Golden-section search for the q maximizing the forward map at fixed irr.
PeakLocation peak_q(double irr, Affected affected);

}  // namespace famrisk
