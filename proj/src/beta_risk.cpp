#include "famrisk/beta_risk.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "famrisk/errors.hpp"
#include "famrisk/quadrature.hpp"
#include "famrisk/random.hpp"

namespace famrisk {

namespace {

void require_fraction(double f) {
  if (!(f > 0.0 && f < 1.0)) {
    throw DomainError("fraction must lie in (0, 1), got " + std::to_string(f));
  }
}

void require_unit_interval(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("population fraction must lie in [0, 1], got " +
                      std::to_string(u));
  }
}

// Number of geometric panels [1 - 2^-k, 1 - 2^-(k+1)] in the Gini integral.
constexpr int kGiniPanels = 45;
constexpr double kGiniTolerance = 1e-6;

// Burden share minus population share above the (1 - v) quantile, from
// I_x(a + 1, b) = I_x(a, b) - x^a (1 - x)^b / (a B(a, b)). The gap 1 - x is
// taken as a lower quantile of Beta(b, a) so it keeps full precision when x
// rounds to 1.
double upper_tail_excess(const BetaParams& p, double v) {
  const double gap = inv_reg_inc_beta(v, BetaParams(p.beta(), p.alpha()));
  // For a negligible gap I_gap(b, a) ~ gap^b / (b B(a, b)), so the term is v b / a.
  if (gap < 1e-100) return v * p.beta() / p.alpha();
  if (gap >= 1.0) return 0.0;
  const double log_term = p.alpha() * std::log1p(-gap) + p.beta() * std::log(gap) -
                          std::log(p.alpha()) - log_beta(p);
  return std::exp(log_term);
}

}  // namespace

BetaRiskModel::BetaRiskModel(const BetaParams& params)
    : params_(params), mean_(params.alpha() / (params.alpha() + params.beta())) {}

BetaRiskModel::BetaRiskModel(std::optional<BetaParams> params, double mean)
    : params_(params), mean_(mean) {}

BetaRiskModel BetaRiskModel::point_mass(double mean) {
  if (!(mean > 0.0 && mean < 1.0)) {
    throw DomainError("mean risk must lie in (0, 1), got " + std::to_string(mean));
  }
  return BetaRiskModel(std::nullopt, mean);
}

const BetaParams& BetaRiskModel::params() const {
  if (!params_) throw DomainError("point-mass model has no beta parameters");
  return *params_;
}

double BetaRiskModel::quantile(double u) const {
  require_unit_interval(u);
  if (!params_) return mean_;
  return inv_reg_inc_beta(u, *params_);
}

BetaRiskModel fit_from_risk_and_frr(double mu, double frr) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw DomainError("lifetime risk must lie in (0, 1), got " +
                      std::to_string(mu));
  }
  if (!(frr >= 1.0) || !std::isfinite(frr)) {
    throw DomainError("FRR must be a finite value >= 1, got " +
                      std::to_string(frr));
  }
  if (frr >= 1.0 / mu) {
    std::ostringstream msg;
    msg << "FRR " << frr << " is infeasible for lifetime risk " << mu
        << ": E[P^2] <= E[P] for P in [0,1] bounds the FRR below 1/mu = "
        << 1.0 / mu;
    throw InfeasibleError(msg.str(), 1.0 / mu);
  }
  if (frr == 1.0) return BetaRiskModel::point_mass(mu);
  const double alpha = (1.0 - mu) / (frr - 1.0) - mu;
  const double beta = alpha * (1.0 - mu) / mu;
  return BetaRiskModel(BetaParams(alpha, beta));
}

double mean_risk(const BetaRiskModel& model) { return model.mean(); }

double cv_squared(const BetaRiskModel& model) {
  if (model.is_point_mass()) return 0.0;
  const double a = model.params().alpha();
  const double b = model.params().beta();
  return b / (a * (a + b + 1.0));
}

double frr_of(const BetaRiskModel& model) { return 1.0 + cv_squared(model); }

double lorenz_at(const BetaRiskModel& model, double u) {
  require_unit_interval(u);
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;
  if (model.is_point_mass()) return u;
  const BetaParams& p = model.params();
  // The size-biased density p f(p) / mu is Beta(alpha + 1, beta).
  const double x = model.quantile(u);
  if (x <= 0.5) return reg_inc_beta(x, BetaParams(p.alpha() + 1.0, p.beta()));
  return u - upper_tail_excess(p, 1.0 - u);
}

LorenzCurve lorenz_curve(const BetaRiskModel& model, int points) {
  if (points < 2) throw DomainError("a Lorenz curve needs at least two points");
  LorenzCurve curve;
  curve.population_fraction = Eigen::ArrayXd::LinSpaced(points, 0.0, 1.0);
  curve.burden_fraction.resize(points);
  for (int i = 0; i < points; ++i) {
    curve.burden_fraction(i) = lorenz_at(model, curve.population_fraction(i));
  }
  curve.gini = gini(model);
  return curve;
}

double gini(const BetaRiskModel& model) {
  if (model.is_point_mass()) return 0.0;
  auto lorenz = [&](double u) { return lorenz_at(model, u); };
  const double panel_tol = kGiniTolerance / (4.0 * kGiniPanels);
  double area = 0.0;
  double left = 0.0;
  double width = 0.5;
  for (int k = 0; k < kGiniPanels; ++k) {
    area += integrate_adaptive(lorenz, left, left + width, panel_tol).value;
    left += width;
    width *= 0.5;
  }
  // Remaining sliver next to u = 1, where L is within 2^-45 of 1.
  area += 1.0 - left;
  return 1.0 - 2.0 * area;
}

double top_share(const BetaRiskModel& model, double fraction) {
  require_fraction(fraction);
  if (model.is_point_mass()) return fraction;
  const BetaParams& p = model.params();
  const double x = model.quantile(1.0 - fraction);
  if (x <= 0.5) {
    return reg_inc_beta_complement(x, BetaParams(p.alpha() + 1.0, p.beta()));
  }
  return fraction + upper_tail_excess(p, fraction);
}

double mean_risk_ratio(const BetaRiskModel& model, double fraction) {
  const double share = top_share(model, fraction);
  return (share / fraction) / ((1.0 - share) / (1.0 - fraction));
}

double median_risk_ratio(const BetaRiskModel& model, double fraction) {
  require_fraction(fraction);
  if (model.is_point_mass()) return 1.0;
  return model.quantile(1.0 - 0.5 * fraction) /
         model.quantile(0.5 * (1.0 - fraction));
}

Eigen::VectorXd sample_risks(const BetaRiskModel& model, int n,
                             std::uint64_t seed) {
  if (n < 1) throw DomainError("sample size must be at least 1");
  if (model.is_point_mass()) return Eigen::VectorXd::Constant(n, model.mean());
  Rng rng(seed);
  Eigen::VectorXd draws(n);
  for (int i = 0; i < n; ++i) draws(i) = rng.beta(model.params());
  return draws;
}

}  // namespace famrisk
