#include "famrisk/dichotomous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "famrisk/errors.hpp"

namespace famrisk {

namespace {

// FRR - 1 in closed form, free of cancellation near irr = 1:
//   FRR1 - 1 = q(1-q) d^2 / (1 + q d)^2
//   FRR2 - 1 = q(1-q) d^2 (d + 2) / ((1 + q d)(1 + q d (d + 2)))
// with d = irr - 1.
double excess_one(double q, double d) {
  const double mean = 1.0 + q * d;
  return q * (1.0 - q) * d * d / (mean * mean);
}

double excess_two(double q, double d) {
  return q * (1.0 - q) * d * d * (d + 2.0) /
         ((1.0 + q * d) * (1.0 + q * d * (d + 2.0)));
}

double excess_at(double q, double irr, Affected affected) {
  const double d = irr - 1.0;
  return affected == Affected::One ? excess_one(q, d) : excess_two(q, d);
}

double frr_at(double q, double irr, Affected affected) {
  return 1.0 + excess_at(q, irr, affected);
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
double logit(double q) { return std::log(q / (1.0 - q)); }
// log(1 + e^x)
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Solver coordinates: s = log(irr - 1), t = logit(q).
struct Point {
  double irr;
  double q;
};

Point from_coordinates(const Eigen::Vector2d& z) {
  return {1.0 + std::exp(z(0)), logistic(z(1))};
}

struct Targets {
  double frr1;
  double frr2;
  double log_excess1;
  double log_excess2;
};

// Newton residual: log of each FRR excess minus the log of its target.
// Near-linear in (s, t), so well scaled from FRR - 1 ~ 1e-8 to the supremum.
Eigen::Vector2d log_residual(const Eigen::Vector2d& z, const Targets& target) {
  const double d = std::exp(z(0));
  const double q = logistic(z(1));
  const double log_q1q = -softplus(-z(1)) - softplus(z(1));
  const double common = log_q1q + 2.0 * z(0) - std::log1p(q * d);
  return {common - std::log1p(q * d) - target.log_excess1,
          common + std::log(d + 2.0) - std::log1p(q * d * (d + 2.0)) -
              target.log_excess2};
}

// Residual on the FRR scale.
double absolute_residual(const Eigen::Vector2d& z, const Targets& target) {
  const Point p = from_coordinates(z);
  const double d = std::exp(z(0));
  const Eigen::Vector2d r(excess_one(p.q, d) - (target.frr1 - 1.0),
                          excess_two(p.q, d) - (target.frr2 - 1.0));
  return r.allFinite() ? r.norm() : std::numeric_limits<double>::infinity();
}

bool finite(const Eigen::Vector2d& v) { return v.allFinite(); }

struct StartResult {
  Eigen::Vector2d z;
  double norm;
  double log_norm;
  int iterations;
};

StartResult damped_newton(Eigen::Vector2d z, const Targets& target,
                          const SolverOptions& options) {
  constexpr double kStep = 1e-6;
  constexpr double kMaxStep = 4.0;
  Eigen::Vector2d f = log_residual(z, target);
  double norm = finite(f) ? f.norm() : std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < options.max_iterations && std::isfinite(norm); ++iter) {
    if (norm <= 1e-15) break;
    Eigen::Matrix2d jacobian;
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d plus = z, minus = z;
      plus(k) += kStep;
      minus(k) -= kStep;
      jacobian.col(k) =
          (log_residual(plus, target) - log_residual(minus, target)) / (2.0 * kStep);
    }
    if (!jacobian.allFinite()) break;
    const Eigen::FullPivLU<Eigen::Matrix2d> lu(jacobian);
    if (!lu.isInvertible()) break;
    Eigen::Vector2d step = lu.solve(-f);
    if (!finite(step)) break;
    const double length = step.lpNorm<Eigen::Infinity>();
    if (length > kMaxStep) step *= kMaxStep / length;

    double lambda = 1.0;
    bool improved = false;
    while (lambda > 1e-10) {
      const Eigen::Vector2d trial = z + lambda * step;
      const Eigen::Vector2d f_trial = log_residual(trial, target);
      if (finite(f_trial) && f_trial.norm() < norm) {
        z = trial;
        f = f_trial;
        norm = f_trial.norm();
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  return {z, absolute_residual(z, target), norm, iter};
}

bool distinct(const Point& a, const Point& b) {
  auto rel = [](double x, double y) {
    return std::abs(x - y) / std::max(std::abs(x), std::abs(y));
  };
  return rel(a.irr, b.irr) > 1e-4 || rel(a.q, b.q) > 1e-4;
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite");
  }
}

void require_open_probability(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("q must lie in (0, 1), got " + std::to_string(q));
  }
}

}  // namespace

DichotomousRiskModel::DichotomousRiskModel(double q, double irr,
                                           std::optional<double> low_risk)
    : q_(q), irr_(irr), low_risk_(low_risk) {
  require_open_probability(q);
  if (!(irr >= 1.0) || !std::isfinite(irr)) {
    throw DomainError("irr must be a finite value >= 1, got " +
                      std::to_string(irr));
  }
  if (low_risk) {
    const double pl = *low_risk;
    if (!(pl > 0.0 && pl <= 1.0)) {
      throw DomainError("low_risk must lie in (0, 1]");
    }
    if (irr * pl > 1.0) {
      throw DomainError("irr * low_risk must not exceed 1");
    }
  }
}

double DichotomousRiskModel::high_risk() const {
  if (!low_risk_) throw DomainError("model has no absolute low-group risk");
  return irr_ * *low_risk_;
}

double DichotomousRiskModel::mean_risk() const {
  return q_ * high_risk() + (1.0 - q_) * *low_risk_;
}

DichotomousRiskModel DichotomousRiskModel::with_population_risk(
    double q, double irr, double population_risk) {
  return DichotomousRiskModel(q, irr, population_risk / (q * irr + 1.0 - q));
}

double frr_one_affected(const DichotomousRiskModel& model) {
  return frr_at(model.q(), model.irr(), Affected::One);
}

double frr_two_affected(const DichotomousRiskModel& model) {
  return frr_at(model.q(), model.irr(), Affected::Two);
}

double frr(const DichotomousRiskModel& model, Affected affected) {
  return frr_at(model.q(), model.irr(), affected);
}

double frr_supremum(double q, Affected) {
  require_open_probability(q);
  return 1.0 / q;
}

RiskStructureSolution solve_risk_structure(double frr1, double frr2,
                                           const SolverOptions& options) {
  require_finite(frr1, "frr1");
  require_finite(frr2, "frr2");
  if (frr1 < 1.0 || frr2 < 1.0) {
    throw DomainError("FRRs are at least 1, got FRR1=" + std::to_string(frr1) +
                      ", FRR2=" + std::to_string(frr2));
  }
  if (frr1 == 1.0 && frr2 == 1.0) {
    RiskStructureSolution degenerate;
    degenerate.irr = 1.0;
    degenerate.q = std::numeric_limits<double>::quiet_NaN();
    degenerate.degenerate = true;
    return degenerate;
  }

  const int n = std::max(options.grid_size, 2);
  const double s_lo = std::log(1e-2), s_hi = std::log(1e4);
  const double t_lo = logit(1e-5), t_hi = logit(0.99);
  auto grid_point = [&](int i, int j) {
    return Eigen::Vector2d(s_lo + (s_hi - s_lo) * i / (n - 1),
                           t_lo + (t_hi - t_lo) * j / (n - 1));
  };

  auto infeasible = [&](double best_residual) {
    std::ostringstream msg;
    msg << "no (irr, q) reproduces FRR1=" << frr1 << ", FRR2=" << frr2
        << " (best residual " << best_residual << ")";
    return InfeasibleError(msg.str(), best_residual);
  };

  const Targets target{frr1, frr2, std::log(frr1 - 1.0), std::log(frr2 - 1.0)};

  // FRR2 > FRR1 for every model with irr > 1, so these pairs have no root
  // (equal FRRs are approached only as irr -> infinity at q = 1/FRR).
  if (frr2 <= frr1) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        best = std::min(best, absolute_residual(grid_point(i, j), target));
      }
    }
    throw infeasible(best);
  }

  std::vector<StartResult> roots;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const StartResult r = damped_newton(grid_point(i, j), target, options);
      best = std::min(best, r.norm);
      if (r.norm <= options.tolerance && r.log_norm <= 1e-10) roots.push_back(r);
    }
  }

  if (roots.empty()) throw infeasible(best);

  std::vector<StartResult> clusters;
  for (const auto& r : roots) {
    const Point p = from_coordinates(r.z);
    auto same = std::find_if(clusters.begin(), clusters.end(), [&](const auto& c) {
      return !distinct(p, from_coordinates(c.z));
    });
    if (same == clusters.end()) {
      clusters.push_back(r);
    } else if (r.norm < same->norm) {
      *same = r;
    }
  }
  if (clusters.size() > 1) {
    std::ostringstream msg;
    msg << "FRR1=" << frr1 << ", FRR2=" << frr2 << " admit "
        << clusters.size() << " distinct solutions:";
    for (const auto& c : clusters) {
      const Point p = from_coordinates(c.z);
      msg << " (irr=" << p.irr << ", q=" << p.q << ")";
    }
    throw AmbiguityError(msg.str());
  }

  const Point p = from_coordinates(clusters.front().z);
  RiskStructureSolution solution;
  solution.irr = p.irr;
  solution.q = p.q;
  solution.residual_norm = clusters.front().norm;
  solution.iterations = clusters.front().iterations;
  return solution;
}

double irr_given_frr(double q, double target, Affected affected) {
  require_open_probability(q);
  require_finite(target, "frr");
  if (target < 1.0) {
    throw DomainError("frr must be >= 1, got " + std::to_string(target));
  }
  if (target == 1.0) return 1.0;
  const double supremum = 1.0 / q;
  if (target >= supremum) {
    std::ostringstream msg;
    msg << "FRR " << target << " is unattainable at q=" << q
        << ": the FRR stays below " << supremum << " for every irr";
    throw InfeasibleError(msg.str(), supremum);
  }

  // Bisection on s = log(irr - 1); the map is increasing in irr.
  const double target_excess = target - 1.0;
  auto value = [&](double s) { return excess_at(q, 1.0 + std::exp(s), affected); };
  double lo = -40.0;
  double hi = 0.0;
  while (value(hi) < target_excess) {
    lo = hi;
    hi += 10.0;
    if (hi > 200.0) {
      std::ostringstream msg;
      msg << "FRR " << target << " is numerically indistinguishable from the "
          << "supremum " << supremum << " at q=" << q;
      throw InfeasibleError(msg.str(), supremum);
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi));
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) < target_excess ? lo : hi) = mid;
  }
  return 1.0 + std::exp(0.5 * (lo + hi));
}

FrrSeries frr_curve(SweepVariable sweep, const Eigen::ArrayXd& grid,
                    double fixed, Affected affected) {
  FrrSeries series{grid, Eigen::ArrayXd(grid.size())};
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const DichotomousRiskModel model =
        sweep == SweepVariable::Irr ? DichotomousRiskModel(fixed, grid(i))
                                    : DichotomousRiskModel(grid(i), fixed);
    series.frr(i) = frr(model, affected);
  }
  return series;
}

PeakLocation peak_q(double irr, Affected affected) {
  if (!(irr > 1.0) || !std::isfinite(irr)) {
    throw DomainError("peak_q requires irr > 1, got " + std::to_string(irr));
  }
  // The curve is unimodal, so the peak is the sign change of the slope of
  // log(FRR - 1). Bisecting that sign over t = logit(q) resolves q to full
  // precision, where a search on the flat maximum stalls near sqrt(eps).
  const double d = irr - 1.0;
  auto slope_sign = [&](double t) {
    const double q = logistic(t);
    const double shared = 1.0 - 2.0 * q;
    const double pull = affected == Affected::One
                            ? 2.0 * d / (1.0 + q * d)
                            : d / (1.0 + q * d) + d * (d + 2.0) / (1.0 + q * d * (d + 2.0));
    return shared - q * (1.0 - q) * pull;
  };
  double a = logit(1e-12), b = logit(1.0 - 1e-12);
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (slope_sign(mid) > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  const double q_star = logistic(0.5 * (a + b));
  return {q_star, frr_at(q_star, irr, affected)};
}

}  // namespace famrisk
