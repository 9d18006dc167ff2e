#include "famrisk/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "famrisk/errors.hpp"

namespace famrisk {

namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178032973640562;

// B_{2k} / (2k (2k-1)), k = 1..8.
constexpr std::array<double, 8> kStirlingCoefficients = {
    1.0 / 12.0,         -1.0 / 360.0,  1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0,       -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0};

// Below this argument the Stirling series is evaluated at x + n instead.
constexpr double kStirlingThreshold = 15.0;

double stirling_log_gamma(double z) {
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv;
  for (double c : kStirlingCoefficients) {
    series += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLogTwoPi + series;
}

// Continued fraction for I_x(a,b), modified Lentz. Converges quickly for
// x < (a+1)/(a+b+2).
double incomplete_beta_fraction(double x, double a, double b) {
  constexpr int kMaxIterations = 20000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// x^a (1-x)^b / (a B(a,b)) times the continued fraction: the lower tail,
// valid on the side of the switch point where the fraction converges.
double lower_tail_direct(double x, double a, double b) {
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(BetaParams(a, b));
  return std::exp(log_front) * incomplete_beta_fraction(x, a, b) / a;
}

void check_probability(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " +
                      std::to_string(x));
  }
}

}  // namespace

BetaParams::BetaParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(beta)) {
    throw DomainError("beta shape parameters must be positive and finite, got (" +
                      std::to_string(alpha) + ", " + std::to_string(beta) + ")");
  }
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma requires a positive finite argument, got " +
                      std::to_string(x));
  }
  if (x >= kStirlingThreshold) return stirling_log_gamma(x);

  // Gamma(x) = Gamma(x + n) / (x (x+1) ... (x+n-1))
  double product = 1.0;
  double z = x;
  while (z < kStirlingThreshold) {
    product *= z;
    z += 1.0;
  }
  return stirling_log_gamma(z) - std::log(product);
}

double log_beta(const BetaParams& p) {
  return log_gamma(p.alpha()) + log_gamma(p.beta()) -
         log_gamma(p.alpha() + p.beta());
}

double beta_pdf(double x, const BetaParams& p) {
  check_probability(x, "beta_pdf argument");
  const double a = p.alpha();
  const double b = p.beta();
  if (x == 0.0) {
    if (a < 1.0) return std::numeric_limits<double>::infinity();
    if (a > 1.0) return 0.0;
    return std::exp(-log_beta(p));
  }
  if (x == 1.0) {
    if (b < 1.0) return std::numeric_limits<double>::infinity();
    if (b > 1.0) return 0.0;
    return std::exp(-log_beta(p));
  }
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                  log_beta(p));
}

double reg_inc_beta(double x, const BetaParams& p) {
  check_probability(x, "reg_inc_beta argument");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double a = p.alpha();
  const double b = p.beta();
  if (x < (a + 1.0) / (a + b + 2.0)) return lower_tail_direct(x, a, b);
  return 1.0 - lower_tail_direct(1.0 - x, b, a);
}

double reg_inc_beta_complement(double x, const BetaParams& p) {
  check_probability(x, "reg_inc_beta argument");
  if (x == 0.0) return 1.0;
  if (x == 1.0) return 0.0;
  const double a = p.alpha();
  const double b = p.beta();
  if (x < (a + 1.0) / (a + b + 2.0)) return 1.0 - lower_tail_direct(x, a, b);
  return lower_tail_direct(1.0 - x, b, a);
}

double inv_reg_inc_beta(double u, const BetaParams& p) {
  check_probability(u, "inv_reg_inc_beta probability");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;

  const double a = p.alpha();
  const double b = p.beta();
  // Residuals are taken on whichever tail holds the smaller probability so
  // that quantiles deep in either tail keep full relative precision.
  const bool lower = u <= 0.5;
  const double tail = lower ? u : 1.0 - u;
  auto residual = [&](double x) {
    return lower ? reg_inc_beta(x, p) - u : tail - reg_inc_beta_complement(x, p);
  };

  // Leading-order tail approximations: I_x ~ x^a / (a B) near 0 and
  // 1 - I_x ~ (1-x)^b / (b B) near 1.
  const double log_b = log_beta(p);
  double x;
  if (lower) {
    x = std::exp((std::log(tail * a) + log_b) / a);
  } else {
    x = -std::expm1((std::log(tail * b) + log_b) / b);
  }
  const double mean = a / (a + b);
  if (!(x > 0.0 && x < 1.0) || (lower && x > mean) || (!lower && x < mean)) {
    x = mean;
  }

  double lo = 0.0;
  double hi = 1.0;
  double previous_abs = std::numeric_limits<double>::infinity();
  bool force_bisection = false;
  const double tolerance = 1e-15 * tail;
  for (int iter = 0; iter < 1000; ++iter) {
    const double f = residual(x);
    if (std::abs(f) <= tolerance) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (std::nextafter(lo, hi) >= hi) {
      // Bracket at double resolution: the endpoint closer on the CDF scale.
      return std::abs(residual(lo)) <= std::abs(residual(hi)) ? lo : hi;
    }

    const double density = beta_pdf(x, p);
    double next = std::numeric_limits<double>::quiet_NaN();
    if (!force_bisection && density > 0.0 && std::isfinite(density)) {
      next = x - f / density;
    }
    if (!(next > lo && next < hi)) {
      // Bisection, geometric when the bracket spans orders of magnitude.
      if (lo == 0.0) {
        next = hi / 16.0;
      } else if (hi == 1.0) {
        next = 1.0 - (1.0 - lo) / 16.0;
      } else if (hi > 4.0 * lo) {
        next = std::sqrt(lo * hi);
      } else if (1.0 - lo > 4.0 * (1.0 - hi)) {
        next = 1.0 - std::sqrt((1.0 - lo) * (1.0 - hi));
      } else {
        next = 0.5 * (lo + hi);
      }
      if (!(next > lo && next < hi)) next = std::nextafter(lo, hi);
    } else if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() *
                                          std::min(x, 1.0 - x)) {
      return next;
    }
    force_bisection = std::abs(f) > 0.5 * previous_abs;
    previous_abs = std::abs(f);
    x = next;
  }
  return x;
}

}  // namespace famrisk
