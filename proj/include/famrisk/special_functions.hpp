#pragma once

// Numerical kernel for the beta family: log-gamma, log-beta, the regularized
// incomplete beta function and its inverse, and the beta density.

namespace famrisk {

// Shape parameters of a beta distribution. Both must be strictly positive and
// finite; the constructor throws DomainError otherwise.
class BetaParams {
 public:
  BetaParams(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  friend bool operator==(const BetaParams&, const BetaParams&) = default;

 private:
  double alpha_;
  double beta_;
};

/// ln Gamma(x) for x > 0. Shifted Stirling series; absolute error below
/// 1e-14 near the zeros at x = 1, 2 and relative error near machine
/// precision elsewhere.
double log_gamma(double x);

/// ln B(alpha, beta).
double log_beta(const BetaParams& p);

/// Beta density at x in [0,1].
///
/// At the endpoints the density is 0, finite, or unbounded depending on the
/// shape: for alpha < 1 at x = 0 (or beta < 1 at x = 1) the function returns
/// +infinity as the "unbounded" signal. Throws DomainError for x outside [0,1].
double beta_pdf(double x, const BetaParams& p);

/// Regularized incomplete beta I_x(alpha, beta), i.e. the beta CDF.
/// Continued fraction (modified Lentz) with the usual reflection
/// I_x(a,b) = 1 - I_{1-x}(b,a) when x > (a+1)/(a+b+2).
double reg_inc_beta(double x, const BetaParams& p);

/// Upper tail 1 - I_x(alpha, beta) without cancellation.
double reg_inc_beta_complement(double x, const BetaParams& p);

/// Beta quantile: the x with I_x(alpha, beta) = u.
/// Safeguarded Newton iteration inside a shrinking bisection bracket.
double inv_reg_inc_beta(double u, const BetaParams& p);

}  // namespace famrisk
