#include "famrisk/quadrature.hpp"

#include <array>
#include <cmath>

namespace famrisk {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd Kronrod nodes (indices 1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

QuadratureResult gauss_kronrod_15(const std::function<double(double)>& f,
                                  double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (std::size_t i = 0; i < kKronrodNodes.size(); ++i) {
    const double dx = half * kKronrodNodes[i];
    const double fsum = (i + 1 == kKronrodNodes.size())
                            ? f(center)
                            : f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

QuadratureResult refine(const std::function<double(double)>& f, double a,
                        double b, double tol, int depth,
                        const QuadratureResult& whole) {
  if (whole.error_estimate <= tol || depth <= 0) return whole;
  const double mid = 0.5 * (a + b);
  const auto left_estimate = gauss_kronrod_15(f, a, mid);
  const auto right_estimate = gauss_kronrod_15(f, mid, b);
  const auto left = refine(f, a, mid, 0.5 * tol, depth - 1, left_estimate);
  const auto right = refine(f, mid, b, 0.5 * tol, depth - 1, right_estimate);
  return {left.value + right.value, left.error_estimate + right.error_estimate};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth) {
  if (a == b) return {};
  return refine(f, a, b, abs_tol, max_depth, gauss_kronrod_15(f, a, b));
}

}  // namespace famrisk
