#pragma once

#include <functional>

namespace famrisk {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b] to absolute
// tolerance `abs_tol`. Intervals are bisected until the Kronrod-Gauss
// difference meets their share of the tolerance or `max_depth` is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth = 40);

}  // namespace famrisk
