#include "famrisk/random.hpp"

#include <cmath>

#include "famrisk/errors.hpp"

namespace famrisk {

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double v1, v2, s;
  do {
    v1 = 2.0 * uniform() - 1.0;
    v2 = 2.0 * uniform() - 1.0;
    s = v1 * v1 + v2 * v2;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v2 * scale;
  has_spare_ = true;
  return v1 * scale;
}

double Rng::log_gamma_variate(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma shape must be positive and finite");
  }
  if (shape < 1.0) {
    return log_gamma_variate(shape + 1.0) + std::log(uniform()) / shape;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 ||
        std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return std::log(d * v);
    }
  }
}

double Rng::beta(const BetaParams& p) {
  const double log_g1 = log_gamma_variate(p.alpha());
  const double log_g2 = log_gamma_variate(p.beta());
  // G1 / (G1 + G2) = 1 / (1 + exp(log G2 - log G1))
  return 1.0 / (1.0 + std::exp(log_g2 - log_g1));
}

}  // namespace famrisk
