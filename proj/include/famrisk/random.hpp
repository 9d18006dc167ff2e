#pragma once

#include <cstdint>
#include <random>

#include "famrisk/special_functions.hpp"

namespace famrisk {

// SplitMix64 mixing of (root, index): independent per-task seeds from one
// root seed.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept;

// Seeded variate generator on top of std::mt19937_64. The uniform, normal,
// gamma and beta transforms are implemented here, so a given seed yields the
// same stream on every standard library.
//
// Single consumer: one instance per thread or task.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  // Standard normal (Marsaglia polar method).
  double normal();

  // Gamma(shape, 1), returned on the log scale so that small shapes do not
  // underflow. Marsaglia-Tsang squeeze; shapes below one use
  // Gamma(a) = Gamma(a+1) * U^(1/a).
  double log_gamma_variate(double shape);

  // Beta(alpha, beta) as G1 / (G1 + G2) with independent gamma draws.
  double beta(const BetaParams& p);

  bool bernoulli(double probability) { return uniform() < probability; }

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace famrisk
