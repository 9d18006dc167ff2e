#include "famrisk/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "famrisk/errors.hpp"
#include "famrisk/random.hpp"

namespace famrisk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct BatchTally {
  std::int64_t families = 0;
  std::int64_t diseased = 0;
  double risk_sum = 0.0;
  double abs_diff_sum = 0.0;
  std::int64_t risk_pairs = 0;
  // sum d(k-1) and sum d(d-1)
  std::int64_t one_denominator = 0;
  std::int64_t one_numerator = 0;
  // sum C(d,2)(k-2) and sum C(d,2)(d-2)
  std::int64_t two_denominator = 0;
  std::int64_t two_numerator = 0;

  BatchTally& operator+=(const BatchTally& o) {
    families += o.families;
    diseased += o.diseased;
    risk_sum += o.risk_sum;
    abs_diff_sum += o.abs_diff_sum;
    risk_pairs += o.risk_pairs;
    one_denominator += o.one_denominator;
    one_numerator += o.one_numerator;
    two_denominator += o.two_denominator;
    two_numerator += o.two_numerator;
    return *this;
  }
};

double draw_risk(const SimulationConfig& config, Rng& rng) {
  if (const auto* d = std::get_if<DichotomousRiskModel>(&config.risk_model)) {
    return rng.uniform() < d->q() ? d->high_risk() : *d->low_risk();
  }
  const auto& beta = std::get<BetaRiskModel>(config.risk_model);
  return beta.is_point_mass() ? beta.mean() : rng.beta(beta.params());
}

BatchTally run_batch(const SimulationConfig& config, std::int64_t families,
                     std::uint64_t seed) {
  Rng rng(seed);
  BatchTally tally;
  const std::int64_t k = config.family_size;
  double pending = 0.0;
  bool has_pending = false;
  for (std::int64_t f = 0; f < families; ++f) {
    const double risk = draw_risk(config, rng);
    tally.risk_sum += risk;
    if (has_pending) {
      tally.abs_diff_sum += std::abs(risk - pending);
      ++tally.risk_pairs;
    }
    pending = risk;
    has_pending = !has_pending;

    std::int64_t d = 0;
    for (std::int64_t m = 0; m < k; ++m) d += rng.bernoulli(risk) ? 1 : 0;
    tally.diseased += d;
    tally.one_denominator += d * (k - 1);
    tally.one_numerator += d * (d - 1);
    const std::int64_t pairs = d * (d - 1) / 2;
    tally.two_denominator += pairs * (k - 2);
    tally.two_numerator += pairs * std::max<std::int64_t>(d - 2, 0);
  }
  tally.families = families;
  return tally;
}

struct Ratios {
  double frr_one = kNaN;
  double frr_two = kNaN;
  double gini = kNaN;
};

Ratios ratios(const BatchTally& t, std::int64_t family_size) {
  Ratios r;
  const double members = static_cast<double>(t.families) * family_size;
  const double rate = t.diseased / members;
  if (t.one_denominator > 0 && rate > 0.0) {
    r.frr_one = (static_cast<double>(t.one_numerator) / t.one_denominator) / rate;
  }
  if (t.two_denominator > 0 && rate > 0.0) {
    r.frr_two = (static_cast<double>(t.two_numerator) / t.two_denominator) / rate;
  }
  if (t.risk_pairs > 0 && t.risk_sum > 0.0) {
    const double mean = t.risk_sum / t.families;
    r.gini = (t.abs_diff_sum / t.risk_pairs) / (2.0 * mean);
  }
  return r;
}

Estimate combine(double pooled, const std::vector<double>& batch_values) {
  if (std::isnan(pooled)) return {kNaN, kNaN, false};
  std::vector<double> defined;
  for (double v : batch_values) {
    if (!std::isnan(v)) defined.push_back(v);
  }
  double se = kNaN;
  if (defined.size() >= 2) {
    const Eigen::Map<const Eigen::ArrayXd> values(defined.data(),
                                                  static_cast<Eigen::Index>(defined.size()));
    const double n = static_cast<double>(defined.size());
    const double variance = (values - values.mean()).square().sum() / (n - 1.0);
    se = std::sqrt(variance / n);
  }
  return {pooled, se, true};
}

void validate(const SimulationConfig& config) {
  if (config.family_size < 2) {
    throw DomainError("family_size must be at least 2");
  }
  if (config.n_families < 1) throw DomainError("n_families must be at least 1");
  if (config.n_batches < 1) throw DomainError("n_batches must be at least 1");
  if (const auto* d = std::get_if<DichotomousRiskModel>(&config.risk_model)) {
    if (!d->low_risk()) {
      throw DomainError("dichotomous simulation requires an absolute low_risk");
    }
  }
}

}  // namespace

SimulationOutcome simulate(const SimulationConfig& config) {
  validate(config);
  const std::int64_t batches =
      std::min<std::int64_t>(config.n_batches, config.n_families);
  std::vector<BatchTally> tallies(static_cast<std::size_t>(batches));

  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t b = next++; b < batches; b = next++) {
      const std::int64_t families =
          config.n_families / batches + (b < config.n_families % batches ? 1 : 0);
      tallies[static_cast<std::size_t>(b)] =
          run_batch(config, families, derive_seed(config.root_seed, b));
    }
  };
  const unsigned threads = std::max(
      1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                             static_cast<unsigned>(batches)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BatchTally total;
  std::vector<double> one, two, gini;
  for (const auto& t : tallies) {
    total += t;
    const Ratios r = ratios(t, config.family_size);
    one.push_back(r.frr_one);
    two.push_back(r.frr_two);
    gini.push_back(r.gini);
  }
  const Ratios pooled = ratios(total, config.family_size);

  SimulationOutcome outcome;
  outcome.frr_one = combine(pooled.frr_one, one);
  outcome.frr_two = combine(pooled.frr_two, two);
  outcome.empirical_gini = combine(pooled.gini, gini);
  outcome.empirical_mean_risk = total.risk_sum / total.families;
  outcome.disease_rate = static_cast<double>(total.diseased) /
                         (static_cast<double>(total.families) * config.family_size);
  outcome.conditioning_events_one = total.one_denominator;
  outcome.conditioning_events_two = total.two_denominator;
  return outcome;
}

Estimate estimate_gini_by_sampling(const BetaRiskModel& model, std::int64_t n,
                                   std::uint64_t seed) {
  if (n < 2) throw DomainError("Gini sampling needs at least two pairs");
  if (model.is_point_mass()) return {0.0, 0.0, true};

  Rng rng(seed);
  const BetaParams& p = model.params();
  Eigen::ArrayXd abs_diff(n), pair_mean(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = rng.beta(p);
    const double y = rng.beta(p);
    abs_diff(i) = std::abs(x - y);
    pair_mean(i) = 0.5 * (x + y);
  }
  const double mean = pair_mean.mean();
  const double g = abs_diff.mean() / (2.0 * mean);
  // Linearization of A / (2M) around the sample means.
  const Eigen::ArrayXd influence = (abs_diff - 2.0 * g * pair_mean) / (2.0 * mean);
  const double variance =
      (influence - influence.mean()).square().sum() / static_cast<double>(n - 1);
  return {g, std::sqrt(variance / static_cast<double>(n)), true};
}

}  // namespace famrisk
