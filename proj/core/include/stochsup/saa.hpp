#ifndef STOCHSUP_SAA_HPP
#define STOCHSUP_SAA_HPP

#include <cstdint>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stochsup/algorithms.hpp"
#include "stochsup/model.hpp"

namespace stochsup {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits; platform independent.
double uniform01(Rng& rng);

/// Black-box scenario source. sample() must depend only on the generator
/// state so runs replay exactly.
class ScenarioOracle {
 public:
  virtual ~ScenarioOracle() = default;
  virtual Scenario sample(Rng& rng) const = 0;
  virtual nlohmann::json describe() const = 0;
};

/// Samples an explicit distribution by inverse CDF.
class ExplicitOracle : public ScenarioOracle {
 public:
  explicit ExplicitOracle(Distribution distribution);
  Scenario sample(Rng& rng) const override;
  nlohmann::json describe() const override;
  const Distribution& distribution() const { return distribution_; }

 private:
  Distribution distribution_;
  std::vector<double> cumulative_;
};

/// Each client is active independently with its own probability; stage-II
/// costs are base costs times one multiplier drawn from a discrete set.
class BernoulliOracle : public ScenarioOracle {
 public:
  BernoulliOracle(std::vector<double> activation, std::vector<double> base_costs, std::vector<double> multipliers,
                  std::vector<double> multiplier_weights);
  Scenario sample(Rng& rng) const override;
  nlohmann::json describe() const override;

 private:
  std::vector<double> activation_;
  std::vector<double> base_costs_;
  std::vector<double> multipliers_;
  std::vector<double> cumulative_;
};

struct SaaConfig {
  double epsilon = 0.25;
  double alpha = 0.25;
  double gamma = 0.1;
  std::optional<std::size_t> samples;  // overrides the formula
  std::uint64_t seed = 1;
  double sample_constant = 1.0;  // c in the default sample-count formula
  double delta_constant = 3.0;   // c in the bounded-cost formula
};

// ceil(log_{13/12}(1 / gamma)).
int repetitions(double gamma);

// max(ceil(c / (eps alpha) ln(n m psi / gamma) ln(n m / gamma)), ceil(1 / eps)).
std::size_t default_sample_count(double epsilon, double alpha, double gamma, int clients, int facilities,
                                 double log_psi, double constant = 1.0);

// ceil(c (delta / B) / eps^2 ln(psi / gamma)), at least 1.
std::size_t bounded_delta_sample_count(double epsilon, double gamma, double delta, double budget, double log_psi,
                                       double constant = 3.0);

// Per-repetition generator: seed_seq{seed, repetition}.
Rng repetition_rng(std::uint64_t seed, int repetition);

std::vector<Scenario> draw_samples(const ScenarioOracle& oracle, Rng& rng, std::size_t count);

struct ThresholdPick {
  double value = 0.0;
  std::size_t sample = 0;  // training index holding the threshold
  std::size_t rank = 0;    // ceil(alpha N)
};

/// The ceil(alpha N)-th largest cost. Ties are ordered by sample index (a
/// later sample counts as larger), which stands in for a continuous CDF.
ThresholdPick pick_threshold(std::span<const double> costs, double alpha);

/// A stage-I set and extension rule; scenarios whose extended stage-II cost
/// exceeds the threshold get no stage-II facilities at all.
struct DiscardingStrategy {
  FacilitySet stage1;
  ExtensionRule extension;
  double threshold = kInfinity;
  double eta = 0.0;
  nlohmann::json certificate;

  bool discards(const Scenario& scenario) const;
  FacilitySet stage2_for(const Scenario& scenario) const;
  Strategy as_strategy() const;
};

struct RepetitionRecord {
  int repetition = 0;
  bool feasible = false;
  double empirical_cost = 0.0;
};

struct SaaOutcome {
  std::optional<DiscardingStrategy> strategy;
  std::size_t samples = 0;
  std::size_t formula_samples = 0;
  int repetitions = 0;
  double inner_budget = 0.0;
  std::optional<ThresholdPick> threshold;
  std::vector<RepetitionRecord> records;
};

SaaOutcome saa_run(const Instance& instance, const ScenarioOracle& oracle, const PolyAlgorithm& algorithm,
                   const SaaConfig& config);

/// saa_run on pre-drawn sample batches, one per repetition.
SaaOutcome saa_run_on_pool(const Instance& instance, const std::vector<std::vector<Scenario>>& pool,
                           const PolyAlgorithm& algorithm, const SaaConfig& config);

struct RadiusTrial {
  double radius = 0.0;
  bool feasible = false;
};

struct RadiusSearchOutcome {
  std::optional<double> radius;
  SaaOutcome run;  // the run at the returned radius, or the last failure
  std::vector<RadiusTrial> trials;
  double gamma_per_radius = 0.0;
};

/// Tries candidate radii d(i, j) in increasing order with gamma / (n m), on a
/// single sample pool drawn up front, and returns the first success.
RadiusSearchOutcome radius_search(const Instance& instance, const ScenarioOracle& oracle,
                                  const PolyAlgorithm& algorithm, const SaaConfig& config);

/// Single round without discarding, for stage-II costs bounded by delta.
SaaOutcome saa_bounded_delta(const Instance& instance, const ScenarioOracle& oracle, const PolyAlgorithm& algorithm,
                             double delta, const SaaConfig& config);

struct Evaluation {
  double expected_cost = 0.0;
  double violation_probability = 0.0;  // discarded or beyond eta R_j
  double max_eta = 0.0;                // over scenarios that are not discarded
  double discard_probability = 0.0;
};

/// Exact evaluation against a known distribution.
Evaluation evaluate(const Instance& instance, const Distribution& truth, const DiscardingStrategy& strategy);

struct AppendixDemo {
  std::vector<double> estimates;  // one per seed
  double mean = 0.0;
  double stddev = 0.0;
  double relative_stddev = 0.0;
};

/// Empirical-mean estimates of stage1_cost + X, X = cost w.p. p else 0, from
/// `samples` draws, for seeds 1..seeds.
AppendixDemo appendix_demo(double probability, double cost, std::size_t samples, std::size_t seeds,
                           double stage1_cost = 0.0);

}  // namespace stochsup

#endif  // STOCHSUP_SAA_HPP
