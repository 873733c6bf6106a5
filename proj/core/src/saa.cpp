#include "stochsup/saa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stochsup/errors.hpp"

namespace stochsup {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

std::vector<double> cumulative_of(std::span<const double> weights) {
  std::vector<double> cumulative;
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("sampling weights must be nonnegative");
    total += w;
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw ValidationError("sampling weights must not all be zero");
  for (auto& c : cumulative) c /= total;
  return cumulative;
}

std::size_t inverse_cdf(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) return cumulative.size() - 1;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace

ExplicitOracle::ExplicitOracle(Distribution distribution) : distribution_(std::move(distribution)) {
  if (distribution_.size() == 0) throw ValidationError("cannot sample an empty distribution");
  std::vector<double> p;
  for (const auto& s : distribution_.scenarios()) p.push_back(s.probability);
  cumulative_ = cumulative_of(p);
}

Scenario ExplicitOracle::sample(Rng& rng) const { return distribution_[inverse_cdf(cumulative_, uniform01(rng))]; }

nlohmann::json ExplicitOracle::describe() const {
  return {{"kind", "explicit"}, {"scenarios", distribution_.size()}};
}

BernoulliOracle::BernoulliOracle(std::vector<double> activation, std::vector<double> base_costs,
                                 std::vector<double> multipliers, std::vector<double> multiplier_weights)
    : activation_(std::move(activation)), base_costs_(std::move(base_costs)), multipliers_(std::move(multipliers)) {
  for (double q : activation_) {
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("activation probabilities must lie in [0, 1]");
  }
  for (double c : base_costs_) {
    if (!(c >= 0.0)) throw ValidationError("base stage-II costs must be nonnegative");
  }
  if (multipliers_.empty() || multipliers_.size() != multiplier_weights.size()) {
    throw ValidationError("need one weight per cost multiplier");
  }
  for (double mu : multipliers_) {
    if (!(mu >= 0.0)) throw ValidationError("cost multipliers must be nonnegative");
  }
  cumulative_ = cumulative_of(multiplier_weights);
}

Scenario BernoulliOracle::sample(Rng& rng) const {
  Scenario s;
  for (std::size_t j = 0; j < activation_.size(); ++j) {
    if (uniform01(rng) < activation_[j]) s.active_clients.push_back(static_cast<ClientId>(j));
  }
  const double mu = multipliers_[inverse_cdf(cumulative_, uniform01(rng))];
  s.stage2_costs = base_costs_;
  for (auto& c : s.stage2_costs) c *= mu;
  return s;
}

nlohmann::json BernoulliOracle::describe() const {
  std::vector<double> weights(cumulative_.size());
  for (std::size_t k = 0; k < cumulative_.size(); ++k) weights[k] = cumulative_[k] - (k ? cumulative_[k - 1] : 0.0);
  return {{"kind", "bernoulli"},
          {"activation", activation_},
          {"base_costs", base_costs_},
          {"multipliers", multipliers_},
          {"multiplier_weights", weights}};
}

int repetitions(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0, 1)");
  return std::max(1, static_cast<int>(std::ceil(std::log(1.0 / gamma) / std::log(13.0 / 12.0))));
}

std::size_t default_sample_count(double epsilon, double alpha, double gamma, int clients, int facilities,
                                 double log_psi, double constant) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(alpha > 0.0 && alpha < 1.0) || !(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("epsilon, alpha and gamma must lie in (0, 1)");
  }
  const double nm = std::max(1.0, static_cast<double>(clients) * static_cast<double>(facilities));
  const double first = std::log(nm) + log_psi - std::log(gamma);
  const double second = std::log(nm / gamma);
  const double n = std::ceil(constant / (epsilon * alpha) * first * second);
  return std::max(static_cast<std::size_t>(n), static_cast<std::size_t>(std::ceil(1.0 / epsilon)));
}

std::size_t bounded_delta_sample_count(double epsilon, double gamma, double delta, double budget, double log_psi,
                                       double constant) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("epsilon and gamma must lie in (0, 1)");
  }
  if (!(delta >= 0.0)) throw ValidationError("delta must be nonnegative");
  const double ratio = budget > 0.0 ? delta / budget : delta;
  const double n = std::ceil(constant * ratio / (epsilon * epsilon) * (log_psi - std::log(gamma)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

Rng repetition_rng(std::uint64_t seed, int repetition) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffU), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(repetition)};
  return Rng(seq);
}

std::vector<Scenario> draw_samples(const ScenarioOracle& oracle, Rng& rng, std::size_t count) {
  std::vector<Scenario> samples;
  samples.reserve(count);
  for (std::size_t k = 0; k < count; ++k) samples.push_back(oracle.sample(rng));
  return samples;
}

ThresholdPick pick_threshold(std::span<const double> costs, double alpha) {
  if (costs.empty()) throw ValidationError("threshold needs at least one sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  std::vector<std::size_t> order(costs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (costs[a] != costs[b]) return costs[a] > costs[b];
    return a > b;
  });
  const auto rank = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(costs.size()) - 1e-12)));
  const std::size_t pick = order[std::min(rank, costs.size()) - 1];
  return {costs[pick], pick, rank};
}

bool DiscardingStrategy::discards(const Scenario& scenario) const {
  return set_cost(extension(scenario), scenario.stage2_costs) > threshold;
}

FacilitySet DiscardingStrategy::stage2_for(const Scenario& scenario) const {
  FacilitySet set = extension(scenario);
  if (set_cost(set, scenario.stage2_costs) > threshold) return {};
  return set;
}

Strategy DiscardingStrategy::as_strategy() const {
  Strategy s;
  s.stage1 = stage1;
  s.extension = [copy = *this](const Scenario& scenario) { return copy.stage2_for(scenario); };
  return s;
}

namespace {

struct RepetitionResult {
  RepetitionRecord record;
  std::optional<DiscardingStrategy> strategy;
  std::optional<ThresholdPick> threshold;
};

RepetitionResult run_repetition(const Instance& inner, const std::vector<Scenario>& samples,
                                const PolyAlgorithm& algorithm, double alpha, bool discarding, int repetition) {
  RepetitionResult out;
  out.record.repetition = repetition;
  const Distribution empirical = Distribution::uniform(samples, inner);
  auto solution = algorithm.solve(inner, empirical);
  if (!solution) return out;
  out.record.feasible = true;
  out.record.empirical_cost = expected_cost(inner, empirical, solution->strategy);

  DiscardingStrategy strategy;
  strategy.stage1 = solution->strategy.stage1;
  strategy.extension = solution->strategy.extension;
  strategy.eta = algorithm.eta;
  strategy.certificate = std::move(solution->certificate);
  if (discarding) {
    std::vector<double> costs;
    costs.reserve(empirical.size());
    for (const auto& s : empirical.scenarios()) costs.push_back(set_cost(solution->strategy.stage2_for(s), s.stage2_costs));
    out.threshold = pick_threshold(costs, alpha);
    strategy.threshold = out.threshold->value;
  }
  out.strategy = std::move(strategy);
  return out;
}

SaaOutcome run_batches(const Instance& instance, const PolyAlgorithm& algorithm, const SaaConfig& config,
                       int batches, const std::function<std::vector<Scenario>(int)>& batch) {
  algorithm.check(instance);
  SaaOutcome outcome;
  outcome.repetitions = batches;
  outcome.inner_budget = (1.0 + config.epsilon) * instance.budget();
  const Instance inner = instance.with_budget(outcome.inner_budget);
  for (int h = 1; h <= batches; ++h) {
    const auto samples = batch(h);
    outcome.samples = samples.size();
    auto result = run_repetition(inner, samples, algorithm, config.alpha, true, h);
    outcome.records.push_back(result.record);
    if (result.strategy) {
      outcome.strategy = std::move(result.strategy);
      outcome.threshold = result.threshold;
      break;
    }
  }
  return outcome;
}

}  // namespace

SaaOutcome saa_run(const Instance& instance, const ScenarioOracle& oracle, const PolyAlgorithm& algorithm,
                   const SaaConfig& config) {
  const std::size_t formula =
      default_sample_count(config.epsilon, config.alpha, config.gamma, instance.num_clients(),
                           instance.num_facilities(), algorithm.log_strategy_class_size(instance), config.sample_constant);
  const std::size_t count = config.samples.value_or(formula);
  auto outcome = run_batches(instance, algorithm, config, repetitions(config.gamma), [&](int h) {
    Rng rng = repetition_rng(config.seed, h);
    return draw_samples(oracle, rng, count);
  });
  outcome.samples = count;
  outcome.formula_samples = formula;
  return outcome;
}

SaaOutcome saa_run_on_pool(const Instance& instance, const std::vector<std::vector<Scenario>>& pool,
                           const PolyAlgorithm& algorithm, const SaaConfig& config) {
  auto outcome = run_batches(instance, algorithm, config, static_cast<int>(pool.size()),
                             [&](int h) { return pool[static_cast<std::size_t>(h - 1)]; });
  if (!pool.empty()) outcome.samples = pool.front().size();
  return outcome;
}

RadiusSearchOutcome radius_search(const Instance& instance, const ScenarioOracle& oracle,
                                  const PolyAlgorithm& algorithm, const SaaConfig& config) {
  RadiusSearchOutcome out;
  const double nm = std::max(1.0, static_cast<double>(instance.num_clients()) * instance.num_facilities());
  out.gamma_per_radius = config.gamma / nm;
  SaaConfig per_radius = config;
  per_radius.gamma = out.gamma_per_radius;

  const std::size_t formula =
      default_sample_count(config.epsilon, config.alpha, per_radius.gamma, instance.num_clients(),
                           instance.num_facilities(), algorithm.log_strategy_class_size(instance), config.sample_constant);
  const std::size_t count = config.samples.value_or(formula);
  const int batches = repetitions(per_radius.gamma);
  std::vector<std::vector<Scenario>> pool;
  for (int h = 1; h <= batches; ++h) {
    Rng rng = repetition_rng(config.seed, h);
    pool.push_back(draw_samples(oracle, rng, count));
  }

  for (double r : instance.geometry().candidate_radii()) {
    const Instance at_r = instance.with_uniform_radius(r);
    if (!at_r.satisfies_standing_assumption()) {
      out.trials.push_back({r, false});
      continue;
    }
    auto run = saa_run_on_pool(at_r, pool, algorithm, per_radius);
    run.formula_samples = formula;
    const bool ok = run.strategy.has_value();
    out.trials.push_back({r, ok});
    out.run = std::move(run);
    if (ok) {
      out.radius = r;
      break;
    }
  }
  return out;
}

SaaOutcome saa_bounded_delta(const Instance& instance, const ScenarioOracle& oracle, const PolyAlgorithm& algorithm,
                             double delta, const SaaConfig& config) {
  algorithm.check(instance);
  SaaOutcome outcome;
  outcome.formula_samples =
      bounded_delta_sample_count(config.epsilon, config.gamma, delta, instance.budget(),
                                 algorithm.log_strategy_class_size(instance), config.delta_constant);
  outcome.samples = config.samples.value_or(outcome.formula_samples);
  outcome.repetitions = 1;
  outcome.inner_budget = (1.0 + config.epsilon / 3.0) * instance.budget();
  const Instance inner = instance.with_budget(outcome.inner_budget);
  Rng rng = repetition_rng(config.seed, 1);
  const auto samples = draw_samples(oracle, rng, outcome.samples);
  auto result = run_repetition(inner, samples, algorithm, config.alpha, false, 1);
  outcome.records.push_back(result.record);
  outcome.strategy = std::move(result.strategy);
  return outcome;
}

Evaluation evaluate(const Instance& instance, const Distribution& truth, const DiscardingStrategy& strategy) {
  Evaluation eval;
  const double stage1 = set_cost(strategy.stage1, instance.stage1_costs());
  for (const auto& s : truth.scenarios()) {
    FacilitySet second = strategy.extension(s);
    double cost2 = set_cost(second, s.stage2_costs);
    const bool discarded = cost2 > strategy.threshold;
    if (discarded) {
      second.clear();
      cost2 = 0.0;
      eval.discard_probability += s.probability;
    }
    eval.expected_cost += s.probability * (stage1 + cost2);
    const double eta = maxdist(instance, s.active_clients, strategy.stage1, second);
    if (!discarded) eval.max_eta = std::max(eval.max_eta, eta);
    if (discarded || eta > strategy.eta + 1e-9) eval.violation_probability += s.probability;
  }
  return eval;
}

AppendixDemo appendix_demo(double probability, double cost, std::size_t samples, std::size_t seeds,
                           double stage1_cost) {
  if (!(probability >= 0.0 && probability <= 1.0)) throw ValidationError("probability must lie in [0, 1]");
  if (samples == 0 || seeds == 0) throw ValidationError("need at least one sample and one seed");
  AppendixDemo demo;
  for (std::size_t seed = 1; seed <= seeds; ++seed) {
    Rng rng = repetition_rng(seed, 0);
    double total = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
      if (uniform01(rng) < probability) total += cost;
    }
    demo.estimates.push_back(stage1_cost + total / static_cast<double>(samples));
  }
  const double n = static_cast<double>(demo.estimates.size());
  demo.mean = std::accumulate(demo.estimates.begin(), demo.estimates.end(), 0.0) / n;
  double ss = 0.0;
  for (double e : demo.estimates) ss += (e - demo.mean) * (e - demo.mean);
  demo.stddev = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  demo.relative_stddev = demo.mean > 0.0 ? demo.stddev / demo.mean : 0.0;
  return demo;
}

}  // namespace stochsup
