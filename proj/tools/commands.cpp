#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>

#include "artifacts.hpp"
#include "stochsup/algorithms.hpp"
#include "stochsup/bruteforce.hpp"
#include "stochsup/errors.hpp"
#include "stochsup/io.hpp"
#include "stochsup/robust_outlier.hpp"
#include "stochsup/saa.hpp"

namespace stochsup::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string absolute_or_empty(const std::string& path) {
  return path.empty() ? path : fs::absolute(path).lexically_normal().string();
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_double(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return doc.at(key).get<double>();
}

// JSON has no infinity.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------------------
// generate

// Integer in [lo, hi] from the top bits of the generator; identical on every
// platform, unlike std::uniform_int_distribution.
int draw_int(Rng& rng, int lo, int hi) {
  const int span = hi - lo + 1;
  return lo + std::min(span - 1, static_cast<int>(uniform01(rng) * span));
}

StageOneConstraint generated_constraint(const std::string& spec, int m, Rng& rng) {
  if (spec == "none") return Unconstrained{};
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ValidationError("constraint must be none, uniform:K or knapsack:W");
  const std::string kind = spec.substr(0, colon);
  const int value = std::stoi(spec.substr(colon + 1));
  if (kind == "uniform") return Matroid::uniform(m, value);
  if (kind == "knapsack") {
    KnapsackSystem ks;
    ks.budgets = {value};
    ks.weights.emplace_back();
    for (int i = 0; i < m; ++i) ks.weights[0].push_back(draw_int(rng, 0, 3));
    return ks;
  }
  throw ValidationError("unknown constraint '" + spec + "'");
}

Instance e1_instance() {
  auto g = std::make_shared<const Geometry>(
      Geometry::from_points({"c1", "c2"}, {{1}, {9}}, {"f1", "f2"}, {{0}, {10}}));
  return Instance(g, {2, 2}, {5, 5}, Unconstrained{}, 9);
}

}  // namespace

json to_json(const GenerateOptions& o) {
  return {{"preset", o.preset},         {"layout", o.layout},
          {"clients", o.clients},       {"facilities", o.facilities},
          {"side", o.side},             {"c1_min", o.c1_min},
          {"c1_max", o.c1_max},         {"c2_min", o.c2_min},
          {"c2_max", o.c2_max},         {"scenarios", o.scenarios},
          {"activation", o.activation}, {"radius", optional_json(o.radius)},
          {"budget", o.budget},         {"constraint", o.constraint},
          {"scenario_model", o.scenario_model}, {"seed", o.seed},
          {"out_dir", absolute_or_empty(o.out_dir)}};
}

namespace {

GenerateOptions generate_from_json(const json& c) {
  GenerateOptions o;
  o.preset = c.value("preset", o.preset);
  o.layout = c.value("layout", o.layout);
  o.clients = c.value("clients", o.clients);
  o.facilities = c.value("facilities", o.facilities);
  o.side = c.value("side", o.side);
  o.c1_min = c.value("c1_min", o.c1_min);
  o.c1_max = c.value("c1_max", o.c1_max);
  o.c2_min = c.value("c2_min", o.c2_min);
  o.c2_max = c.value("c2_max", o.c2_max);
  o.scenarios = c.value("scenarios", o.scenarios);
  o.activation = c.value("activation", o.activation);
  o.radius = optional_double(c, "radius");
  o.budget = c.value("budget", o.budget);
  o.constraint = c.value("constraint", o.constraint);
  o.scenario_model = c.value("scenario_model", o.scenario_model);
  o.seed = c.value("seed", o.seed);
  return o;
}

}  // namespace

int cmd_generate(const GenerateOptions& o) {
  const auto start = Clock::now();
  if (!o.preset.empty() && o.preset != "e1") throw ValidationError("unknown preset '" + o.preset + "'");
  if (o.clients < 1 || o.facilities < 1) throw ValidationError("need at least one client and one facility");
  if (o.scenarios < 1) throw ValidationError("need at least one scenario");
  if (o.c1_min > o.c1_max || o.c2_min > o.c2_max || o.c1_min < 0 || o.c2_min < 0) {
    throw ValidationError("cost ranges must be nonnegative and ordered");
  }
  if (!(o.activation >= 0.0 && o.activation <= 1.0)) throw ValidationError("activation must lie in [0, 1]");
  if (o.layout != "square" && o.layout != "line" && o.layout != "matrix") {
    throw ValidationError("layout must be square, line or matrix");
  }
  RunRecord run("generate", to_json(o), o.out_dir);
  run.extra()["seeds"] = {o.seed};

  if (o.preset == "e1") {
    const Instance e1 = e1_instance();
    const std::vector<Scenario> scenarios{{"A1", {0}, {2, 2}, 0.5}, {"A2", {0, 1}, {2, 8}, 0.5}};
    run.write_json("instance.json", io::to_json(e1));
    run.write_json("scenarios.json", io::to_json(Distribution(scenarios, e1), e1));
    run.write_json("oracle.json", {{"kind", "explicit"}, {"scenarios", "scenarios.json"}});
    run.finish(seconds_since(start));
    return kExitOk;
  }

  Rng rng = repetition_rng(o.seed, 0);
  std::vector<std::string> client_names, facility_names;
  for (int j = 0; j < o.clients; ++j) client_names.push_back("c" + std::to_string(j + 1));
  for (int i = 0; i < o.facilities; ++i) facility_names.push_back("f" + std::to_string(i + 1));
  const int dim = o.layout == "line" ? 1 : 2;
  auto point = [&]() {
    Geometry::Point p;
    for (int k = 0; k < dim; ++k) p.push_back(draw_int(rng, 0, o.side));
    return p;
  };
  std::vector<Geometry::Point> cp, fp;
  for (int j = 0; j < o.clients; ++j) cp.push_back(point());
  for (int i = 0; i < o.facilities; ++i) fp.push_back(point());
  Geometry g = Geometry::from_points(client_names, cp, facility_names, fp);
  if (o.layout == "matrix") {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(o.clients));
    for (int j = 0; j < o.clients; ++j) {
      for (int i = 0; i < o.facilities; ++i) rows[static_cast<std::size_t>(j)].push_back(g.distance(j, i));
    }
    g = Geometry::from_client_rows(client_names, facility_names, rows);
  }
  auto geometry = std::make_shared<const Geometry>(std::move(g));

  double radius = 0.0;
  if (o.radius) {
    radius = *o.radius;
  } else {
    FacilitySet all(static_cast<std::size_t>(o.facilities));
    std::iota(all.begin(), all.end(), 0);
    for (int j = 0; j < o.clients; ++j) radius = std::max(radius, geometry->distance_to_set(j, all));
  }
  std::vector<double> c1;
  for (int i = 0; i < o.facilities; ++i) c1.push_back(draw_int(rng, o.c1_min, o.c1_max));
  auto constraint = generated_constraint(o.constraint, o.facilities, rng);
  const Instance instance(geometry, std::vector<double>(static_cast<std::size_t>(o.clients), radius), c1,
                          std::move(constraint), o.budget);
  run.write_json("instance.json", io::to_json(instance));

  if (o.scenario_model == "explicit") {
    std::vector<Scenario> scenarios;
    std::vector<int> weights;
    for (int a = 0; a < o.scenarios; ++a) {
      Scenario s;
      s.id = "A" + std::to_string(a + 1);
      for (int j = 0; j < o.clients; ++j) {
        if (uniform01(rng) < o.activation) s.active_clients.push_back(j);
      }
      for (int i = 0; i < o.facilities; ++i) s.stage2_costs.push_back(draw_int(rng, o.c2_min, o.c2_max));
      weights.push_back(draw_int(rng, 1, 4));
      scenarios.push_back(std::move(s));
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (std::size_t a = 0; a < scenarios.size(); ++a) scenarios[a].probability = weights[a] / total;
    run.write_json("scenarios.json", io::to_json(Distribution(scenarios, instance), instance));
    run.write_json("oracle.json", {{"kind", "explicit"}, {"scenarios", "scenarios.json"}});
  } else if (o.scenario_model == "bernoulli") {
    json activation = json::object(), base = json::object();
    for (const auto& name : client_names) activation[name] = o.activation;
    for (const auto& name : facility_names) base[name] = draw_int(rng, o.c2_min, o.c2_max);
    run.write_json("oracle.json", {{"kind", "bernoulli"},
                                   {"activation", activation},
                                   {"base_costs", base},
                                   {"multipliers", {1, 2, 5}},
                                   {"multiplier_weights", {6, 3, 1}}});
  } else {
    throw ValidationError("scenario model must be explicit or bernoulli");
  }
  run.finish(seconds_since(start));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// solve

json to_json(const SolveOptions& o) {
  return {{"instance", absolute_or_empty(o.instance)},
          {"dist", absolute_or_empty(o.dist)},
          {"algo", o.algo},
          {"radius", optional_json(o.radius)},
          {"out_dir", absolute_or_empty(o.out_dir)}};
}

namespace {

SolveOptions solve_from_json(const json& c) {
  SolveOptions o;
  o.instance = c.value("instance", o.instance);
  o.dist = c.value("dist", o.dist);
  o.algo = c.value("algo", o.algo);
  o.radius = optional_double(c, "radius");
  return o;
}

int solve_rw(const SolveOptions& o, RunRecord& run) {
  const double rho = o.algo == "rw3" ? 3.0 : 9.0;
  RwInstance rw = io::rw_instance_from_json(io::read_json_file(o.instance));
  if (o.radius) rw.radii.assign(rw.radii.size(), *o.radius);
  std::optional<FacilitySet> open;
  if (o.algo == "rw3") {
    if (auto r = solve_rw_homogeneous(rw)) open = r->open;
  } else {
    if (auto r = solve_rw_matsup_inhomogeneous(rw)) open = r->open;
  }
  CsvTable report({"command", "algorithm", "status", "V", "budget_used", "rho", "opened", "outliers"});
  json doc{{"schema_version", io::kSchemaVersion}, {"algorithm", o.algo}};
  if (!open) {
    run.set_status("INFEASIBLE");
    doc["status"] = "INFEASIBLE";
    report.add_row({"solve", o.algo, "INFEASIBLE", number(rw.budget), "", number(rho), "", ""});
  } else {
    const auto check = check_rw_solution(rw, *open, rho);
    doc["status"] = "ok";
    doc["open"] = io::facility_names(*rw.geometry, *open);
    json outliers = json::array();
    for (ClientId j : check.outliers) outliers.push_back(rw.geometry->client_names()[static_cast<std::size_t>(j)]);
    doc["outliers"] = outliers;
    doc["budget_used"] = check.budget_used;
    report.add_row({"solve", o.algo, "ok", number(rw.budget), number(check.budget_used), number(rho),
                    std::to_string(open->size()), std::to_string(check.outliers.size())});
  }
  run.write_json("strategy.json", doc);
  run.write_text("report.csv", report.str());
  return open ? kExitOk : kExitInfeasible;
}

void write_two_stage_report(RunRecord& run, const std::string& algo, const Instance& instance,
                            const Distribution& d, const Strategy* strategy, double eta_limit, json certificate) {
  CsvTable report({"command", "algorithm", "status", "budget", "expected_cost", "stage1_cost", "max_eta", "eta_limit",
                   "scenarios"});
  CsvTable coverage({"scenario", "probability", "stage2_cost", "maxdist", "within_limit"});
  json doc{{"schema_version", io::kSchemaVersion}, {"algorithm", algo}};
  if (!strategy) {
    run.set_status("INFEASIBLE");
    doc["status"] = "INFEASIBLE";
    report.add_row({"solve", algo, "INFEASIBLE", number(instance.budget()), "", "", "", number(eta_limit),
                    std::to_string(d.size())});
  } else {
    const double cost = expected_cost(instance, d, *strategy);
    const bool feasible = cost <= instance.budget() + budget_tolerance(instance.budget());
    const std::string status = feasible ? "ok" : "INFEASIBLE";
    run.set_status(status);
    double worst = 0.0;
    for (const auto& a : d.scenarios()) {
      const double eta = maxdist(instance, a, *strategy);
      worst = std::max(worst, eta);
      coverage.add_row({a.id, number(a.probability), number(set_cost(strategy->stage2_for(a), a.stage2_costs)),
                        number(eta), eta <= eta_limit + 1e-9 ? "1" : "0"});
    }
    doc = io::strategy_to_json(*strategy, instance.geometry());
    doc["algorithm"] = algo;
    doc["status"] = status;
    doc["expected_cost"] = cost;
    doc["certificate"] = std::move(certificate);
    report.add_row({"solve", algo, status, number(instance.budget()), number(cost),
                    number(set_cost(strategy->stage1, instance.stage1_costs())), number(worst), number(eta_limit),
                    std::to_string(d.size())});
  }
  run.write_json("strategy.json", doc);
  run.write_text("report.csv", report.str());
  run.write_text("coverage.csv", coverage.str());
}

}  // namespace

int cmd_solve(const SolveOptions& o) {
  const auto start = Clock::now();
  const bool rw = o.algo == "rw3" || o.algo == "rw9";
  if (o.instance.empty()) throw ValidationError("--instance is required");
  if (!rw && o.dist.empty()) throw ValidationError("--dist is required for two-stage algorithms");
  RunRecord run("solve", to_json(o), o.out_dir);
  run.add_input("instance", o.instance);
  int code = kExitOk;
  if (rw) {
    code = solve_rw(o, run);
  } else {
    run.add_input("dist", o.dist);
    Instance instance = io::instance_from_json(io::read_json_file(o.instance));
    if (o.radius) instance = instance.with_uniform_radius(*o.radius);
    const Distribution d = io::distribution_from_json(io::read_json_file(o.dist), instance);
    if (o.algo == "exact") {
      const auto r = exact_two_stage(instance, d);
      if (r && r->feasible) {
        const Strategy s{r->stage1, r->stage2, {}};
        write_two_stage_report(run, o.algo, instance, d, &s, 1.0, {{"kind", "exact"}, {"enumerated", r->enumerated}});
      } else {
        write_two_stage_report(run, o.algo, instance, d, nullptr, 1.0, nullptr);
        code = kExitInfeasible;
      }
    } else {
      const PolyAlgorithm algo = make_poly_algorithm(o.algo);
      algo.check(instance);
      const auto r = algo.solve(instance, d);
      write_two_stage_report(run, o.algo, instance, d, r ? &r->strategy : nullptr, algo.eta,
                             r ? r->certificate : json(nullptr));
      if (!r) code = kExitInfeasible;
    }
  }
  run.finish(seconds_since(start));
  return code;
}

// ---------------------------------------------------------------------------
// saa

json to_json(const SaaOptions& o) {
  return {{"instance", absolute_or_empty(o.instance)},
          {"oracle", absolute_or_empty(o.oracle)},
          {"algo", o.algo},
          {"eps", o.eps},
          {"alpha", o.alpha},
          {"gamma", o.gamma},
          {"samples", o.samples ? json(*o.samples) : json(nullptr)},
          {"seed", o.seed},
          {"radius_search", o.radius_search},
          {"delta", optional_json(o.delta)},
          {"truth", absolute_or_empty(o.truth)},
          {"sample_constant", o.sample_constant},
          {"delta_constant", o.delta_constant},
          {"out_dir", absolute_or_empty(o.out_dir)}};
}

namespace {

SaaOptions saa_from_json(const json& c) {
  SaaOptions o;
  o.instance = c.value("instance", o.instance);
  o.oracle = c.value("oracle", o.oracle);
  o.algo = c.value("algo", o.algo);
  o.eps = c.value("eps", o.eps);
  o.alpha = c.value("alpha", o.alpha);
  o.gamma = c.value("gamma", o.gamma);
  if (c.contains("samples") && !c.at("samples").is_null()) o.samples = c.at("samples").get<std::size_t>();
  o.seed = c.value("seed", o.seed);
  o.radius_search = c.value("radius_search", o.radius_search);
  o.delta = optional_double(c, "delta");
  o.truth = c.value("truth", o.truth);
  o.sample_constant = c.value("sample_constant", o.sample_constant);
  o.delta_constant = c.value("delta_constant", o.delta_constant);
  return o;
}

// Per-client or per-facility values given as one number, a list, or an
// object keyed by id.
std::vector<double> keyed_values(const json& value, const std::vector<std::string>& names, const char* what) {
  if (value.is_number()) return std::vector<double>(names.size(), value.get<double>());
  if (value.is_array()) {
    auto v = value.get<std::vector<double>>();
    if (v.size() != names.size()) throw ValidationError(std::string(what) + " has the wrong length");
    return v;
  }
  if (!value.is_object()) throw ValidationError(std::string(what) + " must be a number, list or object");
  std::vector<double> out;
  for (const auto& name : names) {
    if (!value.contains(name)) throw ValidationError(std::string(what) + " missing for '" + name + "'");
    out.push_back(value.at(name).get<double>());
  }
  return out;
}

std::unique_ptr<ScenarioOracle> load_oracle(const fs::path& path, const Instance& instance, RunRecord& run) {
  const json spec = io::read_json_file(path);
  const std::string kind = spec.value("kind", std::string());
  if (kind == "explicit") {
    if (!spec.contains("scenarios")) throw ValidationError("explicit oracle needs 'scenarios'");
    json scenarios = spec.at("scenarios");
    if (scenarios.is_string()) {
      const fs::path file = path.parent_path() / scenarios.get<std::string>();
      run.add_input("scenarios", file);
      scenarios = io::read_json_file(file);
    }
    return std::make_unique<ExplicitOracle>(io::distribution_from_json(scenarios, instance));
  }
  if (kind == "bernoulli") {
    const auto& g = instance.geometry();
    const auto multipliers = spec.at("multipliers").get<std::vector<double>>();
    const auto weights = spec.contains("multiplier_weights")
                             ? spec.at("multiplier_weights").get<std::vector<double>>()
                             : std::vector<double>(multipliers.size(), 1.0);
    return std::make_unique<BernoulliOracle>(keyed_values(spec.at("activation"), g.client_names(), "activation"),
                                             keyed_values(spec.at("base_costs"), g.facility_names(), "base_costs"),
                                             multipliers, weights);
  }
  throw ValidationError("oracle kind must be explicit or bernoulli");
}

}  // namespace

int cmd_saa(const SaaOptions& o) {
  const auto start = Clock::now();
  if (o.instance.empty()) throw ValidationError("--instance is required");
  if (o.oracle.empty()) throw ValidationError("--oracle is required");
  RunRecord run("saa", to_json(o), o.out_dir);
  run.add_input("instance", o.instance);
  run.add_input("oracle", o.oracle);
  const Instance instance = io::instance_from_json(io::read_json_file(o.instance));
  const auto oracle = load_oracle(o.oracle, instance, run);
  const PolyAlgorithm algo = make_poly_algorithm(o.algo);

  SaaConfig config;
  config.epsilon = o.eps;
  config.alpha = o.alpha;
  config.gamma = o.gamma;
  config.samples = o.samples;
  config.seed = o.seed;
  config.sample_constant = o.sample_constant;
  config.delta_constant = o.delta_constant;

  SaaOutcome outcome;
  std::optional<double> radius;
  json trials = json::array();
  Instance used = instance;
  if (o.delta) {
    outcome = saa_bounded_delta(instance, *oracle, algo, *o.delta, config);
  } else if (o.radius_search) {
    auto rs = radius_search(instance, *oracle, algo, config);
    for (const auto& t : rs.trials) trials.push_back({{"radius", t.radius}, {"feasible", t.feasible}});
    radius = rs.radius;
    if (radius) used = instance.with_uniform_radius(*radius);
    run.extra()["gamma_per_radius"] = rs.gamma_per_radius;
    outcome = std::move(rs.run);
  } else {
    outcome = saa_run(instance, *oracle, algo, config);
  }
  if (!radius && !o.radius_search && instance.is_homogeneous()) radius = instance.radius(0);

  json records = json::array();
  for (const auto& r : outcome.records) {
    records.push_back({{"repetition", r.repetition}, {"feasible", r.feasible}, {"empirical_cost", r.empirical_cost}});
  }
  const bool ok = outcome.strategy.has_value();
  run.set_status(ok ? "ok" : "INFEASIBLE");
  run.extra()["seeds"] = {o.seed};
  run.extra()["oracle"] = oracle->describe();
  run.extra()["gamma"] = o.gamma;
  run.extra()["samples"] = outcome.samples;
  run.extra()["formula_samples"] = outcome.formula_samples;
  run.extra()["repetitions"] = outcome.repetitions;
  run.extra()["repetition_status"] = records;
  run.extra()["radius_trials"] = trials;
  if (outcome.threshold) {
    run.extra()["threshold"] = {{"value", outcome.threshold->value},
                                {"sample", outcome.threshold->sample},
                                {"rank", outcome.threshold->rank}};
  }

  std::optional<Evaluation> eval;
  if (!o.truth.empty()) {
    run.add_input("truth", o.truth);
    if (ok) eval = evaluate(used, io::distribution_from_json(io::read_json_file(o.truth), used), *outcome.strategy);
  }

  json doc{{"schema_version", io::kSchemaVersion}, {"algorithm", o.algo}, {"status", ok ? "ok" : "INFEASIBLE"}};
  if (ok) {
    const auto& s = *outcome.strategy;
    doc["stage1"] = io::facility_names(instance.geometry(), s.stage1);
    doc["threshold"] = finite_or_null(s.threshold);
    doc["eta"] = s.eta;
    doc["radius"] = optional_json(radius);
    doc["certificate"] = s.certificate;
  }
  run.write_json("strategy.json", doc);

  CsvTable summary({"command", "algorithm", "seed", "status", "samples", "formula_samples", "repetitions",
                    "repetitions_used", "inner_budget", "threshold", "radius", "stage1_cost", "expected_cost",
                    "violation_probability", "discard_probability", "max_eta"});
  auto opt = [](const std::optional<double>& v) { return v ? number(*v) : std::string(); };
  summary.add_row({"saa", o.algo, std::to_string(o.seed), ok ? "ok" : "INFEASIBLE", std::to_string(outcome.samples),
                   std::to_string(outcome.formula_samples), std::to_string(outcome.repetitions),
                   std::to_string(outcome.records.size()), number(outcome.inner_budget),
                   ok && std::isfinite(outcome.strategy->threshold) ? number(outcome.strategy->threshold) : "",
                   opt(radius), ok ? number(set_cost(outcome.strategy->stage1, instance.stage1_costs())) : "",
                   eval ? number(eval->expected_cost) : "", eval ? number(eval->violation_probability) : "",
                   eval ? number(eval->discard_probability) : "", eval ? number(eval->max_eta) : ""});
  run.write_text("summary.csv", summary.str());
  run.finish(seconds_since(start));
  return ok ? kExitOk : kExitInfeasible;
}

// ---------------------------------------------------------------------------
// appendix-demo

json to_json(const DemoOptions& o) {
  return {{"p", o.p},         {"cost", o.cost},   {"samples", o.samples}, {"seeds", o.seeds},
          {"stage1_cost", o.stage1_cost}, {"out_dir", absolute_or_empty(o.out_dir)}};
}

int cmd_appendix_demo(const DemoOptions& o) {
  const auto start = Clock::now();
  RunRecord run("appendix-demo", to_json(o), o.out_dir);
  const auto demo = appendix_demo(o.p, o.cost, o.samples, o.seeds, o.stage1_cost);
  CsvTable estimates({"seed", "estimate"});
  for (std::size_t k = 0; k < demo.estimates.size(); ++k) estimates.add_row({std::to_string(k + 1), number(demo.estimates[k])});
  run.write_text("estimates.csv", estimates.str());
  run.write_json("report.json", {{"schema_version", io::kSchemaVersion},
                                 {"p", o.p},
                                 {"cost", o.cost},
                                 {"samples", o.samples},
                                 {"seeds", o.seeds},
                                 {"stage1_cost", o.stage1_cost},
                                 {"true_mean", o.stage1_cost + o.p * o.cost},
                                 {"mean", demo.mean},
                                 {"stddev", demo.stddev},
                                 {"relative_stddev", demo.relative_stddev}});
  std::cout << "mean " << number(demo.mean) << " stddev " << number(demo.stddev) << " relative_stddev "
            << number(demo.relative_stddev) << '\n';
  run.finish(seconds_since(start));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// replay

int cmd_replay(const ReplayOptions& o) {
  const json manifest = io::read_json_file(o.manifest);
  const std::string command = manifest.at("command").get<std::string>();
  const json& config = manifest.at("config");

  // Inputs must still be the files the original run saw.
  for (const auto& input : manifest.at("inputs")) {
    const std::string path = input.at("path").get<std::string>();
    if (git_blob_hash(read_file(path)) != input.at("hash").get<std::string>()) {
      throw ValidationError("input " + path + " changed since the recorded run");
    }
  }

  int code = kExitOk;
  if (command == "generate") {
    auto opts = generate_from_json(config);
    opts.out_dir = o.out_dir;
    code = cmd_generate(opts);
  } else if (command == "solve") {
    auto opts = solve_from_json(config);
    opts.out_dir = o.out_dir;
    code = cmd_solve(opts);
  } else if (command == "saa") {
    auto opts = saa_from_json(config);
    opts.out_dir = o.out_dir;
    code = cmd_saa(opts);
  } else if (command == "appendix-demo") {
    DemoOptions opts;
    opts.p = config.value("p", opts.p);
    opts.cost = config.value("cost", opts.cost);
    opts.samples = config.value("samples", opts.samples);
    opts.seeds = config.value("seeds", opts.seeds);
    opts.stage1_cost = config.value("stage1_cost", opts.stage1_cost);
    opts.out_dir = o.out_dir;
    code = cmd_appendix_demo(opts);
  } else {
    throw ValidationError("cannot replay command '" + command + "'");
  }

  const json replayed = io::read_json_file(fs::path(o.out_dir) / "manifest.json");
  bool identical = replayed.at("outputs") == manifest.at("outputs");
  for (const auto& [name, hash] : manifest.at("outputs").items()) {
    const std::string now = replayed.at("outputs").value(name, std::string());
    std::cout << (now == hash.get<std::string>() ? "same    " : "DIFFERS ") << name << '\n';
  }
  if (!identical) {
    std::cerr << "replay produced different result files\n";
    return kExitInternal;
  }
  return code;
}

}  // namespace stochsup::cli
