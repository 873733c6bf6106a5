#include "stochsup/sup_rounding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochsup/errors.hpp"

namespace stochsup {

namespace {

FacilitySet extend_with_balls(const std::vector<FacilitySet>& balls, const SupCertificate& certificate,
                              const Scenario& scenario, Clustering* clustering_out = nullptr) {
  // g^A(j) = -y^I(G_{pi^I j}): clients whose stage-I cluster got little mass
  // are picked first.
  std::vector<double> order(balls.size(), 0.0);
  for (ClientId j : scenario.active_clients) {
    const ClientId rep = certificate.stage1_rep[static_cast<std::size_t>(j)];
    order[static_cast<std::size_t>(j)] = -certificate.stage1_mass[static_cast<std::size_t>(rep)];
  }
  Clustering clustering = greedy_cluster(balls, scenario.active_clients, order);
  FacilitySet opened;
  for (ClientId j : clustering.representatives) {
    const ClientId rep = certificate.stage1_rep[static_cast<std::size_t>(j)];
    if (!sets_intersect(certificate.stage1, balls[static_cast<std::size_t>(rep)])) {
      opened.push_back(cheapest_in_ball(balls[static_cast<std::size_t>(j)], scenario.stage2_costs));
    }
  }
  if (clustering_out) *clustering_out = std::move(clustering);
  return normalized(std::move(opened));
}

}  // namespace

std::optional<SupResult> solve_sup_poly(const Instance& base, const Distribution& distribution,
                                        std::optional<double> radius, const lp::SolverOptions& lp_options) {
  if (!radius && !base.is_homogeneous()) throw ValidationError("correlated rounding needs homogeneous radii");
  if (!std::holds_alternative<Unconstrained>(base.constraint())) {
    throw ValidationError("correlated rounding does not support stage-I constraints");
  }
  const int n = base.num_clients();
  const int m = base.num_facilities();
  const double R = radius ? *radius : (n > 0 ? base.radius(0) : 0.0);
  const Instance instance = radius ? base.with_uniform_radius(R) : base;
  if (!instance.satisfies_standing_assumption()) return std::nullopt;
  for (const auto& s : distribution.scenarios()) validate_scenario(s, instance);

  const auto balls = all_balls(instance);
  const auto& scenarios = distribution.scenarios();

  // Variables: y^I then y^A for every scenario, all in [0, 1].
  lp::LinearProgram program;
  std::vector<std::pair<int, double>> budget_terms;
  for (int i = 0; i < m; ++i) {
    const double c = instance.stage1_costs()[static_cast<std::size_t>(i)];
    program.add_variable("yI_" + std::to_string(i), 0.0, 1.0, c);
    budget_terms.emplace_back(i, c);
  }
  for (std::size_t a = 0; a < scenarios.size(); ++a) {
    for (int i = 0; i < m; ++i) {
      const double c = scenarios[a].probability * scenarios[a].stage2_costs[static_cast<std::size_t>(i)];
      const int var = program.add_variable("yA" + std::to_string(a) + "_" + std::to_string(i), 0.0, 1.0, c);
      budget_terms.emplace_back(var, c);
    }
  }
  program.add_row("budget", budget_terms, lp::Sense::LessEqual, instance.budget());
  for (std::size_t a = 0; a < scenarios.size(); ++a) {
    for (ClientId j : scenarios[a].active_clients) {
      std::vector<std::pair<int, double>> terms;
      for (FacilityId i : balls[static_cast<std::size_t>(j)]) {
        terms.emplace_back(i, 1.0);
        terms.emplace_back(m * static_cast<int>(a + 1) + i, 1.0);
      }
      program.add_row("cover_" + std::to_string(a) + "_" + std::to_string(j), terms, lp::Sense::GreaterEqual, 1.0);
    }
  }
  const auto solution = lp::solve(program, lp_options);
  if (!solution.optimal()) return std::nullopt;

  SupResult result;
  result.lp.objective = solution.objective;
  result.lp.stage1.assign(solution.values.begin(), solution.values.begin() + m);
  for (std::size_t a = 0; a < scenarios.size(); ++a) {
    const auto first = solution.values.begin() + m * static_cast<std::ptrdiff_t>(a + 1);
    result.lp.stage2.emplace_back(first, first + m);
  }

  std::vector<double> mass(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    for (FacilityId i : balls[static_cast<std::size_t>(j)]) mass[static_cast<std::size_t>(j)] += result.lp.stage1[static_cast<std::size_t>(i)];
  }
  std::vector<ClientId> everyone(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) everyone[static_cast<std::size_t>(j)] = j;
  auto& state = result.state;
  state.stage1_clustering = greedy_cluster(balls, everyone, mass);
  state.sweep_order = state.stage1_clustering.representatives;
  std::sort(state.sweep_order.begin(), state.sweep_order.end(), [&](ClientId a, ClientId b) {
    const double ma = mass[static_cast<std::size_t>(a)];
    const double mb = mass[static_cast<std::size_t>(b)];
    return ma != mb ? ma < mb : a < b;
  });

  SupCertificate certificate;
  certificate.radius = R;
  certificate.stage1_rep = state.stage1_clustering.assignment;
  certificate.stage1_mass = mass;

  const std::size_t h = state.sweep_order.size();
  const double limit = instance.budget() + budget_tolerance(instance.budget());
  for (std::size_t ell = 1; ell <= h + 1; ++ell) {
    FacilitySet stage1;
    if (ell <= h) {
      const double cut = mass[static_cast<std::size_t>(state.sweep_order[ell - 1])];
      for (ClientId rep : state.sweep_order) {
        if (mass[static_cast<std::size_t>(rep)] >= cut) {
          stage1.push_back(cheapest_in_ball(balls[static_cast<std::size_t>(rep)], instance.stage1_costs()));
        }
      }
    }
    certificate.stage1 = normalized(std::move(stage1));

    Strategy strategy;
    strategy.stage1 = certificate.stage1;
    std::vector<Clustering> clusterings(scenarios.size());
    for (std::size_t a = 0; a < scenarios.size(); ++a) {
      strategy.stage2[scenarios[a].id] = extend_with_balls(balls, certificate, scenarios[a], &clusterings[a]);
    }
    const double cost = expected_cost(instance, distribution, strategy);
    state.sweep_costs.push_back(cost);
    if (cost <= limit) {
      state.threshold = ell;
      state.scenario_clusterings = std::move(clusterings);
      strategy.extension = [balls, certificate](const Scenario& s) {
        return extend_with_balls(balls, certificate, s);
      };
      result.strategy = std::move(strategy);
      result.certificate = std::move(certificate);
      return result;
    }
  }
  return std::nullopt;
}

FacilitySet extend_sup(const Instance& instance, const SupCertificate& certificate, const Scenario& scenario) {
  const std::vector<double> radii(static_cast<std::size_t>(instance.num_clients()), certificate.radius);
  const auto balls = balls_at(instance.geometry(), radii);
  return extend_with_balls(balls, certificate, scenario);
}

boost::multiprecision::cpp_int strategy_class_bound(int clients) {
  if (clients < 0) throw ValidationError("client count must be nonnegative");
  boost::multiprecision::cpp_int value = 1;
  for (int k = 2; k <= clients + 1; ++k) value *= k;
  return value;
}

double log_strategy_class_bound(int clients) {
  if (clients < 0) throw ValidationError("client count must be nonnegative");
  return std::lgamma(static_cast<double>(clients) + 2.0);
}

}  // namespace stochsup
