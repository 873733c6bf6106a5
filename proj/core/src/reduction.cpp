#include "stochsup/reduction.hpp"

#include <utility>

#include "stochsup/errors.hpp"

namespace stochsup {

RwSolver solve_or_cut_solver(SolveOrCutOptions options) {
  return {"solve-or-cut", 3.0, [options](const RwInstance& rw) -> std::optional<FacilitySet> {
            auto result = solve_rw_homogeneous(rw, options);
            if (!result) return std::nullopt;
            return std::move(result->open);
          }};
}

RwSolver iterative_rounding_solver(IterativeRoundingOptions options) {
  return {"iterative-rounding", 9.0, [options](const RwInstance& rw) -> std::optional<FacilitySet> {
            auto result = solve_rw_matsup_inhomogeneous(rw, options);
            if (!result) return std::nullopt;
            return std::move(result->open);
          }};
}

namespace {

Clustering cluster_scenario(const std::vector<FacilitySet>& balls, const std::vector<double>& order,
                            const Scenario& scenario) {
  return greedy_cluster(balls, scenario.active_clients, order);
}

FacilitySet open_unserved(const Geometry& geometry, const std::vector<FacilitySet>& balls,
                          const ReductionCertificate& certificate, const Clustering& clustering,
                          const Scenario& scenario) {
  FacilitySet opened;
  for (ClientId j : clustering.representatives) {
    const double reach = certificate.rho * certificate.radii[static_cast<std::size_t>(j)];
    if (!within_radius(geometry.distance_to_set(j, certificate.stage1), reach)) {
      opened.push_back(cheapest_in_ball(balls[static_cast<std::size_t>(j)], scenario.stage2_costs));
    }
  }
  return normalized(std::move(opened));
}

}  // namespace

ReducedInstance build_reduction(const Instance& instance, const Distribution& distribution,
                                PenaltyWeighting weighting) {
  const auto balls = all_balls(instance);
  const auto order = descending_radius_order(instance.radii());
  ReducedInstance reduced;
  auto& rw = reduced.rw;
  rw.geometry = instance.geometry_ptr();
  rw.radii = instance.radii();
  rw.penalties.assign(static_cast<std::size_t>(instance.num_clients()), 0.0);
  rw.weights = instance.stage1_costs();
  rw.constraint = instance.constraint();
  rw.budget = instance.budget();
  for (const auto& scenario : distribution.scenarios()) {
    validate_scenario(scenario, instance);
    Clustering clustering = cluster_scenario(balls, order, scenario);
    const double scale = weighting == PenaltyWeighting::Probability ? scenario.probability : 1.0;
    for (ClientId j : clustering.representatives) {
      const FacilityId cheapest = cheapest_in_ball(balls[static_cast<std::size_t>(j)], scenario.stage2_costs);
      rw.penalties[static_cast<std::size_t>(j)] += scale * scenario.stage2_costs[static_cast<std::size_t>(cheapest)];
    }
    reduced.clusterings.push_back(std::move(clustering));
  }
  return reduced;
}

std::optional<ReductionResult> reduce_and_solve(const Instance& instance, const Distribution& distribution,
                                                const RwSolver& solver, PenaltyWeighting weighting) {
  if (!instance.satisfies_standing_assumption()) return std::nullopt;
  ReductionResult result;
  result.reduced = build_reduction(instance, distribution, weighting);
  auto stage1 = solver.solve(result.reduced.rw);
  if (!stage1) return std::nullopt;

  result.certificate = {normalized(std::move(*stage1)), solver.rho, instance.radii()};
  result.strategy.stage1 = result.certificate.stage1;
  const auto balls = all_balls(instance);
  const auto& scenarios = distribution.scenarios();
  for (std::size_t a = 0; a < scenarios.size(); ++a) {
    result.strategy.stage2[scenarios[a].id] =
        open_unserved(instance.geometry(), balls, result.certificate, result.reduced.clusterings[a], scenarios[a]);
  }
  result.strategy.extension = [geometry = instance.geometry_ptr(), balls, certificate = result.certificate,
                               order = descending_radius_order(instance.radii())](const Scenario& s) {
    return open_unserved(*geometry, balls, certificate, cluster_scenario(balls, order, s), s);
  };
  return result;
}

FacilitySet extend_reduction(const Instance& instance, const ReductionCertificate& certificate,
                             const Scenario& scenario) {
  if (certificate.radii.size() != static_cast<std::size_t>(instance.num_clients())) {
    throw ValidationError("certificate radii do not match the instance");
  }
  const auto balls = balls_at(instance.geometry(), certificate.radii);
  const auto order = descending_radius_order(certificate.radii);
  return open_unserved(instance.geometry(), balls, certificate, cluster_scenario(balls, order, scenario), scenario);
}

}  // namespace stochsup
