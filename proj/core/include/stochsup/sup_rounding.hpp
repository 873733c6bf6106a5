#ifndef STOCHSUP_SUP_ROUNDING_HPP
#define STOCHSUP_SUP_ROUNDING_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

#include "stochsup/cluster.hpp"
#include "stochsup/lp.hpp"
#include "stochsup/model.hpp"

namespace stochsup {

/// Stage-I artifacts needed to extend the rounding to any scenario.
struct SupCertificate {
  double radius = 0.0;
  FacilitySet stage1;
  std::vector<ClientId> stage1_rep;  // pi^I, indexed by client
  std::vector<double> stage1_mass;   // y^I(G_j), indexed by client
};

struct SupLpSolution {
  std::vector<double> stage1;               // y^I
  std::vector<std::vector<double>> stage2;  // y^A per scenario, distribution order
  double objective = 0.0;
};

struct SupRoundingState {
  Clustering stage1_clustering;
  // Representatives sorted by ascending y^I(G_j), ties by id.
  std::vector<ClientId> sweep_order;
  std::vector<Clustering> scenario_clusterings;  // distribution order
  // 1-based threshold; sweep_order.size() + 1 is the dummy (empty F_I).
  std::size_t threshold = 0;
  // Expected cost of every threshold tried, in sweep order.
  std::vector<double> sweep_costs;
};

struct SupResult {
  Strategy strategy;
  SupCertificate certificate;
  SupRoundingState state;
  SupLpSolution lp;
};

/// Correlated LP rounding for homogeneous radii and explicit scenarios.
/// Every active client ends within 3R of an open facility and the expected
/// cost is at most B. nullopt means INFEASIBLE. The radius defaults to the
/// common instance radius.
std::optional<SupResult> solve_sup_poly(const Instance& instance, const Distribution& distribution,
                                        std::optional<double> radius = std::nullopt,
                                        const lp::SolverOptions& lp_options = {});

/// Stage-II set for any scenario, from the stage-I artifacts alone.
FacilitySet extend_sup(const Instance& instance, const SupCertificate& certificate, const Scenario& scenario);

// (n+1)!, the number of strategies the rounding can reach on n clients.
boost::multiprecision::cpp_int strategy_class_bound(int clients);
double log_strategy_class_bound(int clients);

}  // namespace stochsup

#endif  // STOCHSUP_SUP_ROUNDING_HPP
