#ifndef STOCHSUP_CLUSTER_HPP
#define STOCHSUP_CLUSTER_HPP

#include <span>
#include <vector>

#include "stochsup/model.hpp"

namespace stochsup {

/// Output of GreedyCluster: disjoint-ball representatives and the map from
/// every clustered client to its representative.
struct Clustering {
  std::vector<ClientId> representatives;  // in selection order
  std::vector<ClientId> assignment;       // indexed by client id; -1 if not clustered

  bool is_representative(ClientId j) const {
    return j >= 0 && static_cast<std::size_t>(j) < assignment.size() && assignment[static_cast<std::size_t>(j)] == j;
  }
  ClientId representative_of(ClientId j) const { return assignment[static_cast<std::size_t>(j)]; }
};

/// GreedyCluster(Q, R, g).
///
/// Visits the clients of `subset` in decreasing `order[j]` (ties by smaller
/// client id). Each visited, still-unassigned client becomes a representative
/// and absorbs every unassigned client of `subset` whose ball meets its own.
/// `balls[j]` is G_j for every client id and `order` is indexed by client id.
/// Ball intersection is exact set intersection; `order` values are compared
/// exactly.
Clustering greedy_cluster(std::span<const FacilitySet> balls, std::span<const ClientId> subset,
                          std::span<const double> order);

// Balls taken from the instance radii.
Clustering greedy_cluster(const Instance& instance, std::span<const ClientId> subset, std::span<const double> order);

// g = -R: larger radii are visited last, so R_{pi j} <= R_j.
std::vector<double> descending_radius_order(std::span<const double> radii);

}  // namespace stochsup

#endif  // STOCHSUP_CLUSTER_HPP
