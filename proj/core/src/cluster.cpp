#include "stochsup/cluster.hpp"

#include <algorithm>

#include "stochsup/errors.hpp"

namespace stochsup {

Clustering greedy_cluster(std::span<const FacilitySet> balls, std::span<const ClientId> subset,
                          std::span<const double> order) {
  Clustering out;
  out.assignment.assign(balls.size(), -1);
  std::vector<ClientId> queue(subset.begin(), subset.end());
  for (ClientId j : queue) {
    if (j < 0 || static_cast<std::size_t>(j) >= balls.size() || static_cast<std::size_t>(j) >= order.size()) {
      throw ValidationError("clustered client out of range");
    }
  }
  std::sort(queue.begin(), queue.end(), [&](ClientId a, ClientId b) {
    const double ga = order[static_cast<std::size_t>(a)];
    const double gb = order[static_cast<std::size_t>(b)];
    if (ga != gb) return ga > gb;
    return a < b;
  });
  queue.erase(std::unique(queue.begin(), queue.end()), queue.end());

  for (ClientId j : queue) {
    if (out.assignment[static_cast<std::size_t>(j)] != -1) continue;
    out.representatives.push_back(j);
    const auto& gj = balls[static_cast<std::size_t>(j)];
    for (ClientId other : queue) {
      if (out.assignment[static_cast<std::size_t>(other)] != -1) continue;
      if (other == j || sets_intersect(gj, balls[static_cast<std::size_t>(other)])) {
        out.assignment[static_cast<std::size_t>(other)] = j;
      }
    }
  }
  return out;
}

Clustering greedy_cluster(const Instance& instance, std::span<const ClientId> subset, std::span<const double> order) {
  const auto balls = all_balls(instance);
  return greedy_cluster(balls, subset, order);
}

std::vector<double> descending_radius_order(std::span<const double> radii) {
  std::vector<double> g(radii.size());
  std::transform(radii.begin(), radii.end(), g.begin(), [](double r) { return -r; });
  return g;
}

}  // namespace stochsup
