#include "stochsup/bruteforce.hpp"

#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "stochsup/errors.hpp"

namespace stochsup {

BruteForceCaps BruteForceCaps::from_env() {
  BruteForceCaps caps;
  const char* raw = std::getenv("STOCHSUP_CAPS");
  if (!raw) return caps;
  std::stringstream stream(raw);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("STOCHSUP_CAPS entries look like key=value");
    const std::string key = item.substr(0, eq);
    const int value = std::stoi(item.substr(eq + 1));
    if (key == "facilities") {
      caps.facilities = value;
    } else if (key == "scenarios") {
      caps.scenarios = value;
    } else if (key == "cover") {
      caps.cover_facilities = value;
    } else if (key == "rw") {
      caps.rw_facilities = value;
    } else {
      throw ValidationError("unknown STOCHSUP_CAPS key '" + key + "'");
    }
  }
  return caps;
}

namespace {

FacilitySet from_mask(std::uint32_t mask) {
  FacilitySet set;
  for (int i = 0; mask; ++i, mask >>= 1) {
    if (mask & 1U) set.push_back(i);
  }
  return set;
}

struct Cover {
  double cost = 0.0;
  FacilitySet open;
};

// Cheapest stage-II set covering every client of `uncovered` within its ball.
Cover cheapest_cover(const std::vector<FacilitySet>& balls, const std::vector<ClientId>& uncovered,
                     std::span<const double> costs, const BruteForceCaps& caps) {
  if (uncovered.empty()) return {};
  FacilitySet candidates;
  for (ClientId j : uncovered) candidates = set_union(candidates, balls[static_cast<std::size_t>(j)]);
  if (static_cast<int>(candidates.size()) > caps.cover_facilities) {
    throw CapExceededError("stage-II cover has " + std::to_string(candidates.size()) + " candidate facilities");
  }
  // Coverage of each candidate as a bitmask over `uncovered`.
  std::vector<std::uint64_t> covers(candidates.size(), 0);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t u = 0; u < uncovered.size(); ++u) {
      const auto& b = balls[static_cast<std::size_t>(uncovered[u])];
      if (std::binary_search(b.begin(), b.end(), candidates[c])) covers[c] |= std::uint64_t{1} << u;
    }
  }
  const std::uint64_t all = uncovered.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << uncovered.size()) - 1;
  Cover best{kInfinity, {}};
  const std::uint32_t subsets = 1U << candidates.size();
  for (std::uint32_t s = 1; s < subsets; ++s) {
    std::uint64_t covered = 0;
    double cost = 0.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (s & (1U << c)) {
        covered |= covers[c];
        cost += costs[static_cast<std::size_t>(candidates[c])];
      }
    }
    if (covered == all && cost < best.cost) {
      best.cost = cost;
      best.open.clear();
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (s & (1U << c)) best.open.push_back(candidates[c]);
      }
    }
  }
  return best;
}

}  // namespace

std::optional<ExactResult> exact_two_stage(const Instance& instance, const Distribution& distribution,
                                           const BruteForceCaps& caps) {
  const int m = instance.num_facilities();
  if (m > caps.facilities) throw CapExceededError("exact two-stage search limited to " + std::to_string(caps.facilities) + " facilities");
  if (static_cast<int>(distribution.size()) > caps.scenarios) {
    throw CapExceededError("exact two-stage search limited to " + std::to_string(caps.scenarios) + " scenarios");
  }
  if (instance.num_clients() > 64) throw CapExceededError("exact two-stage search limited to 64 clients");
  if (!instance.satisfies_standing_assumption()) return std::nullopt;

  const auto balls = all_balls(instance);
  const auto& scenarios = distribution.scenarios();
  // Memoized covers per scenario, keyed by the uncovered-client mask.
  std::vector<std::unordered_map<std::uint64_t, Cover>> memo(scenarios.size());

  ExactResult best;
  best.value = kInfinity;
  const std::uint32_t subsets = 1U << m;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    const FacilitySet stage1 = from_mask(mask);
    if (!is_stage1_feasible(instance.constraint(), stage1)) continue;
    ++best.enumerated;
    double total = set_cost(stage1, instance.stage1_costs());
    if (total >= best.value) continue;
    std::map<std::string, FacilitySet> stage2;
    for (std::size_t a = 0; a < scenarios.size() && total < best.value; ++a) {
      std::vector<ClientId> uncovered;
      std::uint64_t key = 0;
      for (ClientId j : scenarios[a].active_clients) {
        if (!sets_intersect(balls[static_cast<std::size_t>(j)], stage1)) {
          uncovered.push_back(j);
          key |= std::uint64_t{1} << j;
        }
      }
      auto it = memo[a].find(key);
      if (it == memo[a].end()) {
        it = memo[a].emplace(key, cheapest_cover(balls, uncovered, scenarios[a].stage2_costs, caps)).first;
      }
      total += scenarios[a].probability * it->second.cost;
      stage2[scenarios[a].id] = it->second.open;
    }
    if (total < best.value) {
      best.value = total;
      best.stage1 = stage1;
      best.stage2 = std::move(stage2);
    }
  }
  best.feasible = best.value <= instance.budget() + budget_tolerance(instance.budget());
  return best;
}

ExactResult exact_rw(const RwInstance& instance, const BruteForceCaps& caps) {
  instance.validate();
  const int m = instance.num_facilities();
  if (m > caps.rw_facilities) throw CapExceededError("exact RW search limited to " + std::to_string(caps.rw_facilities) + " facilities");
  const auto balls = instance.balls();
  ExactResult best;
  best.value = kInfinity;
  const std::uint32_t subsets = 1U << m;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    const FacilitySet open = from_mask(mask);
    if (!is_stage1_feasible(instance.constraint, open)) continue;
    ++best.enumerated;
    double value = set_cost(open, instance.weights);
    for (int j = 0; j < instance.num_clients(); ++j) {
      if (!sets_intersect(balls[static_cast<std::size_t>(j)], open)) value += instance.penalties[static_cast<std::size_t>(j)];
    }
    if (value < best.value) {
      best.value = value;
      best.stage1 = open;
    }
  }
  best.feasible = best.value <= instance.budget + budget_tolerance(instance.budget);
  return best;
}

std::optional<double> exact_optimal_radius(const Instance& instance, const Distribution& distribution,
                                           const BruteForceCaps& caps) {
  const auto candidates = instance.geometry().candidate_radii();
  auto feasible = [&](double r) {
    const auto result = exact_two_stage(instance.with_uniform_radius(r), distribution, caps);
    return result && result->feasible;
  };
  // Feasibility is monotone in R: larger balls only add options.
  std::size_t lo = 0;
  std::size_t hi = candidates.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == candidates.size()) return std::nullopt;
  return candidates[lo];
}

}  // namespace stochsup
