#ifndef STOCHSUP_BRUTEFORCE_HPP
#define STOCHSUP_BRUTEFORCE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "stochsup/model.hpp"
#include "stochsup/robust_outlier.hpp"

namespace stochsup {

/// Enumeration limits. Exceeding one raises CapExceededError.
struct BruteForceCaps {
  int facilities = 12;      // stage-I subsets enumerated for two-stage problems
  int scenarios = 8;
  int cover_facilities = 12;  // candidate facilities for one stage-II cover
  int rw_facilities = 15;

  // Defaults overridden by STOCHSUP_CAPS, e.g. "facilities=14,scenarios=10".
  static BruteForceCaps from_env();
};

struct ExactResult {
  double value = 0.0;  // optimal expected cost, or optimal RW objective
  bool feasible = false;  // value <= budget (with budget_tolerance)
  FacilitySet stage1;
  std::map<std::string, FacilitySet> stage2;
  std::size_t enumerated = 0;
};

/// Minimum expected cost over all strategies with every active client within
/// R_j. nullopt when some client has no facility within its radius.
std::optional<ExactResult> exact_two_stage(const Instance& instance, const Distribution& distribution,
                                           const BruteForceCaps& caps = BruteForceCaps::from_env());

/// Minimum of w(S) + sum_{d(j,S) > R_j} v_j over feasible S.
ExactResult exact_rw(const RwInstance& instance, const BruteForceCaps& caps = BruteForceCaps::from_env());

/// Smallest candidate distance R for which a strategy of expected cost <= B
/// exists at homogeneous radius R; nullopt if none.
std::optional<double> exact_optimal_radius(const Instance& instance, const Distribution& distribution,
                                           const BruteForceCaps& caps = BruteForceCaps::from_env());

}  // namespace stochsup

#endif  // STOCHSUP_BRUTEFORCE_HPP
