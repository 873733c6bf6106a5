#ifndef STOCHSUP_ALGORITHMS_HPP
#define STOCHSUP_ALGORITHMS_HPP

#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stochsup/model.hpp"
#include "stochsup/reduction.hpp"

namespace stochsup {

/// Output of a polynomial-scenarios algorithm: listed stage-II sets for the
/// given scenarios plus an extension rule for any other scenario.
struct PolySolution {
  Strategy strategy;
  nlohmann::json certificate;
};

/// An efficiently generalizable two-stage algorithm: solve on an explicit
/// distribution, extend to any scenario, coverage factor eta and the log of
/// the strategy-class size used by the sample-count formulas.
struct PolyAlgorithm {
  std::string name;
  double eta = 0.0;
  std::function<double(const Instance&)> log_strategy_class_size;
  // Throws ValidationError when the instance does not fit the algorithm.
  std::function<void(const Instance&)> check;
  // nullopt means INFEASIBLE.
  std::function<std::optional<PolySolution>(const Instance&, const Distribution&)> solve;
};

struct AlgorithmOptions {
  PenaltyWeighting weighting = PenaltyWeighting::Probability;
  SolveOrCutOptions solve_or_cut;
  IterativeRoundingOptions iterative;
};

// sup3, matsup5, musup5, matsup11.
PolyAlgorithm make_poly_algorithm(std::string_view selector, const AlgorithmOptions& options = {});
std::vector<std::string> poly_algorithm_names();

}  // namespace stochsup

#endif  // STOCHSUP_ALGORITHMS_HPP
