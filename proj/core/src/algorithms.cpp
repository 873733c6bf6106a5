#include "stochsup/algorithms.hpp"

#include <cmath>

#include "stochsup/errors.hpp"
#include "stochsup/io.hpp"
#include "stochsup/sup_rounding.hpp"

namespace stochsup {

namespace {

void require_homogeneous(const Instance& instance, std::string_view name) {
  if (!instance.is_homogeneous()) throw ValidationError(std::string(name) + " needs homogeneous radii");
}

void require_matroid(const Instance& instance, std::string_view name) {
  if (std::holds_alternative<KnapsackSystem>(instance.constraint())) {
    throw ValidationError(std::string(name) + " needs a matroid (or no) stage-I constraint");
  }
}

double log_two_power_m(const Instance& instance) { return instance.num_facilities() * std::log(2.0); }

PolyAlgorithm reduction_algorithm(std::string name, double eta, RwSolver solver, std::function<void(const Instance&)> check,
                                  PenaltyWeighting weighting) {
  PolyAlgorithm algo;
  algo.name = std::move(name);
  algo.eta = eta;
  algo.log_strategy_class_size = log_two_power_m;
  algo.check = check;
  algo.solve = [solver = std::move(solver), check, weighting](const Instance& instance,
                                                              const Distribution& distribution)
      -> std::optional<PolySolution> {
    check(instance);
    auto result = reduce_and_solve(instance, distribution, solver, weighting);
    if (!result) return std::nullopt;
    return PolySolution{std::move(result->strategy), io::to_json(result->certificate, instance.geometry())};
  };
  return algo;
}

}  // namespace

PolyAlgorithm make_poly_algorithm(std::string_view selector, const AlgorithmOptions& options) {
  if (selector == "sup3") {
    PolyAlgorithm algo;
    algo.name = "sup3";
    algo.eta = 3.0;
    algo.log_strategy_class_size = [](const Instance& instance) {
      return log_strategy_class_bound(instance.num_clients());
    };
    algo.check = [](const Instance& instance) {
      require_homogeneous(instance, "sup3");
      if (!std::holds_alternative<Unconstrained>(instance.constraint())) {
        throw ValidationError("sup3 does not support stage-I constraints");
      }
    };
    algo.solve = [check = algo.check](const Instance& instance,
                                      const Distribution& distribution) -> std::optional<PolySolution> {
      check(instance);
      auto result = solve_sup_poly(instance, distribution);
      if (!result) return std::nullopt;
      return PolySolution{std::move(result->strategy), io::to_json(result->certificate, instance.geometry())};
    };
    return algo;
  }
  if (selector == "matsup5") {
    return reduction_algorithm(
        "matsup5", 5.0, solve_or_cut_solver(options.solve_or_cut),
        [](const Instance& instance) {
          require_homogeneous(instance, "matsup5");
          require_matroid(instance, "matsup5");
        },
        options.weighting);
  }
  if (selector == "musup5") {
    return reduction_algorithm(
        "musup5", 5.0, solve_or_cut_solver(options.solve_or_cut),
        [](const Instance& instance) {
          require_homogeneous(instance, "musup5");
          if (!std::holds_alternative<KnapsackSystem>(instance.constraint())) {
            throw ValidationError("musup5 needs a multi-knapsack stage-I constraint");
          }
        },
        options.weighting);
  }
  if (selector == "matsup11") {
    return reduction_algorithm(
        "matsup11", 11.0, iterative_rounding_solver(options.iterative),
        [](const Instance& instance) { require_matroid(instance, "matsup11"); }, options.weighting);
  }
  throw ValidationError("unknown algorithm '" + std::string(selector) + "'");
}

std::vector<std::string> poly_algorithm_names() { return {"sup3", "matsup5", "musup5", "matsup11"}; }

}  // namespace stochsup
