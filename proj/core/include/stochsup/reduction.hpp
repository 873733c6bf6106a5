#ifndef STOCHSUP_REDUCTION_HPP
#define STOCHSUP_REDUCTION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stochsup/cluster.hpp"
#include "stochsup/model.hpp"
#include "stochsup/robust_outlier.hpp"

namespace stochsup {

// How scenario costs are folded into client penalties.
enum class PenaltyWeighting {
  // v_j = sum_{A : j in H_A} p_A c^A(i^A_j); keeps V = B meaningful.
  Probability,
  // v_j = sum_{A : j in H_A} c^A(i^A_j), ignoring probabilities. Comparison only.
  Literal,
};

/// A single-stage solver with its coverage factor rho.
struct RwSolver {
  std::string name;
  double rho = 0.0;
  std::function<std::optional<FacilitySet>(const RwInstance&)> solve;
};

RwSolver solve_or_cut_solver(SolveOrCutOptions options = {});
RwSolver iterative_rounding_solver(IterativeRoundingOptions options = {});

/// Everything needed to extend to new scenarios: the stage-I set, rho and
/// the radii. Scenario clusterings are recomputed on demand.
struct ReductionCertificate {
  FacilitySet stage1;
  double rho = 0.0;
  std::vector<double> radii;
};

struct ReducedInstance {
  RwInstance rw;
  std::vector<Clustering> clusterings;  // per scenario, g = -R
};

ReducedInstance build_reduction(const Instance& instance, const Distribution& distribution,
                                PenaltyWeighting weighting = PenaltyWeighting::Probability);

struct ReductionResult {
  Strategy strategy;
  ReductionCertificate certificate;
  ReducedInstance reduced;
};

/// Turns a rho-approximation for the robust problem into a two-stage strategy
/// with coverage factor rho + 2. nullopt propagates INFEASIBLE.
std::optional<ReductionResult> reduce_and_solve(const Instance& instance, const Distribution& distribution,
                                                const RwSolver& solver,
                                                PenaltyWeighting weighting = PenaltyWeighting::Probability);

FacilitySet extend_reduction(const Instance& instance, const ReductionCertificate& certificate,
                             const Scenario& scenario);

}  // namespace stochsup

#endif  // STOCHSUP_REDUCTION_HPP
