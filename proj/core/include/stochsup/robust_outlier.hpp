#ifndef STOCHSUP_ROBUST_OUTLIER_HPP
#define STOCHSUP_ROBUST_OUTLIER_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "stochsup/lp.hpp"
#include "stochsup/matroid.hpp"
#include "stochsup/model.hpp"

namespace stochsup {

/// Robust weighted supplier instance: open S within the structure so that
/// w(S) + sum of penalties of clients farther than R_j from S stays <= V.
struct RwInstance {
  std::shared_ptr<const Geometry> geometry;
  std::vector<double> radii;      // R_j
  std::vector<double> penalties;  // v_j
  std::vector<double> weights;    // w_i
  StageOneConstraint constraint;
  double budget = 0.0;  // V

  int num_clients() const { return geometry ? geometry->num_clients() : 0; }
  int num_facilities() const { return geometry ? geometry->num_facilities() : 0; }
  bool is_homogeneous() const;
  std::vector<FacilitySet> balls() const { return balls_at(*geometry, radii); }
  // Throws ValidationError on size mismatches or negative money.
  void validate() const;
};

struct RwCheck {
  double budget_used = 0.0;
  ClientSet outliers;  // clients with d(j, S) > rho * R_j
  bool structure_ok = true;
  bool ok = false;
};

/// Recomputes w(S) + sum_{d(j,S) > rho R_j} v_j and compares it with V.
RwCheck check_rw_solution(const RwInstance& instance, std::span<const FacilityId> open, double rho);

struct SolveOrCutOptions {
  // 0 means 10 * (n + m).
  std::size_t max_cuts = 0;
  IntersectionMethod intersection = IntersectionMethod::AugmentingPath;
  std::int64_t table_cap = KnapsackSystem::kDefaultTableCap;
  lp::SolverOptions lp;
};

struct SolveOrCutResult {
  FacilitySet open;
  double psi = 0.0;
  std::size_t cuts = 0;
  // Amount by which each generated cut was violated when it was added.
  std::vector<double> cut_violations;
  std::vector<lp::Constraint> cut_rows;
};

/// Solve-or-cut 3-approximation for homogeneous radii under a matroid or
/// knapsack structure (Unconstrained is treated as the free matroid).
/// nullopt means the relaxation became infeasible, which certifies that no
/// S meets the budget at radius R.
std::optional<SolveOrCutResult> solve_rw_homogeneous(const RwInstance& instance,
                                                     const SolveOrCutOptions& options = {});

struct RoundingIteration {
  ClientId chosen = -1;
  bool committed = false;  // moved to C1 (true) or C0 (false)
  double objective = 0.0;  // Main LP optimum before the move
  double ball_mass = 0.0;  // z(G_chosen)
  ClientSet evicted;
  ClientSet c0, c1, cs;  // after the move
};

struct IterativeRoundingResult {
  FacilitySet open;
  ClientSet outliers;      // final C0
  ClientSet ever_committed;  // every client that was in C1 at some point
  std::vector<RoundingIteration> trace;
  double initial_objective = 0.0;
  double final_objective = 0.0;
};

struct IterativeRoundingOptions {
  double integrality = 1e-6;
  lp::SolverOptions lp;
};

/// Iterative-rounding 9-approximation for inhomogeneous radii under a matroid.
/// Invariants are checked live and reported as InvariantViolation; a Main LP
/// vertex without an integral ball raises NoIntegralClientFound.
std::optional<IterativeRoundingResult> solve_rw_matsup_inhomogeneous(const RwInstance& instance,
                                                                     const IterativeRoundingOptions& options = {});

}  // namespace stochsup

#endif  // STOCHSUP_ROBUST_OUTLIER_HPP
