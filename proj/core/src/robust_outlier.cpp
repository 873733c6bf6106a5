#include "stochsup/robust_outlier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochsup/cluster.hpp"
#include "stochsup/errors.hpp"

namespace stochsup {

bool RwInstance::is_homogeneous() const {
  return std::adjacent_find(radii.begin(), radii.end(), std::not_equal_to<>()) == radii.end();
}

void RwInstance::validate() const {
  if (!geometry) throw ValidationError("RW instance has no geometry");
  const auto n = static_cast<std::size_t>(num_clients());
  const auto m = static_cast<std::size_t>(num_facilities());
  if (radii.size() != n || penalties.size() != n) throw ValidationError("RW instance needs one radius and penalty per client");
  if (weights.size() != m) throw ValidationError("RW instance needs one weight per facility");
  for (double r : radii) {
    if (!(r >= 0.0)) throw ValidationError("radii must be nonnegative");
  }
  for (double v : penalties) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("penalties must be finite and nonnegative");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("weights must be finite and nonnegative");
  }
  if (!(budget >= 0.0)) throw ValidationError("budget V must be nonnegative");
  if (const auto* mat = std::get_if<Matroid>(&constraint)) {
    if (mat->ground_size() != num_facilities()) throw ValidationError("matroid ground set must be the facilities");
  } else if (const auto* ks = std::get_if<KnapsackSystem>(&constraint)) {
    ks->validate(num_facilities());
  }
}

RwCheck check_rw_solution(const RwInstance& instance, std::span<const FacilityId> open, double rho) {
  RwCheck check;
  check.budget_used = set_cost(open, instance.weights);
  for (int j = 0; j < instance.num_clients(); ++j) {
    const double d = instance.geometry->distance_to_set(j, open);
    if (!within_radius(d, rho * instance.radii[static_cast<std::size_t>(j)])) {
      check.outliers.push_back(j);
      check.budget_used += instance.penalties[static_cast<std::size_t>(j)];
    }
  }
  check.structure_ok = is_stage1_feasible(instance.constraint, open);
  check.ok = check.structure_ok && check.budget_used <= instance.budget + budget_tolerance(instance.budget);
  return check;
}

namespace {

// Unconstrained behaves as the free matroid for the matroid-based solvers.
Matroid as_matroid(const RwInstance& instance, const char* who) {
  if (const auto* mat = std::get_if<Matroid>(&instance.constraint)) return *mat;
  if (std::holds_alternative<Unconstrained>(instance.constraint)) return Matroid::free(instance.num_facilities());
  throw ValidationError(std::string(who) + " needs a matroid constraint");
}

double ball_mass(std::span<const FacilityId> ball, std::span<const double> z) {
  double total = 0.0;
  for (FacilityId i : ball) total += z[static_cast<std::size_t>(i)];
  return total;
}

}  // namespace

std::optional<SolveOrCutResult> solve_rw_homogeneous(const RwInstance& instance, const SolveOrCutOptions& options) {
  instance.validate();
  if (!instance.is_homogeneous()) throw ValidationError("solve-or-cut needs homogeneous radii");
  const int n = instance.num_clients();
  const int m = instance.num_facilities();
  const auto balls = instance.balls();
  const double tolerance = budget_tolerance(instance.budget);

  // Variables: x_j (client outlier mass) then y_i (facility mass).
  lp::LinearProgram program;
  std::vector<std::pair<int, double>> budget_terms;
  for (int j = 0; j < n; ++j) {
    const double v = instance.penalties[static_cast<std::size_t>(j)];
    program.add_variable("x_" + std::to_string(j), 0.0, 1.0, v);
    budget_terms.emplace_back(j, v);
  }
  for (int i = 0; i < m; ++i) {
    const double w = instance.weights[static_cast<std::size_t>(i)];
    program.add_variable("y_" + std::to_string(i), 0.0, 1.0, w);
    budget_terms.emplace_back(n + i, w);
  }
  program.add_row("budget", budget_terms, lp::Sense::LessEqual, instance.budget);

  std::optional<Matroid> matroid;
  const KnapsackSystem* knapsack = std::get_if<KnapsackSystem>(&instance.constraint);
  if (!knapsack) matroid = as_matroid(instance, "solve-or-cut");

  std::vector<ClientId> everyone(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) everyone[static_cast<std::size_t>(j)] = j;

  SolveOrCutResult result;
  bool accepted = false;
  auto oracle = [&](std::span<const double> point) -> std::optional<lp::Constraint> {
    // Visit clients by increasing x*, so representatives carry the smallest
    // outlier mass of their cluster.
    std::vector<double> order(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = -point[static_cast<std::size_t>(j)];
    const Clustering clustering = greedy_cluster(balls, everyone, order);

    std::vector<ElementSet> rep_balls;
    std::vector<double> t;
    for (ClientId rep : clustering.representatives) {
      rep_balls.push_back(balls[static_cast<std::size_t>(rep)]);
      double total = 0.0;
      for (int j = 0; j < n; ++j) {
        if (clustering.assignment[static_cast<std::size_t>(j)] == rep) total += instance.penalties[static_cast<std::size_t>(j)];
      }
      t.push_back(total);
    }
    const PsiResult best = knapsack ? minimize_psi_knapsack(*knapsack, rep_balls, instance.weights, t, options.table_cap)
                                    : minimize_psi_matroid(*matroid, rep_balls, instance.weights, t, options.intersection);
    if (best.psi <= instance.budget + tolerance) {
      result.open = best.chosen;
      result.psi = best.psi;
      accepted = true;
      return std::nullopt;
    }
    // Every distribution over feasible S satisfies
    //   sum_{j in H} (w(y restricted to G_j) + t_j x_j) >= min Psi,
    // while the current point sits at or below V on the left-hand side.
    lp::Constraint cut{"cut_" + std::to_string(result.cuts), std::vector<double>(static_cast<std::size_t>(n + m), 0.0),
                       lp::Sense::GreaterEqual, best.psi};
    for (std::size_t r = 0; r < clustering.representatives.size(); ++r) {
      const ClientId rep = clustering.representatives[r];
      cut.coefficients[static_cast<std::size_t>(rep)] += t[r];
      for (FacilityId i : rep_balls[r]) {
        cut.coefficients[static_cast<std::size_t>(n + i)] += instance.weights[static_cast<std::size_t>(i)];
      }
    }
    result.cut_violations.push_back(cut.violation(point));
    result.cut_rows.push_back(cut);
    ++result.cuts;
    return cut;
  };

  const std::size_t cap = options.max_cuts ? options.max_cuts : static_cast<std::size_t>(10 * (n + m));
  const auto outcome = lp::solve_with_separation(std::move(program), oracle, cap, options.lp);
  if (!outcome.solution.optimal() || !accepted) return std::nullopt;
  return result;
}

namespace {

class IterativeRounder {
 public:
  IterativeRounder(const RwInstance& instance, const IterativeRoundingOptions& options)
      : instance_(instance),
        options_(options),
        matroid_(as_matroid(instance, "iterative rounding")),
        balls_(instance.balls()),
        rank_rows_(matroid_.polytope_rows()) {}

  std::optional<IterativeRoundingResult> run() {
    const int n = instance_.num_clients();
    const auto initial = solve_relaxation();
    if (!initial) return std::nullopt;
    result_.initial_objective = initial->objective;
    const auto& y = *initial;

    std::vector<double> y_mass(static_cast<std::size_t>(n));
    std::vector<ClientId> heavy;
    for (int j = 0; j < n; ++j) {
      y_mass[static_cast<std::size_t>(j)] = ball_mass(balls_[static_cast<std::size_t>(j)], y.values);
      if (y_mass[static_cast<std::size_t>(j)] > 1.0 + kMassSlack) heavy.push_back(j);
    }
    const auto order = descending_radius_order(instance_.radii);
    const Clustering committed = greedy_cluster(balls_, heavy, order);
    c1_ = committed.representatives;
    std::sort(c1_.begin(), c1_.end());
    for (int j = 0; j < n; ++j) {
      if (y_mass[static_cast<std::size_t>(j)] > 1.0 + kMassSlack) continue;
      bool keep = true;
      for (ClientId other : c1_) {
        if (sets_intersect(ball(j), ball(other)) && !(radius(j) < radius(other) / 2.0)) {
          keep = false;
          break;
        }
      }
      if (keep) cs_.push_back(j);
    }
    ever_committed_ = c1_;
    check_invariants();

    double previous = instance_.budget;
    while (!cs_.empty()) {
      const auto z = solve_main_lp();
      check_objective(z.objective, previous);
      previous = z.objective;

      RoundingIteration step;
      step.objective = z.objective;
      for (ClientId j : cs_) {
        const double mass = ball_mass(ball(j), z.values);
        if (std::abs(mass) <= options_.integrality || std::abs(mass - 1.0) <= options_.integrality) {
          step.chosen = j;
          step.ball_mass = mass;
          step.committed = std::abs(mass - 1.0) <= options_.integrality;
          break;
        }
      }
      if (step.chosen < 0) {
        throw NoIntegralClientFound("Main LP vertex has no undecided client with integral ball mass");
      }
      erase(cs_, step.chosen);
      if (!step.committed) {
        insert(c0_, step.chosen);
      } else {
        const ClientId j = step.chosen;
        for (const ClientSet* pool : {&c1_, &cs_}) {
          for (ClientId other : *pool) {
            if (sets_intersect(ball(j), ball(other)) && radius(other) >= radius(j) / 2.0) step.evicted.push_back(other);
          }
        }
        for (ClientId other : step.evicted) {
          erase(c1_, other);
          erase(cs_, other);
        }
        std::sort(step.evicted.begin(), step.evicted.end());
        insert(c1_, j);
        insert(ever_committed_, j);
      }
      check_invariants();
      step.c0 = c0_;
      step.c1 = c1_;
      step.cs = cs_;
      result_.trace.push_back(std::move(step));
    }

    const auto final_z = solve_main_lp();
    check_objective(final_z.objective, previous);
    for (int i = 0; i < instance_.num_facilities(); ++i) {
      const double v = final_z.values[static_cast<std::size_t>(i)];
      if (std::abs(v) > options_.integrality && std::abs(v - 1.0) > options_.integrality) {
        throw InvariantViolation("final Main LP solution is fractional at facility " + std::to_string(i));
      }
      if (v > 0.5) result_.open.push_back(i);
    }
    if (!matroid_.is_independent(result_.open)) throw InvariantViolation("rounded set is not independent");
    result_.final_objective = final_z.objective;
    result_.outliers = c0_;
    result_.ever_committed = ever_committed_;
    return std::move(result_);
  }

 private:
  static constexpr double kMassSlack = 1e-9;

  const FacilitySet& ball(ClientId j) const { return balls_[static_cast<std::size_t>(j)]; }
  double radius(ClientId j) const { return instance_.radii[static_cast<std::size_t>(j)]; }

  static void insert(ClientSet& set, ClientId j) { set.insert(std::lower_bound(set.begin(), set.end(), j), j); }
  static void erase(ClientSet& set, ClientId j) {
    auto it = std::lower_bound(set.begin(), set.end(), j);
    if (it != set.end() && *it == j) set.erase(it);
  }

  void add_rank_rows(lp::LinearProgram& program, int offset) const {
    for (const auto& row : rank_rows_) {
      std::vector<std::pair<int, double>> terms;
      for (int i : row.subset) terms.emplace_back(offset + i, 1.0);
      program.add_row("rank", terms, lp::Sense::LessEqual, row.rank);
    }
  }

  // Relaxation with outlier variables: x_j >= 1 - y(G_j), budget row, rank rows.
  std::optional<lp::LpSolution> solve_relaxation() const {
    const int n = instance_.num_clients();
    const int m = instance_.num_facilities();
    lp::LinearProgram program;
    std::vector<std::pair<int, double>> budget_terms;
    for (int i = 0; i < m; ++i) {
      const double w = instance_.weights[static_cast<std::size_t>(i)];
      program.add_variable("y_" + std::to_string(i), 0.0, 1.0, w);
      budget_terms.emplace_back(i, w);
    }
    for (int j = 0; j < n; ++j) {
      const double v = instance_.penalties[static_cast<std::size_t>(j)];
      program.add_variable("x_" + std::to_string(j), 0.0, 1.0, v);
      budget_terms.emplace_back(m + j, v);
    }
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<int, double>> terms{{m + j, 1.0}};
      for (FacilityId i : ball(j)) terms.emplace_back(i, 1.0);
      program.add_row("cover_" + std::to_string(j), terms, lp::Sense::GreaterEqual, 1.0);
    }
    program.add_row("budget", budget_terms, lp::Sense::LessEqual, instance_.budget);
    add_rank_rows(program, 0);
    auto solution = lp::solve(program, options_.lp);
    if (!solution.optimal()) return std::nullopt;
    solution.values.resize(static_cast<std::size_t>(m));
    return solution;
  }

  lp::LpSolution solve_main_lp() const {
    const int m = instance_.num_facilities();
    lp::LinearProgram program;
    double constant = 0.0;
    std::vector<double> coef(instance_.weights);
    for (ClientId j : c0_) constant += instance_.penalties[static_cast<std::size_t>(j)];
    for (ClientId j : cs_) {
      const double v = instance_.penalties[static_cast<std::size_t>(j)];
      constant += v;
      for (FacilityId i : ball(j)) coef[static_cast<std::size_t>(i)] -= v;
    }
    std::vector<bool> closed(static_cast<std::size_t>(m), false);
    for (ClientId j : c0_) {
      for (FacilityId i : ball(j)) closed[static_cast<std::size_t>(i)] = true;
    }
    for (int i = 0; i < m; ++i) {
      program.add_variable("z_" + std::to_string(i), 0.0, closed[static_cast<std::size_t>(i)] ? 0.0 : 1.0,
                           coef[static_cast<std::size_t>(i)]);
    }
    program.set_objective_constant(constant);
    auto ball_terms = [&](ClientId j) {
      std::vector<std::pair<int, double>> terms;
      for (FacilityId i : ball(j)) terms.emplace_back(i, 1.0);
      return terms;
    };
    for (ClientId j : c1_) program.add_row("c1_" + std::to_string(j), ball_terms(j), lp::Sense::GreaterEqual, 1.0);
    for (ClientId j : cs_) program.add_row("cs_" + std::to_string(j), ball_terms(j), lp::Sense::LessEqual, 1.0);
    add_rank_rows(program, 0);
    auto solution = lp::solve(program, options_.lp);
    if (!solution.optimal()) throw InvariantViolation("Main LP lost feasibility");
    return solution;
  }

  void check_objective(double objective, double previous) const {
    if (objective > previous + 1e-7) {
      throw InvariantViolation("Main LP objective increased from " + std::to_string(previous) + " to " +
                               std::to_string(objective));
    }
    if (objective > instance_.budget + 1e-7 * std::max(1.0, instance_.budget)) {
      throw InvariantViolation("Main LP objective exceeds V");
    }
  }

  void check_invariants() const {
    for (std::size_t a = 0; a < c1_.size(); ++a) {
      for (std::size_t b = a + 1; b < c1_.size(); ++b) {
        if (sets_intersect(ball(c1_[a]), ball(c1_[b]))) throw InvariantViolation("committed clients share a facility");
      }
    }
    auto overlaps = [](const ClientSet& a, const ClientSet& b) {
      return std::any_of(a.begin(), a.end(), [&](ClientId j) { return std::binary_search(b.begin(), b.end(), j); });
    };
    if (overlaps(c0_, c1_) || overlaps(c0_, cs_) || overlaps(c1_, cs_)) {
      throw InvariantViolation("client sets C0, C1, Cs are not disjoint");
    }
  }

  const RwInstance& instance_;
  IterativeRoundingOptions options_;
  Matroid matroid_;
  std::vector<FacilitySet> balls_;
  std::vector<Matroid::RankRow> rank_rows_;
  ClientSet c0_, c1_, cs_, ever_committed_;
  IterativeRoundingResult result_;
};

}  // namespace

std::optional<IterativeRoundingResult> solve_rw_matsup_inhomogeneous(const RwInstance& instance,
                                                                     const IterativeRoundingOptions& options) {
  instance.validate();
  return IterativeRounder(instance, options).run();
}

}  // namespace stochsup
