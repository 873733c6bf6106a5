#ifndef STOCHSUP_LP_HPP
#define STOCHSUP_LP_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stochsup::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };
enum class ObjectiveSense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status status);

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
};

// Dense row: coefficients has one entry per variable.
struct Constraint {
  std::string name;
  std::vector<double> coefficients;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;

  double activity(std::span<const double> values) const;
  // Positive when the row is violated at `values`.
  double violation(std::span<const double> values) const;
};

/// A dense linear program: bounded variables, named rows, linear objective.
/// All consumer LPs are built by the modules that own them.
class LinearProgram {
 public:
  int add_variable(std::string name, double lower, double upper, double objective = 0.0);
  void set_bounds(int var, double lower, double upper);
  void set_objective_sense(ObjectiveSense sense) { sense_ = sense; }
  void set_objective_coefficient(int var, double coefficient);
  void set_objective_constant(double constant) { objective_constant_ = constant; }

  // Rows must have exactly num_variables() coefficients.
  int add_row(Constraint row);
  int add_row(std::string name, const std::vector<std::pair<int, double>>& terms, Sense sense, double rhs);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& rows() const { return rows_; }
  const std::vector<double>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }
  ObjectiveSense objective_sense() const { return sense_; }

  double evaluate_objective(std::span<const double> values) const;

  // CPLEX-style LP text, for cross-checking with external solvers.
  void write_lp_format(std::ostream& out) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> rows_;
  std::vector<double> objective_;
  double objective_constant_ = 0.0;
  ObjectiveSense sense_ = ObjectiveSense::Minimize;
};

struct Tolerances {
  double feasibility = 1e-7;
  double reduced_cost = 1e-9;
  double integrality = 1e-6;
  double pivot = 1e-11;
};

enum class PricingRule {
  // Smallest-index entering and leaving variables; never cycles.
  Bland,
  // Most negative reduced cost, falling back to Bland after a run of
  // degenerate pivots.
  DantzigWithBlandFallback,
};

struct SolverOptions {
  Tolerances tolerances;
  PricingRule pricing = PricingRule::Bland;
  std::size_t max_pivots = 2'000'000;
};

struct LpSolution {
  Status status = Status::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
  std::vector<double> row_activity;
  // Rows holding with equality at the solution (the basis identification).
  std::vector<bool> tight_rows;
  std::size_t pivots = 0;

  bool optimal() const { return status == Status::Optimal; }
};

/// Solves to a basic (vertex) optimum with the two-phase tableau simplex.
/// Deterministic for identical input. Infeasible/Unbounded are statuses.
LpSolution solve(const LinearProgram& program, const SolverOptions& options = {});

// Returns a row violated by more than the feasibility tolerance, or nullopt.
using SeparationOracle = std::function<std::optional<Constraint>(std::span<const double>)>;

struct SeparationOutcome {
  LpSolution solution;
  LinearProgram program;  // base rows plus every generated cut
  std::size_t rounds = 0;
  std::size_t cuts = 0;
};

/// Lazy row generation: solve, ask the oracle, append its cut, repeat until
/// the oracle is satisfied. Throws IterationLimitExceeded after max_rounds
/// cuts, and std::logic_error if the oracle returns a row that the current
/// point does not violate.
SeparationOutcome solve_with_separation(LinearProgram base, const SeparationOracle& oracle,
                                        std::size_t max_rounds = 1000, const SolverOptions& options = {});

}  // namespace stochsup::lp

#endif  // STOCHSUP_LP_HPP
