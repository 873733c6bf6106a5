#include "stochsup/lp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "stochsup/errors.hpp"

namespace stochsup::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

double Constraint::activity(std::span<const double> values) const {
  double total = 0.0;
  for (std::size_t k = 0; k < coefficients.size() && k < values.size(); ++k) total += coefficients[k] * values[k];
  return total;
}

double Constraint::violation(std::span<const double> values) const {
  const double a = activity(values);
  switch (sense) {
    case Sense::LessEqual:
      return a - rhs;
    case Sense::GreaterEqual:
      return rhs - a;
    case Sense::Equal:
      return std::abs(a - rhs);
  }
  return 0.0;
}

int LinearProgram::add_variable(std::string name, double lower, double upper, double objective) {
  if (!std::isfinite(lower)) throw ValidationError("variable '" + name + "' needs a finite lower bound");
  if (upper < lower) throw ValidationError("variable '" + name + "' has upper < lower");
  variables_.push_back({std::move(name), lower, upper});
  objective_.push_back(objective);
  for (auto& row : rows_) row.coefficients.push_back(0.0);
  return num_variables() - 1;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  if (!std::isfinite(lower) || upper < lower) throw ValidationError("bad bounds for " + variables_.at(var).name);
  variables_.at(static_cast<std::size_t>(var)).lower = lower;
  variables_.at(static_cast<std::size_t>(var)).upper = upper;
}

void LinearProgram::set_objective_coefficient(int var, double coefficient) {
  objective_.at(static_cast<std::size_t>(var)) = coefficient;
}

int LinearProgram::add_row(Constraint row) {
  if (row.coefficients.size() != variables_.size()) {
    throw ValidationError("row '" + row.name + "' has " + std::to_string(row.coefficients.size()) +
                          " coefficients, expected " + std::to_string(variables_.size()));
  }
  rows_.push_back(std::move(row));
  return num_rows() - 1;
}

int LinearProgram::add_row(std::string name, const std::vector<std::pair<int, double>>& terms, Sense sense,
                           double rhs) {
  Constraint row{std::move(name), std::vector<double>(variables_.size(), 0.0), sense, rhs};
  for (const auto& [var, coef] : terms) {
    if (var < 0 || var >= num_variables()) throw ValidationError("row '" + row.name + "' references unknown variable");
    row.coefficients[static_cast<std::size_t>(var)] += coef;
  }
  return add_row(std::move(row));
}

double LinearProgram::evaluate_objective(std::span<const double> values) const {
  double total = objective_constant_;
  for (std::size_t k = 0; k < objective_.size(); ++k) total += objective_[k] * values[k];
  return total;
}

namespace {

std::string lp_name(const std::string& raw, const char* prefix, std::size_t index) {
  std::string out;
  for (char ch : raw) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.';
    out.push_back(ok ? ch : '_');
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front())) || out.front() == '.') {
    out = prefix + std::to_string(index) + (out.empty() ? "" : "_" + out);
  }
  return out;
}

void write_terms(std::ostream& out, std::span<const double> coefficients, const std::vector<std::string>& names) {
  bool first = true;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    const double c = coefficients[k];
    if (c == 0.0) continue;
    if (first) {
      out << (c < 0 ? "-" : "") << ' ';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    out << std::abs(c) << ' ' << names[k];
    first = false;
  }
  if (first) out << ' ' << 0 << ' ' << (names.empty() ? "x0" : names.front());
}

}  // namespace

void LinearProgram::write_lp_format(std::ostream& out) const {
  std::vector<std::string> names;
  names.reserve(variables_.size());
  for (std::size_t k = 0; k < variables_.size(); ++k) names.push_back(lp_name(variables_[k].name, "x", k));

  const auto old_precision = out.precision(17);
  out << (sense_ == ObjectiveSense::Minimize ? "Minimize\n" : "Maximize\n") << " obj:";
  write_terms(out, objective_, names);
  if (objective_constant_ != 0.0) out << (objective_constant_ < 0 ? " - " : " + ") << std::abs(objective_constant_);
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto& row = rows_[r];
    out << ' ' << lp_name(row.name, "r", r) << ':';
    write_terms(out, row.coefficients, names);
    switch (row.sense) {
      case Sense::LessEqual:
        out << " <= ";
        break;
      case Sense::GreaterEqual:
        out << " >= ";
        break;
      case Sense::Equal:
        out << " = ";
        break;
    }
    out << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (std::size_t k = 0; k < variables_.size(); ++k) {
    const auto& v = variables_[k];
    out << ' ' << v.lower << " <= " << names[k];
    if (std::isfinite(v.upper)) out << " <= " << v.upper;
    out << '\n';
  }
  out << "End\n";
  out.precision(old_precision);
}

namespace {

// Tableau in standard form: every column is >= 0, rows are equalities with a
// nonnegative right-hand side. Column layout: shifted structurals, slacks,
// artificials; the last tableau column is the rhs.
class Tableau {
 public:
  Tableau(const LinearProgram& program, const SolverOptions& options) : options_(options) {
    const auto& vars = program.variables();
    const auto& rows = program.rows();
    n_struct_ = vars.size();

    struct StdRow {
      std::vector<double> coef;  // over structurals
      double rhs;
      Sense sense;
    };
    std::vector<StdRow> std_rows;
    std_rows.reserve(rows.size() + vars.size());
    for (const auto& row : rows) {
      double rhs = row.rhs;
      for (std::size_t k = 0; k < n_struct_; ++k) rhs -= row.coefficients[k] * vars[k].lower;
      std_rows.push_back({row.coefficients, rhs, row.sense});
    }
    for (std::size_t k = 0; k < n_struct_; ++k) {
      if (!std::isfinite(vars[k].upper)) continue;
      std::vector<double> coef(n_struct_, 0.0);
      coef[k] = 1.0;
      std_rows.push_back({std::move(coef), vars[k].upper - vars[k].lower, Sense::LessEqual});
    }
    for (auto& row : std_rows) {
      if (row.rhs < 0.0) {
        for (auto& c : row.coef) c = -c;
        row.rhs = -row.rhs;
        if (row.sense == Sense::LessEqual) {
          row.sense = Sense::GreaterEqual;
        } else if (row.sense == Sense::GreaterEqual) {
          row.sense = Sense::LessEqual;
        }
      }
    }

    rows_ = std_rows.size();
    std::size_t n_slack = 0;
    std::size_t n_art = 0;
    for (const auto& row : std_rows) {
      if (row.sense != Sense::Equal) ++n_slack;
      if (row.sense != Sense::LessEqual) ++n_art;
    }
    first_art_ = n_struct_ + n_slack;
    cols_ = first_art_ + n_art;
    width_ = cols_ + 1;
    data_.assign(rows_ * width_, 0.0);
    basis_.assign(rows_, 0);

    std::size_t slack = n_struct_;
    std::size_t art = first_art_;
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto& row = std_rows[r];
      double* t = &data_[r * width_];
      std::copy(row.coef.begin(), row.coef.end(), t);
      t[cols_] = row.rhs;
      if (row.sense == Sense::LessEqual) {
        t[slack] = 1.0;
        basis_[r] = slack++;
      } else if (row.sense == Sense::GreaterEqual) {
        t[slack++] = -1.0;
        t[art] = 1.0;
        basis_[r] = art++;
      } else {
        t[art] = 1.0;
        basis_[r] = art++;
      }
      rhs_scale_ = std::max(rhs_scale_, std::abs(row.rhs));
    }
  }

  // Returns false when phase I leaves positive artificial mass.
  bool phase_one() {
    if (first_art_ == cols_) return true;
    std::vector<double> cost(cols_, 0.0);
    for (std::size_t c = first_art_; c < cols_; ++c) cost[c] = 1.0;
    load_costs(cost);
    if (!optimize(cols_)) throw std::logic_error("phase I cannot be unbounded");
    const double infeasibility = -z_[cols_];
    if (infeasibility > options_.tolerances.feasibility * std::max(1.0, rhs_scale_)) return false;
    // Drive remaining artificials out of the basis where possible. Rows where
    // no structural or slack entry is nonzero are redundant and stay inert.
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < first_art_) continue;
      const double* t = &data_[r * width_];
      for (std::size_t c = 0; c < first_art_; ++c) {
        if (std::abs(t[c]) > 1e-9) {
          pivot(r, c);
          break;
        }
      }
    }
    return true;
  }

  // Minimizes cost over the non-artificial columns. Returns false if unbounded.
  bool phase_two(const std::vector<double>& structural_cost) {
    std::vector<double> cost(cols_, 0.0);
    std::copy(structural_cost.begin(), structural_cost.end(), cost.begin());
    load_costs(cost);
    return optimize(first_art_);
  }

  std::vector<double> structural_values() const {
    std::vector<double> x(n_struct_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < n_struct_) x[basis_[r]] = data_[r * width_ + cols_];
    }
    return x;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  void load_costs(const std::vector<double>& cost) {
    z_.assign(width_, 0.0);
    std::copy(cost.begin(), cost.end(), z_.begin());
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      const double* t = &data_[r * width_];
      for (std::size_t c = 0; c < width_; ++c) z_[c] -= cb * t[c];
    }
  }

  std::size_t choose_entering(std::size_t limit, bool bland) const {
    const double tol = options_.tolerances.reduced_cost;
    std::size_t best = limit;
    double best_value = -tol;
    for (std::size_t c = 0; c < limit; ++c) {
      if (z_[c] < -tol) {
        if (bland) return c;
        if (z_[c] < best_value) {
          best_value = z_[c];
          best = c;
        }
      }
    }
    return best;
  }

  std::size_t choose_leaving(std::size_t col) const {
    const double tol = options_.tolerances.pivot;
    std::size_t best = rows_;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows_; ++r) {
      const double a = data_[r * width_ + col];
      if (a <= tol) continue;
      const double ratio = std::max(0.0, data_[r * width_ + cols_]) / a;
      if (best == rows_ || ratio < best_ratio - 1e-12) {
        best = r;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-12 && basis_[r] < basis_[best]) {
        best = r;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    return best;
  }

  bool optimize(std::size_t column_limit) {
    const bool always_bland = options_.pricing == PricingRule::Bland;
    std::size_t degenerate_run = 0;
    for (;;) {
      const bool bland = always_bland || degenerate_run > 50;
      const std::size_t col = choose_entering(column_limit, bland);
      if (col == column_limit) return true;
      const std::size_t row = choose_leaving(col);
      if (row == rows_) return false;
      const double step = data_[row * width_ + cols_];
      degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;
      pivot(row, col);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    if (++pivots_ > options_.max_pivots) throw IterationLimitExceeded("simplex pivot limit reached");
    double* pr = &data_[row * width_];
    const double inv = 1.0 / pr[col];
    for (std::size_t c = 0; c < width_; ++c) pr[c] *= inv;
    pr[col] = 1.0;
    auto eliminate = [&](double* target) {
      const double factor = target[col];
      if (factor == 0.0) return;
      for (std::size_t c = 0; c < width_; ++c) {
        if (pr[c] != 0.0) target[c] -= factor * pr[c];
      }
      target[col] = 0.0;
    };
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r != row) eliminate(&data_[r * width_]);
    }
    if (!z_.empty()) eliminate(z_.data());
    basis_[row] = col;
  }

  const SolverOptions& options_;
  std::size_t n_struct_ = 0;
  std::size_t first_art_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t width_ = 0;
  double rhs_scale_ = 0.0;
  std::vector<double> data_;
  std::vector<double> z_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& program, const SolverOptions& options) {
  LpSolution result;
  Tableau tableau(program, options);
  if (!tableau.phase_one()) {
    result.status = Status::Infeasible;
    result.pivots = tableau.pivots();
    return result;
  }
  std::vector<double> cost = program.objective();
  if (program.objective_sense() == ObjectiveSense::Maximize) {
    for (auto& c : cost) c = -c;
  }
  if (!tableau.phase_two(cost)) {
    result.status = Status::Unbounded;
    result.pivots = tableau.pivots();
    return result;
  }

  result.status = Status::Optimal;
  result.pivots = tableau.pivots();
  auto shifted = tableau.structural_values();
  const auto& vars = program.variables();
  result.values.resize(vars.size());
  for (std::size_t k = 0; k < vars.size(); ++k) {
    double v = vars[k].lower + shifted[k];
    // Snap round-off back into the box.
    if (v < vars[k].lower) v = vars[k].lower;
    if (v > vars[k].upper) v = vars[k].upper;
    result.values[k] = v;
  }
  result.objective = program.evaluate_objective(result.values);

  const double tol = options.tolerances.feasibility;
  for (const auto& row : program.rows()) {
    const double a = row.activity(result.values);
    result.row_activity.push_back(a);
    const bool tight = row.sense == Sense::Equal || std::abs(a - row.rhs) <= tol * std::max(1.0, std::abs(row.rhs));
    result.tight_rows.push_back(tight);
  }
  return result;
}

SeparationOutcome solve_with_separation(LinearProgram base, const SeparationOracle& oracle, std::size_t max_rounds,
                                        const SolverOptions& options) {
  SeparationOutcome outcome;
  outcome.program = std::move(base);
  for (;;) {
    ++outcome.rounds;
    outcome.solution = solve(outcome.program, options);
    if (!outcome.solution.optimal()) return outcome;
    auto cut = oracle(outcome.solution.values);
    if (!cut) return outcome;
    const double violation = cut->violation(outcome.solution.values);
    if (!(violation > options.tolerances.feasibility * std::max(1.0, std::abs(cut->rhs)))) {
      throw std::logic_error("separation oracle returned a row that is not violated (" + cut->name + ")");
    }
    if (outcome.cuts >= max_rounds) {
      throw IterationLimitExceeded("separation did not converge within " + std::to_string(max_rounds) + " cuts");
    }
    outcome.program.add_row(std::move(*cut));
    ++outcome.cuts;
  }
}

}  // namespace stochsup::lp
