#include <doctest.h>

#include <sstream>

#include "stochsup/errors.hpp"
#include "stochsup/lp.hpp"
#include "stochsup/matroid.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace stochsup;
using namespace stochsup::lp;

TEST_CASE("single bound row") {
  LinearProgram p;
  const int x = p.add_variable("x", 0, 1, 1.0);
  p.add_row("lb", {{x, 1.0}}, Sense::GreaterEqual, 0.3);
  const auto s = solve(p);
  REQUIRE(s.optimal());
  CHECK(s.values[0] == doctest::Approx(0.3));
  CHECK(s.objective == doctest::Approx(0.3));
}

TEST_CASE("max x + y over the simplex lands on a vertex") {
  LinearProgram p;
  p.add_variable("x", 0, 1, 1.0);
  p.add_variable("y", 0, 1, 1.0);
  p.set_objective_sense(ObjectiveSense::Maximize);
  p.add_row("sum", {{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 1.0);
  const auto s = solve(p);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(testsupport::tight_rank(p, s.values) == 2);
  const bool corner = (s.values[0] == doctest::Approx(1.0) && s.values[1] == doctest::Approx(0.0)) ||
                      (s.values[0] == doctest::Approx(0.0) && s.values[1] == doctest::Approx(1.0));
  CHECK(corner);
}

TEST_CASE("infeasible and unbounded statuses") {
  LinearProgram p;
  p.add_variable("x", 0, 5, 0.0);
  p.add_row("ge", {{0, 1.0}}, Sense::GreaterEqual, 2.0);
  p.add_row("le", {{0, 1.0}}, Sense::LessEqual, 1.0);
  CHECK(solve(p).status == Status::Infeasible);

  LinearProgram q;
  q.add_variable("x", 0, kInfinity, -1.0);
  CHECK(solve(q).status == Status::Unbounded);
}

TEST_CASE("bounds, negative rhs and equalities") {
  LinearProgram p;
  p.add_variable("x", -2, 3, 1.0);
  p.add_variable("y", -1, 1, 2.0);
  p.add_row("eq", {{0, 1.0}, {1, -1.0}}, Sense::Equal, -1.5);
  const auto s = solve(p);
  REQUIRE(s.optimal());
  // x = y - 1.5, minimize 3y - 1.5 with x >= -2 -> y >= -0.5.
  CHECK(s.values[1] == doctest::Approx(-0.5));
  CHECK(s.objective == doctest::Approx(-3.0));
}

TEST_CASE("solve is deterministic and both pricing rules agree") {
  testsupport::Gen gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testsupport::random_lp(gen, 4, 5);
    const auto a = solve(p);
    const auto b = solve(p);
    CHECK(a.values == b.values);
    SolverOptions dantzig;
    dantzig.pricing = PricingRule::DantzigWithBlandFallback;
    const auto c = solve(p, dantzig);
    REQUIRE(a.status == c.status);
    if (a.optimal()) CHECK(a.objective == doctest::Approx(c.objective).epsilon(1e-9));
  }
}

TEST_CASE("random LPs agree with vertex enumeration and the dual") {
  testsupport::Gen gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testsupport::random_lp(gen);
    const auto s = solve(p);
    const auto brute = testsupport::vertex_enumeration_optimum(p);
    REQUIRE(brute.has_value());
    REQUIRE(s.optimal());
    CHECK(std::abs(s.objective - *brute) <= 1e-6);
    CHECK(testsupport::tight_rank(p, s.values) >= p.num_variables());
    const auto d = solve(testsupport::dual_of(p));
    REQUIRE(d.optimal());
    CHECK(std::abs(d.objective - s.objective) <= 1e-6);
  }
}

TEST_CASE("separation driver") {
  LinearProgram base;
  base.add_variable("x", 0, 1, 0.0);
  int calls = 0;
  const auto quiet = solve_with_separation(base, [&](std::span<const double>) -> std::optional<Constraint> {
    ++calls;
    return std::nullopt;
  });
  CHECK(quiet.cuts == 0);
  CHECK(quiet.solution.values == solve(base).values);

  const auto pushed = solve_with_separation(base, [](std::span<const double> x) -> std::optional<Constraint> {
    if (x[0] < 0.5 - 1e-7) return Constraint{"half", {1.0}, Sense::GreaterEqual, 0.5};
    return std::nullopt;
  });
  CHECK(pushed.solution.values[0] >= 0.5 - 1e-7);
  CHECK(pushed.cuts == 1);

  // An oracle returning a satisfied row is a bug.
  CHECK_THROWS_AS(solve_with_separation(base,
                                        [](std::span<const double>) -> std::optional<Constraint> {
                                          return Constraint{"slack", {1.0}, Sense::LessEqual, 5.0};
                                        }),
                  std::logic_error);

  // Cap on the number of cuts.
  LinearProgram wide;
  wide.add_variable("x", 0, 100, -1.0);
  double wall = 100;
  CHECK_THROWS_AS(solve_with_separation(
                      wide,
                      [&](std::span<const double>) -> std::optional<Constraint> {
                        wall -= 1;
                        return Constraint{"w", {1.0}, Sense::LessEqual, wall};
                      },
                      5),
                  IterationLimitExceeded);
}

TEST_CASE("matroid polytope by separation, uniform rank 1 on 3 elements") {
  const Matroid u = Matroid::uniform(3, 1);
  LinearProgram base;
  for (int i = 0; i < 3; ++i) base.add_variable("z" + std::to_string(i), 0, 1, 1.0);
  base.set_objective_sense(ObjectiveSense::Maximize);
  const auto out = solve_with_separation(base, [&](std::span<const double> z) -> std::optional<Constraint> {
    const auto cut = separate_matroid_polytope(u, z);
    if (!cut) return std::nullopt;
    Constraint row{"rank", std::vector<double>(3, 0.0), Sense::LessEqual, double(cut->rank)};
    for (int i : cut->subset) row.coefficients[static_cast<std::size_t>(i)] = 1.0;
    return row;
  });
  CHECK(out.solution.objective == doctest::Approx(1.0));
  CHECK(testsupport::tight_rank(out.program, out.solution.values) == 3);

  // Every one of the 2^3 rank rows, listed by hand.
  LinearProgram full = base;
  for (const auto& subset : testsupport::all_subsets(3)) {
    if (subset.empty()) continue;
    std::vector<std::pair<int, double>> terms;
    for (int i : subset) terms.push_back({i, 1.0});
    full.add_row("r", terms, Sense::LessEqual, 1.0);
  }
  CHECK(solve(full).objective == doctest::Approx(out.solution.objective).epsilon(1e-9));
}

TEST_CASE("LP text dump names every row") {
  LinearProgram p;
  p.add_variable("x", 0, 1, 1.0);
  p.add_row("cover", {{0, 1.0}}, Sense::GreaterEqual, 0.5);
  std::ostringstream out;
  p.write_lp_format(out);
  CHECK(out.str().find("cover") != std::string::npos);
  CHECK(out.str().find("Minimize") != std::string::npos);
}
