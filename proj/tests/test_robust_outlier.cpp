#include <doctest.h>

#include "stochsup/bruteforce.hpp"
#include "stochsup/errors.hpp"
#include "stochsup/robust_outlier.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace stochsup;
using testsupport::ConstraintKind;

namespace {

RwInstance one_client(double w, double v, double V) {
  RwInstance rw;
  rw.geometry = testsupport::line_geometry({0}, {1});
  rw.radii = {1};
  rw.penalties = {v};
  rw.weights = {w};
  rw.constraint = Matroid::uniform(1, 1);
  rw.budget = V;
  return rw;
}

FacilitySet ball_at(const RwInstance& rw, ClientId j) { return rw.balls()[static_cast<std::size_t>(j)]; }

}  // namespace

TEST_CASE("check_rw_solution examples") {
  RwInstance rw = one_client(2, 0, 0);
  auto c = check_rw_solution(rw, FacilitySet{}, 3);
  CHECK(c.budget_used == 0.0);
  CHECK(c.ok);
  rw.penalties = {3};
  rw.budget = 2;
  c = check_rw_solution(rw, FacilitySet{}, 3);
  CHECK_FALSE(c.ok);
  CHECK(c.outliers == ClientSet{0});
}

TEST_CASE("check_rw_solution agrees with a distance-based recomputation") {
  testsupport::Gen gen(31);
  for (int trial = 0; trial < 300; ++trial) {
    RwInstance rw = testsupport::random_rw_instance(gen, {6, 6, trial % 2 == 0, ConstraintKind::None});
    rw.budget = testsupport::uniform_int(gen, 0, 20);
    FacilitySet s;
    for (int i = 0; i < rw.num_facilities(); ++i) {
      if (testsupport::coin(gen)) s.push_back(i);
    }
    for (double rho : {1.0, 3.0, 9.0}) {
      const auto c = check_rw_solution(rw, s, rho);
      const double brute = testsupport::rw_objective(rw, s, rho);
      CHECK(c.budget_used == brute);
      CHECK(c.ok == (brute <= rw.budget + 1e-7 * std::max(1.0, rw.budget)));
    }
  }
}

TEST_CASE("solve-or-cut examples") {
  const auto open = solve_rw_homogeneous(one_client(2, 10, 2));
  REQUIRE(open.has_value());
  CHECK(open->open == FacilitySet{0});
  CHECK_FALSE(solve_rw_homogeneous(one_client(2, 10, 1)).has_value());
  const auto skip = solve_rw_homogeneous(one_client(2, 1, 1));
  REQUIRE(skip.has_value());
  CHECK(skip->open.empty());
}

TEST_CASE("solve-or-cut against brute force, cut validity") {
  testsupport::Gen gen(33);
  const ConstraintKind kinds[] = {ConstraintKind::Uniform, ConstraintKind::Partition, ConstraintKind::Graphic,
                                  ConstraintKind::Knapsack, ConstraintKind::None};
  int feasible = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 250; ++trial) {
    RwInstance rw = testsupport::random_rw_instance(gen, {6, 6, true, kinds[trial % 5]});
    const auto best = testsupport::brute_rw(rw);
    rw.budget = std::max(0.0, best.value + testsupport::uniform_int(gen, -3, 2));
    const auto got = solve_rw_homogeneous(rw);
    const bool exact_ok = best.value <= rw.budget + 1e-9;
    CHECK(exact_rw(rw).feasible == exact_ok);
    if (exact_ok) {
      ++feasible;
      REQUIRE(got.has_value());
    } else {
      ++infeasible;
    }
    if (!got) continue;
    const auto check = check_rw_solution(rw, got->open, 3.0);
    CHECK(check.ok);
    CHECK(check.budget_used <= got->psi + 1e-9);
    for (double v : got->cut_violations) CHECK(v > 1e-7);
    for (const auto& s : testsupport::all_subsets(rw.num_facilities())) {
      if (!is_stage1_feasible(rw.constraint, s)) continue;
      // Image (x, y) of an integral S at radius R.
      std::vector<double> point(static_cast<std::size_t>(rw.num_clients() + rw.num_facilities()), 0.0);
      for (int j = 0; j < rw.num_clients(); ++j) {
        if (!within_radius(rw.geometry->distance_to_set(j, s), rw.radii[static_cast<std::size_t>(j)])) point[static_cast<std::size_t>(j)] = 1.0;
      }
      for (int i : s) point[static_cast<std::size_t>(rw.num_clients() + i)] = 1.0;
      for (const auto& cut : got->cut_rows) CHECK(cut.violation(point) <= 1e-9);
    }
  }
  CHECK(feasible > 50);
  CHECK(infeasible > 20);
}

TEST_CASE("solve-or-cut rejects inhomogeneous radii") {
  RwInstance rw = one_client(1, 1, 1);
  rw.geometry = testsupport::line_geometry({0, 2}, {1});
  rw.radii = {1, 2};
  rw.penalties = {1, 1};
  CHECK_THROWS_AS(solve_rw_homogeneous(rw), ValidationError);
}

TEST_CASE("iterative rounding examples") {
  const auto single = solve_rw_matsup_inhomogeneous(one_client(1, 100, 1));
  REQUIRE(single.has_value());
  CHECK(single->open == FacilitySet{0});

  testsupport::Gen gen(35);
  for (int trial = 0; trial < 30; ++trial) {
    RwInstance rw = testsupport::random_rw_instance(gen, {6, 6, false, ConstraintKind::Uniform});
    std::fill(rw.penalties.begin(), rw.penalties.end(), 0.0);
    rw.budget = testsupport::uniform_int(gen, 0, 4);
    const auto r = solve_rw_matsup_inhomogeneous(rw);
    REQUIRE(r.has_value());
    CHECK(set_cost(r->open, rw.weights) <= rw.budget + 1e-9);
  }

  RwInstance knapsack = one_client(1, 1, 1);
  knapsack.constraint = KnapsackSystem{{{1}}, {1}};
  CHECK_THROWS_AS(solve_rw_matsup_inhomogeneous(knapsack), ValidationError);
}

TEST_CASE("iterative rounding on random inhomogeneous instances") {
  testsupport::Gen gen(37);
  const ConstraintKind kinds[] = {ConstraintKind::Uniform, ConstraintKind::Partition, ConstraintKind::Graphic,
                                  ConstraintKind::None};
  for (int trial = 0; trial < 200; ++trial) {
    RwInstance rw = testsupport::random_rw_instance(gen, {6, 6, false, kinds[trial % 4]});
    const auto best = testsupport::brute_rw(rw);
    rw.budget = std::max(0.0, best.value + testsupport::uniform_int(gen, -2, 2));
    const auto r = solve_rw_matsup_inhomogeneous(rw);
    if (best.value <= rw.budget + 1e-9) REQUIRE(r.has_value());
    if (!r) continue;
    CHECK(is_stage1_feasible(rw.constraint, r->open));
    CHECK(check_rw_solution(rw, r->open, 9.0).ok);
    for (ClientId j : r->ever_committed) {
      CHECK(within_radius(rw.geometry->distance_to_set(j, r->open), 3.0 * rw.radii[static_cast<std::size_t>(j)]));
    }
    double previous = rw.budget;
    for (const auto& step : r->trace) {
      CHECK(step.objective <= previous + 1e-7);
      CHECK(step.objective <= rw.budget + 1e-7);
      previous = step.objective;
      CHECK((std::abs(step.ball_mass) <= 1e-6 || std::abs(step.ball_mass - 1.0) <= 1e-6));
      for (std::size_t a = 0; a < step.c1.size(); ++a) {
        for (std::size_t b = a + 1; b < step.c1.size(); ++b) {
          CHECK_FALSE(sets_intersect(ball_at(rw, step.c1[a]), ball_at(rw, step.c1[b])));
        }
      }
    }
    // Every iteration removes one client from Cs.
    CHECK(r->trace.size() <= static_cast<std::size_t>(rw.num_clients()));
  }
}
