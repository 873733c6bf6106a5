#include <doctest.h>

#include "stochsup/algorithms.hpp"
#include "stochsup/bruteforce.hpp"
#include "stochsup/reduction.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace stochsup;
using testsupport::ConstraintKind;

TEST_CASE("E1 reduction penalties") {
  const Instance e1 = testsupport::e1_instance();
  const Distribution d = testsupport::e1_distribution(e1);
  const auto reduced = build_reduction(e1, d);
  // c1 represents itself in both scenarios at cost 2; c2 only in A2 at cost 8.
  CHECK(reduced.rw.penalties == std::vector<double>{2.0, 4.0});
  CHECK(reduced.rw.weights == e1.stage1_costs());
  CHECK(reduced.rw.budget == e1.budget());
  const auto literal = build_reduction(e1, d, PenaltyWeighting::Literal);
  CHECK(literal.rw.penalties == std::vector<double>{4.0, 8.0});
}

TEST_CASE("E1 with a uniform matroid through solve-or-cut") {
  const Instance e1 = testsupport::e1_instance(9.0, Matroid::uniform(2, 2));
  const Distribution d = testsupport::e1_distribution(e1);
  const auto r = reduce_and_solve(e1, d, solve_or_cut_solver());
  REQUIRE(r.has_value());
  CHECK(expected_cost(e1, d, r->strategy) <= 9.0 + 1e-7);
  for (const auto& a : d.scenarios()) CHECK(maxdist(e1, a, r->strategy) <= 5.0);
}

TEST_CASE("single scenario: RW objective equals the two-stage cost") {
  testsupport::Gen gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = testsupport::random_instance(gen, {6, 5, true, ConstraintKind::None}, 100.0);
    Scenario s = testsupport::random_scenario(gen, inst, "only");
    s.probability = 1.0;
    const Distribution d({s}, inst);
    const auto reduced = build_reduction(inst, d);
    for (const auto& first : testsupport::all_subsets(inst.num_facilities())) {
      const ReductionCertificate cert{first, 1.0, inst.radii()};
      Strategy strategy{first, {{"only", extend_reduction(inst, cert, s)}}, {}};
      CHECK(testsupport::rw_objective(reduced.rw, first, 1.0) == doctest::Approx(expected_cost(inst, d, strategy)).epsilon(1e-12));
    }
  }
}

TEST_CASE("extension examples") {
  const Instance e1 = testsupport::e1_instance();
  const Distribution d = testsupport::e1_distribution(e1);
  const auto r = reduce_and_solve(e1, d, solve_or_cut_solver());
  REQUIRE(r.has_value());
  for (const auto& a : d.scenarios()) CHECK(extend_reduction(e1, r->certificate, a) == r->strategy.stage2.at(a.id));
  CHECK(extend_reduction(e1, r->certificate, Scenario{"none", {}, {1, 1}, 0}).empty());
  const ReductionCertificate near{{0}, 3.0, e1.radii()};
  CHECK(extend_reduction(e1, near, Scenario{"c1", {0}, {1, 1}, 0}).empty());
  CHECK(extend_reduction(e1, near, Scenario{"c2", {1}, {1, 1}, 0}) == FacilitySet{1});
}

TEST_CASE("random reductions: factors, accounting, decomposition, S2, S3") {
  testsupport::Gen gen(43);
  for (int trial = 0; trial < 120; ++trial) {
    const bool homogeneous = trial % 2 == 0;
    const auto kind = homogeneous ? ConstraintKind::Uniform : ConstraintKind::Partition;
    Instance inst = testsupport::random_instance(gen, {6, 5, homogeneous, kind});
    const Distribution probe = testsupport::random_distribution(gen, inst, testsupport::uniform_int(gen, 1, 4));
    const double optimum = testsupport::brute_two_stage(inst, probe);
    if (!std::isfinite(optimum)) continue;
    inst = inst.with_budget(optimum);
    const Distribution d(probe.scenarios(), inst);
    const RwSolver solver = homogeneous ? solve_or_cut_solver() : iterative_rounding_solver();
    const auto r = reduce_and_solve(inst, d, solver);
    REQUIRE(r.has_value());
    const double eta = solver.rho + 2.0;
    CHECK(expected_cost(inst, d, r->strategy) <= inst.budget() + 1e-7);

    double spent = 0.0;
    for (const auto& a : d.scenarios()) spent += a.probability * set_cost(r->strategy.stage2.at(a.id), a.stage2_costs);
    double owed = 0.0;
    for (int j = 0; j < inst.num_clients(); ++j) {
      if (!within_radius(inst.geometry().distance_to_set(j, r->strategy.stage1), solver.rho * inst.radius(j))) {
        owed += r->reduced.rw.penalties[static_cast<std::size_t>(j)];
      }
    }
    CHECK(spent <= owed + 1e-9);

    for (std::size_t a = 0; a < d.size(); ++a) {
      CHECK(maxdist(inst, d[a], r->strategy) <= eta + 1e-12);
      const auto& c = r->reduced.clusterings[a];
      for (ClientId j : d[a].active_clients) {
        const ClientId rep = c.representative_of(j);
        CHECK(inst.radius(rep) <= inst.radius(j));
        CHECK(*inst.geometry().client_distance(j, rep) <= 2.0 * inst.radius(j) + 1e-9);
      }
    }

    // S3: the extension depends on F_I alone.
    const ReductionCertificate twin{r->strategy.stage1, solver.rho, inst.radii()};
    for (int k = 0; k < 30; ++k) {
      const Scenario fresh = testsupport::random_scenario(gen, inst, "new");
      const FacilitySet f = r->strategy.extension(fresh);
      CHECK(f == extend_reduction(inst, twin, fresh));
      CHECK(maxdist(inst, fresh.active_clients, r->strategy.stage1, f) <= eta + 1e-12);
    }
  }
}

TEST_CASE("poly algorithm wrappers check their preconditions") {
  const Instance e1 = testsupport::e1_instance();
  const Instance knap = testsupport::e1_instance(9.0, KnapsackSystem{{{1, 1}}, {1}});
  CHECK_THROWS(make_poly_algorithm("matsup5").check(knap));
  CHECK_THROWS(make_poly_algorithm("matsup11").check(knap));
  CHECK_NOTHROW(make_poly_algorithm("musup5").check(knap));
  CHECK_THROWS(make_poly_algorithm("musup5").check(e1));
  CHECK_THROWS(make_poly_algorithm("sup3").check(knap));
  CHECK_THROWS(make_poly_algorithm("nope"));
  for (const auto& name : poly_algorithm_names()) CHECK(make_poly_algorithm(name).name == name);
  CHECK(make_poly_algorithm("sup3").eta == 3.0);
  CHECK(make_poly_algorithm("matsup11").eta == 11.0);
  CHECK(make_poly_algorithm("matsup5").log_strategy_class_size(e1) == doctest::Approx(2 * std::log(2.0)));
}
