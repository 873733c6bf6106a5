#include <doctest.h>

#include "stochsup/bruteforce.hpp"
#include "stochsup/errors.hpp"
#include "stochsup/sup_rounding.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace stochsup;

TEST_CASE("E1 at B = 9") {
  const Instance e1 = testsupport::e1_instance(9.0);
  const Distribution d = testsupport::e1_distribution(e1);
  const auto r = solve_sup_poly(e1, d);
  REQUIRE(r.has_value());
  CHECK(expected_cost(e1, d, r->strategy) <= 9.0 + 1e-7);
  for (const auto& a : d.scenarios()) CHECK(maxdist(e1, a, r->strategy) <= 3.0);
}

TEST_CASE("E1 below the brute-force optimum is infeasible") {
  const double optimum = testsupport::brute_two_stage(testsupport::e1_instance(), testsupport::e1_distribution(testsupport::e1_instance()));
  CHECK(optimum == 6.0);
  const Instance low = testsupport::e1_instance(optimum - 0.1);
  CHECK_FALSE(solve_sup_poly(low, testsupport::e1_distribution(low)).has_value());
  const Instance at = testsupport::e1_instance(optimum);
  CHECK(solve_sup_poly(at, testsupport::e1_distribution(at)).has_value());
}

TEST_CASE("single client, single facility opens in the cheaper stage") {
  auto g = testsupport::line_geometry({0}, {1});
  {
    const Instance inst(g, {1}, {3}, Unconstrained{}, 3);
    const Distribution d({{"A", {0}, {5}, 1.0}}, inst);
    const auto r = solve_sup_poly(inst, d);
    REQUIRE(r.has_value());
    CHECK(r->strategy.stage1 == FacilitySet{0});
    CHECK(r->strategy.stage2.at("A").empty());
  }
  {
    const Instance inst(g, {1}, {5}, Unconstrained{}, 3);
    const Distribution d({{"A", {0}, {3}, 1.0}}, inst);
    const auto r = solve_sup_poly(inst, d);
    REQUIRE(r.has_value());
    CHECK(r->strategy.stage1.empty());
    CHECK(r->strategy.stage2.at("A") == FacilitySet{0});
    CHECK(r->state.threshold == 2);
  }
}

TEST_CASE("extension examples") {
  const Instance e1 = testsupport::e1_instance();
  const SupCertificate cert{2.0, {0}, {0, 1}, {1.0, 0.0}};
  CHECK(extend_sup(e1, cert, Scenario{"new", {1}, {2, 8}, 0}) == FacilitySet{1});
  CHECK(extend_sup(e1, cert, Scenario{"none", {}, {2, 8}, 0}).empty());
  CHECK(extend_sup(e1, cert, Scenario{"near", {0}, {2, 8}, 0}).empty());
}

TEST_CASE("strategy class bound") {
  CHECK(strategy_class_bound(0) == 1);
  CHECK(strategy_class_bound(3) == 24);
  CHECK(strategy_class_bound(10) == 39916800);
  CHECK(log_strategy_class_bound(10) == doctest::Approx(std::log(39916800.0)));
  // Far beyond 64 bits.
  CHECK(strategy_class_bound(40) > boost::multiprecision::cpp_int(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("constraint and radius preconditions") {
  const Instance e1 = testsupport::e1_instance(9.0, Matroid::uniform(2, 1));
  CHECK_THROWS_AS(solve_sup_poly(e1, testsupport::e1_distribution(e1)), ValidationError);
  auto g = testsupport::line_geometry({1, 9}, {0, 10});
  const Instance mixed(g, {2, 3}, {5, 5}, Unconstrained{}, 9);
  CHECK_THROWS_AS(solve_sup_poly(mixed, testsupport::e1_distribution(mixed)), ValidationError);
  CHECK(solve_sup_poly(mixed, testsupport::e1_distribution(mixed), 2.0).has_value());
}

TEST_CASE("random instances: LP rows, sweep structure, coverage, budget, extension") {
  testsupport::Gen gen(21);
  int solved = 0;
  for (int trial = 0; trial < 150; ++trial) {
    Instance inst = testsupport::random_instance(gen, {6, 5, true, testsupport::ConstraintKind::None});
    const Distribution probe = testsupport::random_distribution(gen, inst, testsupport::uniform_int(gen, 1, 4));
    const double optimum = testsupport::brute_two_stage(inst, probe);
    REQUIRE(std::isfinite(optimum));
    inst = inst.with_budget(optimum + testsupport::uniform_int(gen, 0, 3));
    const Distribution d(probe.scenarios(), inst);
    const auto r = solve_sup_poly(inst, d);
    REQUIRE(r.has_value());
    ++solved;
    const auto balls = all_balls(inst);

    // LP rows.
    double lhs = 0.0;
    for (int i = 0; i < inst.num_facilities(); ++i) lhs += inst.stage1_costs()[static_cast<std::size_t>(i)] * r->lp.stage1[static_cast<std::size_t>(i)];
    for (std::size_t a = 0; a < d.size(); ++a) {
      for (int i = 0; i < inst.num_facilities(); ++i) {
        lhs += d[a].probability * d[a].stage2_costs[static_cast<std::size_t>(i)] * r->lp.stage2[a][static_cast<std::size_t>(i)];
      }
      for (ClientId j : d[a].active_clients) {
        double mass = 0.0;
        for (FacilityId i : balls[static_cast<std::size_t>(j)]) mass += r->lp.stage1[static_cast<std::size_t>(i)] + r->lp.stage2[a][static_cast<std::size_t>(i)];
        CHECK(mass >= 1.0 - 1e-7);
      }
    }
    CHECK(lhs <= inst.budget() + 1e-7);

    // F_I is an upper set of the sweep order.
    const auto& st = r->state;
    const auto& mass = r->certificate.stage1_mass;
    for (std::size_t k = 1; k < st.sweep_order.size(); ++k) {
      CHECK(mass[static_cast<std::size_t>(st.sweep_order[k - 1])] <= mass[static_cast<std::size_t>(st.sweep_order[k])]);
    }
    FacilitySet expected;
    if (st.threshold <= st.sweep_order.size()) {
      const double cut = mass[static_cast<std::size_t>(st.sweep_order[st.threshold - 1])];
      for (ClientId rep : st.sweep_order) {
        if (mass[static_cast<std::size_t>(rep)] >= cut) expected.push_back(cheapest_in_ball(balls[static_cast<std::size_t>(rep)], inst.stage1_costs()));
      }
    }
    CHECK(normalized(expected) == r->strategy.stage1);
    CHECK(st.sweep_costs.size() == st.threshold);
    for (std::size_t k = 0; k + 1 < st.sweep_costs.size(); ++k) CHECK(st.sweep_costs[k] > inst.budget() + 1e-7);

    CHECK(expected_cost(inst, d, r->strategy) <= inst.budget() + 1e-7);
    for (const auto& a : d.scenarios()) {
      CHECK(maxdist(inst, a, r->strategy) <= 3.0 + 1e-12);
      CHECK(extend_sup(inst, r->certificate, a) == r->strategy.stage2.at(a.id));
      CHECK(r->strategy.extension(a) == r->strategy.stage2.at(a.id));
    }
    for (int k = 0; k < 20; ++k) {
      const Scenario fresh = testsupport::random_scenario(gen, inst, "new");
      const FacilitySet f = extend_sup(inst, r->certificate, fresh);
      CHECK(f == extend_sup(inst, r->certificate, fresh));
      CHECK(maxdist(inst, fresh.active_clients, r->strategy.stage1, f) <= 3.0 + 1e-12);
    }
  }
  CHECK(solved == 150);
}
