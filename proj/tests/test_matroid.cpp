#include <doctest.h>

#include "stochsup/errors.hpp"
#include "stochsup/matroid.hpp"
#include "stochsup/model.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace stochsup;
using testsupport::Gen;

TEST_CASE("rank examples") {
  const int five[] = {0, 1, 2, 3, 4};
  CHECK(Matroid::uniform(5, 2).rank(five) == 2);
  const auto p = Matroid::partition_from_blocks(3, {{0, 1}, {2}}, {1, 1});
  const int abc[] = {0, 1, 2};
  CHECK(p.rank(abc) == 2);
  CHECK(p.rank(std::span<const int>{}) == 0);
  CHECK(Matroid::uniform(5, 2).rank(std::span<const int>{}) == 0);
}

TEST_CASE("explicit matroids validate the exchange property") {
  // {0,1} and {2} as bases cannot come from a matroid.
  CHECK_THROWS_AS(Matroid::explicit_from_bases(3, {{0, 1}, {2}}), ValidationError);
  const auto m = Matroid::explicit_from_bases(3, {{0, 1}, {0, 2}});
  const int both[] = {1, 2};
  CHECK_FALSE(m.is_independent(both));
  CHECK(m.rank(both) == 1);
}

TEST_CASE("graphic matroids agree with the forest test") {
  Gen gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto graph = testsupport::random_graph(gen, 4, 6);
    const auto m = testsupport::graphic_matroid(graph);
    for (const auto& s : testsupport::all_subsets(6)) CHECK(m.is_independent(s) == testsupport::is_forest(graph, s));
  }
}

TEST_CASE("separation examples") {
  const auto u1 = Matroid::uniform(2, 1);
  const double over[] = {0.6, 0.6};
  const auto cut = separate_matroid_polytope(u1, over);
  REQUIRE(cut.has_value());
  CHECK(cut->subset == ElementSet{0, 1});
  CHECK(cut->violation == doctest::Approx(0.2));
  const double under[] = {0.6, 0.3};
  CHECK_FALSE(separate_matroid_polytope(u1, under).has_value());
  const auto p = Matroid::partition_from_blocks(4, {{0, 1}, {2, 3}}, {1, 1});
  const double fine[] = {0.5, 0.5, 0.2, 0.8};
  CHECK_FALSE(separate_matroid_polytope(p, fine).has_value());
}

TEST_CASE("separation finds a violated rank row whenever one exists") {
  Gen gen(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto kind = static_cast<testsupport::MatroidKind>(trial % 3);
    const int ground = testsupport::uniform_int(gen, 1, 6);
    const auto m = testsupport::random_matroid(gen, ground, kind);
    std::vector<double> z;
    for (int i = 0; i < ground; ++i) z.push_back(testsupport::uniform_int(gen, 0, 4) / 4.0);
    double worst = 0.0;
    for (const auto& s : testsupport::all_subsets(ground)) {
      double mass = 0.0;
      for (int i : s) mass += z[static_cast<std::size_t>(i)];
      worst = std::max(worst, mass - m.rank(s));
    }
    const auto cut = separate_matroid_polytope(m, z);
    CHECK(cut.has_value() == (worst > 1e-7));
    if (cut) {
      double mass = 0.0;
      for (int i : cut->subset) mass += z[static_cast<std::size_t>(i)];
      CHECK(mass - cut->rank == doctest::Approx(cut->violation));
      CHECK(cut->violation == doctest::Approx(worst));
    }
  }
}

TEST_CASE("psi examples") {
  const std::vector<ElementSet> balls{{0}};
  const double t[] = {5};
  {
    const double w[] = {3};
    const auto r = minimize_psi_matroid(Matroid::uniform(1, 1), balls, w, t);
    CHECK(r.chosen == ElementSet{0});
    CHECK(r.psi == 3.0);
  }
  {
    const double w[] = {7};
    const auto r = minimize_psi_matroid(Matroid::uniform(1, 1), balls, w, t);
    CHECK(r.chosen.empty());
    CHECK(r.psi == 5.0);
  }
}

TEST_CASE("knapsack psi examples") {
  {
    KnapsackSystem ks{{{1, 1}}, {0}};
    const std::vector<ElementSet> balls{{0}, {1}};
    const double w[] = {1, 1};
    const double t[] = {2, 3};
    const auto r = minimize_psi_knapsack(ks, balls, w, t);
    CHECK(r.chosen.empty());
    CHECK(r.psi == 5.0);
  }
  {
    KnapsackSystem ks{{{1}}, {1}};
    const std::vector<ElementSet> balls{{0}};
    const double w[] = {1};
    const double t[] = {4};
    const auto r = minimize_psi_knapsack(ks, balls, w, t);
    CHECK(r.chosen == ElementSet{0});
    CHECK(r.psi == 1.0);
  }
  KnapsackSystem big{{{1, 1}, {1, 1}, {1, 1}}, {100, 100, 100}};
  const std::vector<ElementSet> balls{{0}};
  const double w[] = {1, 1};
  const double t[] = {4};
  CHECK_THROWS_AS(minimize_psi_knapsack(big, balls, w, t, 1000), TableCapExceeded);
}

TEST_CASE("common independent set examples") {
  const auto u = Matroid::uniform(3, 3);
  const double positive[] = {1, 2, 3};
  CHECK(min_weight_common_independent(u, u, positive).empty());
  const double one[] = {-2};
  CHECK(min_weight_common_independent(Matroid::uniform(1, 1), Matroid::uniform(1, 1), one) == ElementSet{0});
}

namespace {

// Random disjoint balls over a subset of the ground set.
std::vector<ElementSet> random_disjoint_balls(Gen& gen, int ground, int max_balls) {
  std::vector<ElementSet> balls(static_cast<std::size_t>(testsupport::uniform_int(gen, 1, max_balls)));
  for (int i = 0; i < ground; ++i) {
    const int b = testsupport::uniform_int(gen, -1, static_cast<int>(balls.size()) - 1);
    if (b >= 0 && balls[static_cast<std::size_t>(b)].size() < 3) balls[static_cast<std::size_t>(b)].push_back(i);
  }
  return balls;
}

}  // namespace

TEST_CASE("matroid psi minimizer matches brute force, both intersection methods") {
  Gen gen(8);
  for (int trial = 0; trial < 300; ++trial) {
    const int ground = testsupport::uniform_int(gen, 1, 8);
    const auto m = testsupport::random_matroid(gen, ground, static_cast<testsupport::MatroidKind>(trial % 3));
    const auto balls = random_disjoint_balls(gen, ground, 4);
    std::vector<double> w, t;
    for (int i = 0; i < ground; ++i) w.push_back(testsupport::uniform_int(gen, 0, 9));
    for (std::size_t b = 0; b < balls.size(); ++b) t.push_back(testsupport::uniform_int(gen, 0, 9));
    const double brute = testsupport::brute_psi(m, ground, balls, w, t);
    for (auto method : {IntersectionMethod::AugmentingPath, IntersectionMethod::Exhaustive}) {
      const auto r = minimize_psi_matroid(m, balls, w, t, method);
      CHECK(m.is_independent(r.chosen));
      CHECK(r.psi == doctest::Approx(brute).epsilon(1e-12));
      CHECK(r.psi == doctest::Approx(testsupport::psi_definition(balls, w, t, r.chosen)).epsilon(1e-12));
      CHECK(psi_value(balls, w, t, r.chosen) == doctest::Approx(r.psi).epsilon(1e-12));
    }
    // No random feasible set beats the minimizer.
    const auto r = minimize_psi_matroid(m, balls, w, t);
    for (int k = 0; k < 50; ++k) {
      ElementSet s;
      for (int i = 0; i < ground; ++i) {
        if (testsupport::coin(gen)) s.push_back(i);
      }
      if (m.is_independent(s)) CHECK(r.psi <= testsupport::psi_definition(balls, w, t, s) + 1e-12);
    }
  }
}

TEST_CASE("knapsack psi minimizer matches brute force") {
  Gen gen(9);
  for (int trial = 0; trial < 300; ++trial) {
    const int ground = testsupport::uniform_int(gen, 1, 8);
    const auto ks = testsupport::random_knapsack(gen, ground);
    const auto balls = random_disjoint_balls(gen, ground, 4);
    std::vector<double> w, t;
    for (int i = 0; i < ground; ++i) w.push_back(testsupport::uniform_int(gen, 0, 9));
    for (std::size_t b = 0; b < balls.size(); ++b) t.push_back(testsupport::uniform_int(gen, 0, 9));
    const auto r = minimize_psi_knapsack(ks, balls, w, t);
    CHECK(ks.is_feasible(r.chosen));
    CHECK(r.psi == doctest::Approx(testsupport::brute_psi(ks, ground, balls, w, t)).epsilon(1e-12));
    CHECK(r.psi == doctest::Approx(testsupport::psi_definition(balls, w, t, r.chosen)).epsilon(1e-12));
  }
}

TEST_CASE("knapsack encoding of a partition matroid gives the same minimum") {
  Gen gen(10);
  for (int trial = 0; trial < 200; ++trial) {
    const int ground = testsupport::uniform_int(gen, 1, 7);
    const int blocks = testsupport::uniform_int(gen, 1, 3);
    std::vector<int> block_of;
    std::vector<int> caps;
    for (int i = 0; i < ground; ++i) block_of.push_back(testsupport::uniform_int(gen, 0, blocks - 1));
    for (int b = 0; b < blocks; ++b) caps.push_back(testsupport::uniform_int(gen, 0, 2));
    const auto m = Matroid::partition(block_of, caps);
    KnapsackSystem ks;
    for (int b = 0; b < blocks; ++b) {
      std::vector<std::int64_t> row;
      for (int i = 0; i < ground; ++i) row.push_back(block_of[static_cast<std::size_t>(i)] == b ? 1 : 0);
      ks.weights.push_back(row);
      ks.budgets.push_back(caps[static_cast<std::size_t>(b)]);
    }
    const auto balls = random_disjoint_balls(gen, ground, 4);
    std::vector<double> w, t;
    for (int i = 0; i < ground; ++i) w.push_back(testsupport::uniform_int(gen, 0, 9));
    for (std::size_t b = 0; b < balls.size(); ++b) t.push_back(testsupport::uniform_int(gen, 0, 9));
    CHECK(minimize_psi_matroid(m, balls, w, t).psi == doctest::Approx(minimize_psi_knapsack(ks, balls, w, t).psi));
  }
}

TEST_CASE("weighted matroid intersection matches brute force on 6-element pairs") {
  Gen gen(12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = testsupport::random_matroid(gen, 6, static_cast<testsupport::MatroidKind>(trial % 3));
    const auto b = testsupport::random_matroid(gen, 6, static_cast<testsupport::MatroidKind>((trial / 3) % 3));
    std::vector<double> w;
    for (int i = 0; i < 6; ++i) w.push_back(testsupport::uniform_int(gen, -9, 4));
    const double brute = testsupport::brute_common_independent(a, b, w);
    for (auto method : {IntersectionMethod::AugmentingPath, IntersectionMethod::Exhaustive}) {
      const auto s = min_weight_common_independent(a, b, w, method);
      CHECK(a.is_independent(s));
      CHECK(b.is_independent(s));
      double v = 0.0;
      for (int i : s) v += w[static_cast<std::size_t>(i)];
      CHECK(v == doctest::Approx(brute).epsilon(1e-12));
    }
  }
}

TEST_CASE("knapsack table size and validation") {
  KnapsackSystem ks{{{1, 2}, {0, 1}}, {3, 4}};
  CHECK(ks.table_size() == 20);
  const int both[] = {0, 1};
  CHECK(ks.is_feasible(both));
  KnapsackSystem tight{{{2, 2}}, {3}};
  CHECK_FALSE(tight.is_feasible(both));
  CHECK_THROWS_AS(ks.validate(3), ValidationError);
}
