#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include "stochsup/algorithms.hpp"
#include "stochsup/cluster.hpp"
#include "stochsup/lp.hpp"
#include "stochsup/matroid.hpp"
#include "stochsup/robust_outlier.hpp"
#include "stochsup/saa.hpp"

using namespace stochsup;

namespace {

// Integer points on a 20x20 grid from a fixed seed.
std::shared_ptr<const Geometry> grid_geometry(int n, int m, std::uint64_t seed) {
  Rng rng = repetition_rng(seed, 0);
  auto coord = [&] { return static_cast<double>(static_cast<int>(uniform01(rng) * 21)); };
  std::vector<std::string> cn, fn;
  std::vector<Geometry::Point> cp, fp;
  for (int j = 0; j < n; ++j) {
    cn.push_back("c" + std::to_string(j));
    cp.push_back({coord(), coord()});
  }
  for (int i = 0; i < m; ++i) {
    fn.push_back("f" + std::to_string(i));
    fp.push_back({coord(), coord()});
  }
  return std::make_shared<const Geometry>(Geometry::from_points(cn, cp, fn, fp));
}

double covering(const Geometry& g) {
  FacilitySet all;
  for (int i = 0; i < g.num_facilities(); ++i) all.push_back(i);
  double r = 0.0;
  for (int j = 0; j < g.num_clients(); ++j) r = std::max(r, g.distance_to_set(j, all));
  return r;
}

Instance bench_instance(int n, int m, StageOneConstraint constraint = Unconstrained{}) {
  auto g = grid_geometry(n, m, 42);
  const double r = covering(*g) + 2.0;
  std::vector<double> c1;
  for (int i = 0; i < m; ++i) c1.push_back(1.0 + i % 7);
  return Instance(g, std::vector<double>(static_cast<std::size_t>(n), r), c1, std::move(constraint), 1e6);
}

std::vector<Scenario> bench_scenarios(const Instance& instance, int count) {
  BernoulliOracle oracle(std::vector<double>(static_cast<std::size_t>(instance.num_clients()), 0.3),
                         std::vector<double>(static_cast<std::size_t>(instance.num_facilities()), 4.0), {1, 2, 5},
                         {6, 3, 1});
  Rng rng = repetition_rng(7, 0);
  return draw_samples(oracle, rng, static_cast<std::size_t>(count));
}

void BM_GreedyCluster(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance instance = bench_instance(n, n / 2);
  ClientSet all;
  for (int j = 0; j < n; ++j) all.push_back(j);
  const auto order = descending_radius_order(instance.radii());
  const auto balls = all_balls(instance);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_cluster(balls, all, order));
  state.SetComplexityN(n);
}
BENCHMARK(BM_GreedyCluster)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_SimplexDense(benchmark::State& state) {
  const int vars = static_cast<int>(state.range(0));
  lp::LinearProgram program;
  for (int k = 0; k < vars; ++k) program.add_variable("x" + std::to_string(k), 0.0, 1.0, -1.0 - (k % 3));
  for (int r = 0; r < vars; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < vars; ++k) terms.emplace_back(k, 1.0 + ((r + k) % 5));
    program.add_row("r" + std::to_string(r), terms, lp::Sense::LessEqual, vars);
  }
  for (auto _ : state) benchmark::DoNotOptimize(lp::solve(program));
}
BENCHMARK(BM_SimplexDense)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_MinimizePsiUniform(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Instance instance = bench_instance(2 * m, m);
  // Psi is defined on disjoint balls: keep the cluster representatives'.
  const auto all = all_balls(instance);
  ClientSet clients;
  for (int j = 0; j < instance.num_clients(); ++j) clients.push_back(j);
  std::vector<FacilitySet> balls;
  for (ClientId r : greedy_cluster(all, clients, descending_radius_order(instance.radii())).representatives) {
    balls.push_back(all[static_cast<std::size_t>(r)]);
  }
  std::vector<double> penalties(balls.size(), 3.0);
  std::vector<double> weights(instance.stage1_costs());
  const Matroid matroid = Matroid::uniform(m, m / 3);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_psi_matroid(matroid, balls, weights, penalties));
}
BENCHMARK(BM_MinimizePsiUniform)->Arg(8)->Arg(16)->Arg(32);

void BM_PolyAlgorithm(benchmark::State& state, const char* name) {
  const int n = static_cast<int>(state.range(0));
  const bool matroid = std::string(name) != "sup3";
  const Instance instance =
      matroid ? bench_instance(n, n / 2, Matroid::uniform(n / 2, n / 4)) : bench_instance(n, n / 2);
  const Distribution d = Distribution::uniform(bench_scenarios(instance, 10), instance);
  const PolyAlgorithm algo = make_poly_algorithm(name);
  for (auto _ : state) benchmark::DoNotOptimize(algo.solve(instance, d));
}
BENCHMARK_CAPTURE(BM_PolyAlgorithm, sup3, "sup3")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_PolyAlgorithm, matsup5, "matsup5")->Arg(8)->Arg(16);

void BM_SaaRun(benchmark::State& state) {
  const Instance instance = bench_instance(24, 12);
  BernoulliOracle oracle(std::vector<double>(24, 0.3), std::vector<double>(12, 4.0), {1, 2, 5}, {6, 3, 1});
  const PolyAlgorithm algo = make_poly_algorithm("sup3");
  SaaConfig config;
  config.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(saa_run(instance, oracle, algo, config));
}
BENCHMARK(BM_SaaRun)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
