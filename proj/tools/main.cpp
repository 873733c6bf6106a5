#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "stochsup/errors.hpp"
#include "stochsup/saa.hpp"

using namespace stochsup::cli;

int main(int argc, char** argv) {
  CLI::App app{"Two-stage stochastic supplier solvers"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Write a random or preset instance with its scenario source");
  g->add_option("--preset", gen.preset, "Preset instance (e1)")->check(CLI::IsMember({"e1"}));
  g->add_option("--layout", gen.layout)->check(CLI::IsMember({"square", "line", "matrix"}));
  g->add_option("-n,--clients", gen.clients);
  g->add_option("-m,--facilities", gen.facilities);
  g->add_option("--side", gen.side, "Coordinates are integers in [0, side]");
  g->add_option("--c1-min", gen.c1_min);
  g->add_option("--c1-max", gen.c1_max);
  g->add_option("--c2-min", gen.c2_min);
  g->add_option("--c2-max", gen.c2_max);
  g->add_option("--scenarios", gen.scenarios);
  g->add_option("--activation", gen.activation, "Per-client activation probability");
  g->add_option("--radius", gen.radius, "Uniform radius (default: covering radius)");
  g->add_option("--budget", gen.budget);
  g->add_option("--constraint", gen.constraint, "none | uniform:K | knapsack:W");
  g->add_option("--scenario-model", gen.scenario_model)->check(CLI::IsMember({"explicit", "bernoulli"}));
  g->add_option("--seed", gen.seed);
  g->add_option("--out-dir", gen.out_dir);

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Solve an instance on an explicit distribution");
  s->add_option("--instance", solve.instance)->required();
  s->add_option("--dist", solve.dist);
  s->add_option("--algo", solve.algo)
      ->check(CLI::IsMember({"sup3", "matsup5", "musup5", "matsup11", "rw3", "rw9", "exact"}));
  s->add_option("--radius", solve.radius, "Override every radius");
  s->add_option("--out-dir", solve.out_dir);

  SaaOptions saa;
  auto* a = app.add_subcommand("saa", "Sample average approximation against a scenario oracle");
  a->add_option("--instance", saa.instance)->required();
  a->add_option("--oracle", saa.oracle)->required();
  a->add_option("--algo", saa.algo)->check(CLI::IsMember({"sup3", "matsup5", "musup5", "matsup11"}));
  a->add_option("--eps", saa.eps)->check(CLI::PositiveNumber);
  a->add_option("--alpha", saa.alpha)->check(CLI::Range(0.0, 1.0));
  a->add_option("--gamma", saa.gamma)->check(CLI::Range(0.0, 1.0));
  a->add_option("--samples", saa.samples, "Samples per repetition (default: formula)");
  a->add_option("--seed", saa.seed);
  a->add_flag("--radius-search", saa.radius_search, "Search the smallest feasible radius");
  a->add_option("--delta", saa.delta, "Stage-II cost bound: one round, no discarding");
  a->add_option("--truth", saa.truth, "Explicit distribution for evaluation");
  a->add_option("--sample-constant", saa.sample_constant);
  a->add_option("--delta-constant", saa.delta_constant);
  a->add_option("--out-dir", saa.out_dir);

  DemoOptions demo;
  auto* d = app.add_subcommand("appendix-demo", "Variance of the plain empirical mean on a rare costly scenario");
  d->add_option("--p", demo.p)->check(CLI::Range(0.0, 1.0));
  d->add_option("--cost", demo.cost);
  d->add_option("--samples", demo.samples);
  d->add_option("--seeds", demo.seeds);
  d->add_option("--stage1-cost", demo.stage1_cost);
  d->add_option("--out-dir", demo.out_dir);

  ReplayOptions replay;
  auto* r = app.add_subcommand("replay", "Re-run a recorded manifest and compare result files");
  r->add_option("manifest", replay.manifest)->required();
  r->add_option("--out-dir", replay.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitPrecondition;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*s) return cmd_solve(solve);
    if (*a) return cmd_saa(saa);
    if (*d) return cmd_appendix_demo(demo);
    if (*r) return cmd_replay(replay);
  } catch (const stochsup::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const stochsup::CapExceededError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const stochsup::EmptyBallError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const stochsup::MissingScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const stochsup::IterationLimitExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
