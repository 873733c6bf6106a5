#ifndef STOCHSUP_TOOLS_COMMANDS_HPP
#define STOCHSUP_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

namespace stochsup::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitPrecondition = 3;

struct GenerateOptions {
  std::string preset;  // "e1" or empty
  std::string layout = "square";  // square | line | matrix
  int clients = 6;
  int facilities = 5;
  int side = 10;
  int c1_min = 1, c1_max = 10;
  int c2_min = 1, c2_max = 20;
  int scenarios = 4;
  double activation = 0.5;
  std::optional<double> radius;  // defaults to the covering radius
  double budget = 10.0;
  std::string constraint = "none";  // none | uniform:K | knapsack:W
  std::string scenario_model = "explicit";  // explicit | bernoulli
  std::uint64_t seed = 1;
  std::string out_dir = "stochsup-out";
};

struct SolveOptions {
  std::string instance;
  std::string dist;
  std::string algo = "sup3";  // sup3 matsup5 musup5 matsup11 rw3 rw9 exact
  std::optional<double> radius;
  std::string out_dir = "stochsup-out";
};

struct SaaOptions {
  std::string instance;
  std::string oracle;
  std::string algo = "sup3";
  double eps = 0.25;
  double alpha = 0.25;
  double gamma = 0.1;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
  bool radius_search = false;
  std::optional<double> delta;  // bounded stage-II costs: one round, no discarding
  std::string truth;           // explicit distribution used for evaluation
  double sample_constant = 1.0;
  double delta_constant = 3.0;
  std::string out_dir = "stochsup-out";
};

struct DemoOptions {
  double p = 1e-3;
  double cost = 1e3;
  std::size_t samples = 100;
  std::size_t seeds = 1000;
  double stage1_cost = 0.0;
  std::string out_dir = "stochsup-out";
};

struct ReplayOptions {
  std::string manifest;
  std::string out_dir = "stochsup-replay";
};

nlohmann::json to_json(const GenerateOptions& o);
nlohmann::json to_json(const SolveOptions& o);
nlohmann::json to_json(const SaaOptions& o);
nlohmann::json to_json(const DemoOptions& o);

// Each returns a process exit code; precondition errors propagate as
// stochsup exceptions and are mapped by main().
int cmd_generate(const GenerateOptions& options);
int cmd_solve(const SolveOptions& options);
int cmd_saa(const SaaOptions& options);
int cmd_appendix_demo(const DemoOptions& options);
int cmd_replay(const ReplayOptions& options);

}  // namespace stochsup::cli

#endif
