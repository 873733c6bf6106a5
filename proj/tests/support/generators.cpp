#include "generators.hpp"

#include <algorithm>
#include <numeric>

namespace testsupport {

using namespace stochsup;

int uniform_int(Gen& gen, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
double uniform_real(Gen& gen, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
bool coin(Gen& gen, double p) { return std::bernoulli_distribution(p)(gen); }

std::shared_ptr<const Geometry> random_geometry(Gen& gen, int clients, int facilities, int side) {
  std::vector<std::string> cn, fn;
  std::vector<Geometry::Point> cp, fp;
  for (int j = 0; j < clients; ++j) {
    cn.push_back("c" + std::to_string(j));
    cp.push_back({double(uniform_int(gen, 0, side)), double(uniform_int(gen, 0, side))});
  }
  for (int i = 0; i < facilities; ++i) {
    fn.push_back("f" + std::to_string(i));
    fp.push_back({double(uniform_int(gen, 0, side)), double(uniform_int(gen, 0, side))});
  }
  return std::make_shared<const Geometry>(Geometry::from_points(cn, cp, fn, fp));
}

double covering_radius(const Geometry& geometry) {
  double r = 0.0;
  for (int j = 0; j < geometry.num_clients(); ++j) {
    double best = kInfinity;
    for (int i = 0; i < geometry.num_facilities(); ++i) best = std::min(best, geometry.distance(j, i));
    r = std::max(r, best);
  }
  return r;
}

double random_feasible_radius(Gen& gen, const Geometry& geometry) {
  const double floor = covering_radius(geometry);
  std::vector<double> options;
  for (double r : geometry.candidate_radii()) {
    if (r >= floor) options.push_back(r);
  }
  // Bias toward the small end; big radii make everything trivial.
  const int top = std::min<int>(static_cast<int>(options.size()) - 1, 3);
  return options[static_cast<std::size_t>(uniform_int(gen, 0, top))];
}

std::vector<double> random_inhomogeneous_radii(Gen& gen, const Geometry& geometry) {
  const double base = std::max(covering_radius(geometry), 1.0);
  std::vector<double> radii;
  const double scale[] = {1.0, 2.0, 4.0};
  for (int j = 0; j < geometry.num_clients(); ++j) radii.push_back(base * scale[uniform_int(gen, 0, 2)]);
  return radii;
}

Graph random_graph(Gen& gen, int vertices, int edges) {
  Graph g;
  g.vertices = vertices;
  for (int e = 0; e < edges; ++e) {
    const int u = uniform_int(gen, 0, vertices - 1);
    int v = uniform_int(gen, 0, vertices - 1);
    // Loops are allowed; they are dependent on their own.
    g.edges.emplace_back(u, v);
  }
  return g;
}

bool is_forest(const Graph& graph, std::span<const int> edge_subset) {
  std::vector<int> parent(static_cast<std::size_t>(graph.vertices));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (int e : edge_subset) {
    const auto [u, v] = graph.edges[static_cast<std::size_t>(e)];
    const int a = find(u), b = find(v);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
  }
  return true;
}

Matroid graphic_matroid(const Graph& graph) {
  const int m = static_cast<int>(graph.edges.size());
  std::vector<bool> table(std::size_t{1} << m);
  for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
    std::vector<int> subset;
    for (int e = 0; e < m; ++e) {
      if (mask & (1U << e)) subset.push_back(e);
    }
    table[mask] = is_forest(graph, subset);
  }
  return Matroid::explicit_from_table(m, std::move(table));
}

Matroid random_matroid(Gen& gen, int ground, MatroidKind kind) {
  switch (kind) {
    case MatroidKind::Uniform:
      return Matroid::uniform(ground, uniform_int(gen, 0, ground));
    case MatroidKind::Partition: {
      const int blocks = uniform_int(gen, 1, std::max(1, ground / 2));
      std::vector<int> block_of;
      for (int i = 0; i < ground; ++i) block_of.push_back(uniform_int(gen, -1, blocks - 1));
      std::vector<int> caps;
      for (int b = 0; b < blocks; ++b) caps.push_back(uniform_int(gen, 0, 2));
      return Matroid::partition(block_of, caps);
    }
    case MatroidKind::Graphic:
      return graphic_matroid(random_graph(gen, uniform_int(gen, 2, 4), ground));
  }
  return Matroid::free(ground);
}

KnapsackSystem random_knapsack(Gen& gen, int ground, int max_constraints, int max_budget) {
  KnapsackSystem system;
  const int l = uniform_int(gen, 1, max_constraints);
  for (int k = 0; k < l; ++k) {
    std::vector<std::int64_t> w;
    for (int i = 0; i < ground; ++i) w.push_back(uniform_int(gen, 0, 3));
    system.weights.push_back(std::move(w));
    system.budgets.push_back(uniform_int(gen, 0, max_budget));
  }
  return system;
}

StageOneConstraint random_constraint(Gen& gen, int ground, ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::None:
      return Unconstrained{};
    case ConstraintKind::Uniform:
      return random_matroid(gen, ground, MatroidKind::Uniform);
    case ConstraintKind::Partition:
      return random_matroid(gen, ground, MatroidKind::Partition);
    case ConstraintKind::Graphic:
      return random_matroid(gen, ground, MatroidKind::Graphic);
    case ConstraintKind::Knapsack:
      return random_knapsack(gen, ground);
  }
  return Unconstrained{};
}

Instance random_instance(Gen& gen, const InstanceShape& shape, double budget) {
  const int n = uniform_int(gen, 1, shape.max_clients);
  const int m = uniform_int(gen, 1, shape.max_facilities);
  auto geometry = random_geometry(gen, n, m);
  std::vector<double> radii;
  if (shape.homogeneous) {
    radii.assign(static_cast<std::size_t>(n), random_feasible_radius(gen, *geometry));
  } else {
    radii = random_inhomogeneous_radii(gen, *geometry);
  }
  std::vector<double> c1;
  for (int i = 0; i < m; ++i) c1.push_back(uniform_int(gen, 1, 9));
  return Instance(geometry, radii, c1, random_constraint(gen, m, shape.constraint), budget);
}

Scenario random_scenario(Gen& gen, const Instance& instance, const std::string& id) {
  Scenario s;
  s.id = id;
  for (int j = 0; j < instance.num_clients(); ++j) {
    if (coin(gen, 0.6)) s.active_clients.push_back(j);
  }
  if (s.active_clients.empty()) s.active_clients.push_back(uniform_int(gen, 0, instance.num_clients() - 1));
  for (int i = 0; i < instance.num_facilities(); ++i) s.stage2_costs.push_back(uniform_int(gen, 1, 14));
  return s;
}

Distribution random_distribution(Gen& gen, const Instance& instance, int scenarios) {
  std::vector<Scenario> list;
  std::vector<int> weights;
  for (int a = 0; a < scenarios; ++a) {
    list.push_back(random_scenario(gen, instance, "A" + std::to_string(a + 1)));
    weights.push_back(uniform_int(gen, 1, 4));
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (std::size_t a = 0; a < list.size(); ++a) list[a].probability = weights[a] / total;
  return Distribution(std::move(list), instance);
}

RwInstance random_rw_instance(Gen& gen, const RwShape& shape) {
  RwInstance rw;
  const int n = uniform_int(gen, 1, shape.max_clients);
  const int m = uniform_int(gen, 1, shape.max_facilities);
  rw.geometry = random_geometry(gen, n, m);
  if (shape.homogeneous) {
    rw.radii.assign(static_cast<std::size_t>(n), random_feasible_radius(gen, *rw.geometry));
  } else {
    rw.radii = random_inhomogeneous_radii(gen, *rw.geometry);
  }
  for (int j = 0; j < n; ++j) rw.penalties.push_back(uniform_int(gen, 0, 9));
  for (int i = 0; i < m; ++i) rw.weights.push_back(uniform_int(gen, 1, 6));
  rw.constraint = random_constraint(gen, m, shape.constraint);
  return rw;
}

lp::LinearProgram random_lp(Gen& gen, int max_vars, int max_rows) {
  lp::LinearProgram program;
  const int n = uniform_int(gen, 1, max_vars);
  std::vector<double> x0;
  for (int k = 0; k < n; ++k) {
    const double lo = uniform_int(gen, -2, 1);
    const double hi = lo + uniform_int(gen, 1, 3);
    program.add_variable("x" + std::to_string(k), lo, hi, uniform_int(gen, -5, 5));
    x0.push_back(uniform_real(gen, lo, hi));
  }
  const int rows = uniform_int(gen, 0, max_rows);
  bool has_equality = false;
  for (int r = 0; r < rows; ++r) {
    lp::Constraint row;
    row.name = "r" + std::to_string(r);
    for (int k = 0; k < n; ++k) row.coefficients.push_back(uniform_int(gen, -3, 3));
    const double at = row.activity(x0);
    const int pick = uniform_int(gen, 0, 4);
    if (pick == 0 && !has_equality) {
      row.sense = lp::Sense::Equal;
      row.rhs = at;
      has_equality = true;
    } else if (pick <= 2) {
      row.sense = lp::Sense::LessEqual;
      row.rhs = std::round(at + uniform_real(gen, 0.0, 2.0));
      if (row.rhs < at) row.rhs += 1.0;
    } else {
      row.sense = lp::Sense::GreaterEqual;
      row.rhs = std::round(at - uniform_real(gen, 0.0, 2.0));
      if (row.rhs > at) row.rhs -= 1.0;
    }
    program.add_row(std::move(row));
  }
  if (coin(gen)) program.set_objective_sense(lp::ObjectiveSense::Maximize);
  return program;
}

}  // namespace testsupport
