#include "stochsup/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stochsup/errors.hpp"

namespace stochsup {

double budget_tolerance(double budget) { return 1e-7 * std::max(1.0, std::abs(budget)); }

namespace {

void check_distance(double d) {
  if (!std::isfinite(d) || d < 0.0) throw ValidationError("distances must be finite and nonnegative");
}

double euclidean(const Geometry::Point& a, const Geometry::Point& b) {
  if (a.size() != b.size()) throw ValidationError("points must share a dimension");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(sum);
}

}  // namespace

Geometry Geometry::from_points(std::vector<std::string> client_names, std::vector<Point> client_points,
                               std::vector<std::string> facility_names, std::vector<Point> facility_points) {
  if (client_names.size() != client_points.size() || facility_names.size() != facility_points.size()) {
    throw ValidationError("every client and facility needs a point");
  }
  Geometry g;
  g.client_names_ = std::move(client_names);
  g.facility_names_ = std::move(facility_names);
  g.client_points_ = std::move(client_points);
  g.facility_points_ = std::move(facility_points);
  const auto n = g.client_names_.size();
  const auto m = g.facility_names_.size();
  g.client_facility_.resize(n * m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      g.client_facility_[j * m + i] = euclidean(g.client_points_[j], g.facility_points_[i]);
    }
  }
  g.index_names();
  return g;
}

Geometry Geometry::from_client_rows(std::vector<std::string> client_names, std::vector<std::string> facility_names,
                                    std::vector<std::vector<double>> rows) {
  Geometry g;
  g.client_names_ = std::move(client_names);
  g.facility_names_ = std::move(facility_names);
  const auto n = g.client_names_.size();
  const auto m = g.facility_names_.size();
  if (rows.size() != n) throw ValidationError("distance matrix needs one row per client");
  g.client_facility_.resize(n * m);
  for (std::size_t j = 0; j < n; ++j) {
    if (rows[j].size() != m) throw ValidationError("distance row needs one entry per facility");
    for (std::size_t i = 0; i < m; ++i) {
      check_distance(rows[j][i]);
      g.client_facility_[j * m + i] = rows[j][i];
    }
  }
  g.index_names();
  g.validate_metric();
  return g;
}

Geometry Geometry::from_pairwise(std::vector<std::string> client_names, std::vector<std::string> facility_names,
                                 std::vector<std::vector<double>> matrix) {
  Geometry g;
  g.client_names_ = std::move(client_names);
  g.facility_names_ = std::move(facility_names);
  const auto n = g.client_names_.size();
  const auto m = g.facility_names_.size();
  if (matrix.size() != n + m) throw ValidationError("pairwise matrix must be (n+m) x (n+m)");
  for (const auto& row : matrix) {
    if (row.size() != n + m) throw ValidationError("pairwise matrix must be (n+m) x (n+m)");
    for (double d : row) check_distance(d);
  }
  g.pairwise_ = std::move(matrix);
  g.client_facility_.resize(n * m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) g.client_facility_[j * m + i] = g.pairwise_[j][n + i];
  }
  g.index_names();
  g.validate_metric();
  return g;
}

void Geometry::index_names() {
  for (std::size_t j = 0; j < client_names_.size(); ++j) {
    if (!client_lookup_.emplace(client_names_[j], static_cast<int>(j)).second) {
      throw ValidationError("duplicate client id '" + client_names_[j] + "'");
    }
  }
  for (std::size_t i = 0; i < facility_names_.size(); ++i) {
    if (!facility_lookup_.emplace(facility_names_[i], static_cast<int>(i)).second) {
      throw ValidationError("duplicate facility id '" + facility_names_[i] + "'");
    }
  }
}

void Geometry::validate_metric() const {
  constexpr double kSlack = 1e-9;
  if (!pairwise_.empty()) {
    const std::size_t size = pairwise_.size();
    for (std::size_t a = 0; a < size; ++a) {
      if (pairwise_[a][a] > kSlack) throw ValidationError("pairwise matrix needs a zero diagonal");
      for (std::size_t b = 0; b < size; ++b) {
        if (std::abs(pairwise_[a][b] - pairwise_[b][a]) > kSlack) {
          throw ValidationError("pairwise matrix must be symmetric");
        }
        for (std::size_t c = 0; c < size; ++c) {
          if (pairwise_[a][c] > pairwise_[a][b] + pairwise_[b][c] + kSlack) {
            throw ValidationError("pairwise matrix violates the triangle inequality");
          }
        }
      }
    }
    return;
  }
  // Only client-facility distances are known: check the triangle inequality
  // along every path client j -> facility i' -> client j' -> facility i.
  const int n = num_clients();
  const int m = num_facilities();
  for (int j = 0; j < n; ++j) {
    for (int jp = 0; jp < n; ++jp) {
      if (j == jp) continue;
      for (int i = 0; i < m; ++i) {
        for (int ip = 0; ip < m; ++ip) {
          if (distance(j, i) > distance(j, ip) + distance(jp, ip) + distance(jp, i) + kSlack) {
            throw ValidationError("distance matrix violates the triangle inequality");
          }
        }
      }
    }
  }
}

std::optional<double> Geometry::client_distance(ClientId a, ClientId b) const {
  if (!pairwise_.empty()) return pairwise_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  if (!client_points_.empty()) {
    return euclidean(client_points_[static_cast<std::size_t>(a)], client_points_[static_cast<std::size_t>(b)]);
  }
  if (a == b) return 0.0;
  return std::nullopt;
}

double Geometry::distance_to_set(ClientId client, std::span<const FacilityId> set) const {
  double best = kInfinity;
  for (FacilityId i : set) best = std::min(best, distance(client, i));
  return best;
}

std::vector<double> Geometry::candidate_radii() const {
  std::vector<double> radii = client_facility_;
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

int Geometry::client_index(const std::string& name) const {
  auto it = client_lookup_.find(name);
  if (it == client_lookup_.end()) throw ValidationError("unknown client id '" + name + "'");
  return it->second;
}

int Geometry::facility_index(const std::string& name) const {
  auto it = facility_lookup_.find(name);
  if (it == facility_lookup_.end()) throw ValidationError("unknown facility id '" + name + "'");
  return it->second;
}

bool is_stage1_feasible(const StageOneConstraint& constraint, std::span<const FacilityId> set) {
  if (const auto* matroid = std::get_if<Matroid>(&constraint)) return matroid->is_independent(set);
  if (const auto* knapsack = std::get_if<KnapsackSystem>(&constraint)) return knapsack->is_feasible(set);
  return true;
}

std::string constraint_name(const StageOneConstraint& constraint) {
  if (const auto* matroid = std::get_if<Matroid>(&constraint)) {
    switch (matroid->kind()) {
      case Matroid::Kind::Uniform: return "uniform";
      case Matroid::Kind::Partition: return "partition";
      case Matroid::Kind::ExplicitSmall: return "explicit";
    }
  }
  if (std::holds_alternative<KnapsackSystem>(constraint)) return "multiknapsack";
  return "none";
}

Instance::Instance(std::shared_ptr<const Geometry> geometry, std::vector<double> radii,
                   std::vector<double> stage1_costs, StageOneConstraint constraint, double budget)
    : geometry_(std::move(geometry)),
      radii_(std::move(radii)),
      stage1_costs_(std::move(stage1_costs)),
      constraint_(std::move(constraint)),
      budget_(budget) {
  if (!geometry_) throw ValidationError("instance needs a geometry");
  if (static_cast<int>(radii_.size()) != num_clients()) throw ValidationError("need one radius per client");
  if (static_cast<int>(stage1_costs_.size()) != num_facilities()) {
    throw ValidationError("need one stage-I cost per facility");
  }
  for (double r : radii_) {
    if (!std::isfinite(r) || r < 0.0) throw ValidationError("radii must be finite and nonnegative");
  }
  for (double c : stage1_costs_) {
    if (!std::isfinite(c) || c < 0.0) throw ValidationError("stage-I costs must be finite and nonnegative");
  }
  if (!std::isfinite(budget_) || budget_ < 0.0) throw ValidationError("budget must be finite and nonnegative");
  if (const auto* matroid = std::get_if<Matroid>(&constraint_)) {
    if (matroid->ground_size() != num_facilities()) {
      throw ValidationError("matroid ground set must be the facility set");
    }
  }
  if (const auto* knapsack = std::get_if<KnapsackSystem>(&constraint_)) knapsack->validate(num_facilities());
}

bool Instance::is_homogeneous() const {
  return std::adjacent_find(radii_.begin(), radii_.end(), std::not_equal_to<>()) == radii_.end();
}

bool Instance::satisfies_standing_assumption() const {
  for (int j = 0; j < num_clients(); ++j) {
    bool reachable = false;
    for (int i = 0; i < num_facilities() && !reachable; ++i) reachable = within_radius(distance(j, i), radius(j));
    if (!reachable) return false;
  }
  return true;
}

Instance Instance::with_radii(std::vector<double> radii) const {
  return Instance(geometry_, std::move(radii), stage1_costs_, constraint_, budget_);
}

Instance Instance::with_uniform_radius(double radius) const {
  return with_radii(std::vector<double>(radii_.size(), radius));
}

Instance Instance::with_budget(double budget) const {
  return Instance(geometry_, radii_, stage1_costs_, constraint_, budget);
}

void validate_scenario(const Scenario& scenario, const Instance& instance) {
  if (!std::is_sorted(scenario.active_clients.begin(), scenario.active_clients.end()) ||
      std::adjacent_find(scenario.active_clients.begin(), scenario.active_clients.end()) !=
          scenario.active_clients.end()) {
    throw ValidationError("scenario '" + scenario.id + "' active clients must be sorted and distinct");
  }
  for (ClientId j : scenario.active_clients) {
    if (j < 0 || j >= instance.num_clients()) {
      throw ValidationError("scenario '" + scenario.id + "' names an unknown client");
    }
  }
  if (static_cast<int>(scenario.stage2_costs.size()) != instance.num_facilities()) {
    throw ValidationError("scenario '" + scenario.id + "' needs one stage-II cost per facility");
  }
  for (double c : scenario.stage2_costs) {
    if (!std::isfinite(c) || c < 0.0) throw ValidationError("stage-II costs must be finite and nonnegative");
  }
  if (!(scenario.probability >= 0.0 && scenario.probability <= 1.0)) {
    throw ValidationError("scenario probability must lie in [0, 1]");
  }
}

Distribution::Distribution(std::vector<Scenario> scenarios, const Instance& instance)
    : scenarios_(std::move(scenarios)) {
  std::set<std::string> ids;
  double total = 0.0;
  for (const auto& s : scenarios_) {
    validate_scenario(s, instance);
    if (!ids.insert(s.id).second) throw ValidationError("duplicate scenario id '" + s.id + "'");
    total += s.probability;
  }
  if (!scenarios_.empty() && std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("scenario probabilities must sum to 1");
  }
}

Distribution Distribution::uniform(std::vector<Scenario> samples, const Instance& instance) {
  const double p = samples.empty() ? 0.0 : 1.0 / static_cast<double>(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    samples[k].id = "s" + std::to_string(k);
    samples[k].probability = p;
  }
  Distribution d;
  for (const auto& s : samples) validate_scenario(s, instance);
  d.scenarios_ = std::move(samples);
  return d;
}

FacilitySet Strategy::stage2_for(const Scenario& scenario) const {
  if (auto it = stage2.find(scenario.id); it != stage2.end()) return it->second;
  if (extension) return extension(scenario);
  throw MissingScenarioError("strategy has no stage-II set for scenario '" + scenario.id + "'");
}

Ball ball(const Instance& instance, ClientId client, std::optional<double> radius_override) {
  if (client < 0 || client >= instance.num_clients()) throw ValidationError("client out of range");
  const double r = radius_override.value_or(instance.radius(client));
  if (r < 0.0) throw ValidationError("radius override must be nonnegative");
  Ball b;
  b.client = client;
  for (int i = 0; i < instance.num_facilities(); ++i) {
    if (within_radius(instance.distance(client, i), r)) b.members.push_back(i);
  }
  return b;
}

std::vector<FacilitySet> all_balls(const Instance& instance) {
  return balls_at(instance.geometry(), instance.radii());
}

std::vector<FacilitySet> balls_at(const Geometry& geometry, std::span<const double> radii) {
  if (radii.size() != static_cast<std::size_t>(geometry.num_clients())) {
    throw ValidationError("need one radius per client");
  }
  std::vector<FacilitySet> balls(radii.size());
  for (int j = 0; j < geometry.num_clients(); ++j) {
    for (int i = 0; i < geometry.num_facilities(); ++i) {
      if (within_radius(geometry.distance(j, i), radii[static_cast<std::size_t>(j)])) {
        balls[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  }
  return balls;
}

bool sets_intersect(std::span<const FacilityId> a, std::span<const FacilityId> b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return true;
    if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return false;
}

FacilityId cheapest_in_ball(std::span<const FacilityId> members, std::span<const double> costs) {
  if (members.empty()) throw EmptyBallError("cheapest facility requested from an empty ball");
  FacilityId best = members.front();
  for (FacilityId i : members) {
    const double ci = costs[static_cast<std::size_t>(i)];
    const double cb = costs[static_cast<std::size_t>(best)];
    if (ci < cb || (ci == cb && i < best)) best = i;
  }
  return best;
}

FacilityId cheapest_in_ball(const Ball& b, std::span<const double> costs) {
  return cheapest_in_ball(std::span<const FacilityId>(b.members), costs);
}

double set_cost(std::span<const FacilityId> set, std::span<const double> costs) {
  double total = 0.0;
  for (FacilityId i : set) total += costs[static_cast<std::size_t>(i)];
  return total;
}

double strategy_cost(const Instance& instance, const Scenario& scenario, const Strategy& strategy) {
  return set_cost(strategy.stage1, instance.stage1_costs()) +
         set_cost(strategy.stage2_for(scenario), scenario.stage2_costs);
}

double maxdist(const Instance& instance, std::span<const ClientId> active, std::span<const FacilityId> stage1,
               std::span<const FacilityId> stage2) {
  double worst = 0.0;
  for (ClientId j : active) {
    const double d = std::min(instance.geometry().distance_to_set(j, stage1),
                              instance.geometry().distance_to_set(j, stage2));
    const double r = instance.radius(j);
    double ratio;
    if (d == kInfinity) {
      ratio = kInfinity;
    } else if (r > 0.0) {
      ratio = d / r;
    } else {
      ratio = d <= kDistanceTolerance ? 0.0 : kInfinity;
    }
    worst = std::max(worst, ratio);
  }
  return worst;
}

double maxdist(const Instance& instance, const Scenario& scenario, const Strategy& strategy) {
  const FacilitySet second = strategy.stage2_for(scenario);
  return maxdist(instance, scenario.active_clients, strategy.stage1, second);
}

double expected_cost(const Instance& instance, const Distribution& distribution, const Strategy& strategy) {
  double stage2 = 0.0;
  for (const auto& s : distribution.scenarios()) {
    stage2 += s.probability * set_cost(strategy.stage2_for(s), s.stage2_costs);
  }
  return set_cost(strategy.stage1, instance.stage1_costs()) + stage2;
}

FacilitySet set_union(std::span<const FacilityId> a, std::span<const FacilityId> b) {
  FacilitySet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FacilitySet normalized(FacilitySet set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

}  // namespace stochsup
