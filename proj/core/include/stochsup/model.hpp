#ifndef STOCHSUP_MODEL_HPP
#define STOCHSUP_MODEL_HPP

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stochsup/matroid.hpp"

namespace stochsup {

using ClientId = int;
using FacilityId = int;
// Sorted, duplicate-free.
using FacilitySet = std::vector<FacilityId>;
using ClientSet = std::vector<ClientId>;

// Distances are compared with this absolute slack everywhere (ball
// membership, coverage checks), so boundary placements behave as closed.
inline constexpr double kDistanceTolerance = 1e-9;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool within_radius(double distance, double radius) {
  return distance <= radius + kDistanceTolerance;
}

// Budget slack for LP-derived quantities: 1e-7, scaled for large budgets.
double budget_tolerance(double budget);

/// Client/facility names and the metric between them.
///
/// Distances are stored as an n x m client-facility matrix. Client-client
/// distances are available when the geometry was built from points or from a
/// full pairwise matrix.
class Geometry {
 public:
  using Point = std::vector<double>;

  static Geometry from_points(std::vector<std::string> client_names, std::vector<Point> client_points,
                              std::vector<std::string> facility_names,
                              std::vector<Point> facility_points);
  // rows[j][i] = d(client j, facility i).
  static Geometry from_client_rows(std::vector<std::string> client_names,
                                   std::vector<std::string> facility_names,
                                   std::vector<std::vector<double>> rows);
  // Full (n+m) x (n+m) matrix, clients first.
  static Geometry from_pairwise(std::vector<std::string> client_names,
                                std::vector<std::string> facility_names,
                                std::vector<std::vector<double>> matrix);

  int num_clients() const { return static_cast<int>(client_names_.size()); }
  int num_facilities() const { return static_cast<int>(facility_names_.size()); }
  const std::vector<std::string>& client_names() const { return client_names_; }
  const std::vector<std::string>& facility_names() const { return facility_names_; }
  const std::vector<Point>& client_points() const { return client_points_; }
  const std::vector<Point>& facility_points() const { return facility_points_; }
  bool has_points() const { return !client_points_.empty() || !facility_points_.empty(); }
  const std::vector<std::vector<double>>& pairwise() const { return pairwise_; }

  double distance(ClientId client, FacilityId facility) const {
    return client_facility_[static_cast<std::size_t>(client) * static_cast<std::size_t>(num_facilities()) +
                            static_cast<std::size_t>(facility)];
  }
  // Client-client distance when known.
  std::optional<double> client_distance(ClientId a, ClientId b) const;
  // min_{i in set} d(client, i); +infinity for the empty set.
  double distance_to_set(ClientId client, std::span<const FacilityId> set) const;
  // Sorted distinct client-facility distances.
  std::vector<double> candidate_radii() const;

  int client_index(const std::string& name) const;
  int facility_index(const std::string& name) const;

 private:
  Geometry() = default;
  void index_names();
  void validate_metric() const;

  std::vector<std::string> client_names_;
  std::vector<std::string> facility_names_;
  std::vector<Point> client_points_;
  std::vector<Point> facility_points_;
  std::vector<std::vector<double>> pairwise_;
  std::vector<double> client_facility_;
  std::map<std::string, int> client_lookup_;
  std::map<std::string, int> facility_lookup_;
};

struct Unconstrained {};

// Legal stage-I openings M_I.
using StageOneConstraint = std::variant<Unconstrained, Matroid, KnapsackSystem>;

bool is_stage1_feasible(const StageOneConstraint& constraint, std::span<const FacilityId> set);
std::string constraint_name(const StageOneConstraint& constraint);

/// A two-stage supplier instance: metric, radius demands, stage-I costs,
/// stage-I feasibility structure and budget. Immutable once built.
class Instance {
 public:
  Instance(std::shared_ptr<const Geometry> geometry, std::vector<double> radii,
           std::vector<double> stage1_costs, StageOneConstraint constraint, double budget);

  const Geometry& geometry() const { return *geometry_; }
  std::shared_ptr<const Geometry> geometry_ptr() const { return geometry_; }
  int num_clients() const { return geometry_->num_clients(); }
  int num_facilities() const { return geometry_->num_facilities(); }
  const std::vector<double>& radii() const { return radii_; }
  double radius(ClientId j) const { return radii_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& stage1_costs() const { return stage1_costs_; }
  const StageOneConstraint& constraint() const { return constraint_; }
  double budget() const { return budget_; }
  double distance(ClientId j, FacilityId i) const { return geometry_->distance(j, i); }

  bool is_homogeneous() const;
  // d(j, F) <= R_j for every client.
  bool satisfies_standing_assumption() const;

  Instance with_radii(std::vector<double> radii) const;
  Instance with_uniform_radius(double radius) const;
  Instance with_budget(double budget) const;

 private:
  std::shared_ptr<const Geometry> geometry_;
  std::vector<double> radii_;
  std::vector<double> stage1_costs_;
  StageOneConstraint constraint_;
  double budget_ = 0.0;
};

struct Scenario {
  std::string id;
  ClientSet active_clients;          // sorted
  std::vector<double> stage2_costs;  // c^A_i per facility
  double probability = 0.0;          // explicit model only
};

/// Explicit finite distribution: probabilities sum to 1 within 1e-9.
class Distribution {
 public:
  Distribution() = default;
  Distribution(std::vector<Scenario> scenarios, const Instance& instance);

  // Empirical (uniform) distribution over samples; ids are made unique.
  static Distribution uniform(std::vector<Scenario> samples, const Instance& instance);

  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  std::size_t size() const { return scenarios_.size(); }
  const Scenario& operator[](std::size_t k) const { return scenarios_[k]; }

 private:
  std::vector<Scenario> scenarios_;
};

void validate_scenario(const Scenario& scenario, const Instance& instance);

// Maps a scenario to its stage-II facility set.
using ExtensionRule = std::function<FacilitySet(const Scenario&)>;

/// Stage-I set plus stage-II sets, either listed per scenario id or induced
/// by an extension rule (listed sets take precedence).
struct Strategy {
  FacilitySet stage1;
  std::map<std::string, FacilitySet> stage2;
  ExtensionRule extension;

  // Throws MissingScenarioError when neither source covers the scenario.
  FacilitySet stage2_for(const Scenario& scenario) const;
};

struct Ball {
  ClientId client = -1;
  FacilitySet members;
};

Ball ball(const Instance& instance, ClientId client, std::optional<double> radius_override = std::nullopt);
// G_j for every client at the instance radii.
std::vector<FacilitySet> all_balls(const Instance& instance);
// G_j for every client at the given radii (one per client).
std::vector<FacilitySet> balls_at(const Geometry& geometry, std::span<const double> radii);
bool sets_intersect(std::span<const FacilityId> a, std::span<const FacilityId> b);

// argmin cost over the ball, ties to the smallest facility id.
FacilityId cheapest_in_ball(const Ball& ball, std::span<const double> costs);
FacilityId cheapest_in_ball(std::span<const FacilityId> members, std::span<const double> costs);

double set_cost(std::span<const FacilityId> set, std::span<const double> costs);
double strategy_cost(const Instance& instance, const Scenario& scenario, const Strategy& strategy);
// max_{j in A} d(j, F_I cup F_A) / R_j; 0 for empty A, +inf if nothing is open.
double maxdist(const Instance& instance, const Scenario& scenario, const Strategy& strategy);
double maxdist(const Instance& instance, std::span<const ClientId> active, std::span<const FacilityId> stage1,
               std::span<const FacilityId> stage2);
double expected_cost(const Instance& instance, const Distribution& distribution, const Strategy& strategy);

FacilitySet set_union(std::span<const FacilityId> a, std::span<const FacilityId> b);
FacilitySet normalized(FacilitySet set);

}  // namespace stochsup

#endif  // STOCHSUP_MODEL_HPP
