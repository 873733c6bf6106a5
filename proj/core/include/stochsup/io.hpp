#ifndef STOCHSUP_IO_HPP
#define STOCHSUP_IO_HPP

#include <filesystem>
#include <nlohmann/json.hpp>

#include "stochsup/model.hpp"
#include "stochsup/reduction.hpp"
#include "stochsup/robust_outlier.hpp"
#include "stochsup/sup_rounding.hpp"

namespace stochsup::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Instance document:
//   {schema_version, metric: "euclidean"|"matrix",
//    clients: [{id, point | row}], facilities: [{id, point?, c1, knapsack_weights?}],
//    matrix?: (n+m)x(n+m), radii: {id: R} | R, constraint: {type, ...}, budget}
Instance instance_from_json(const json& doc);
json to_json(const Instance& instance);

StageOneConstraint constraint_from_json(const json& doc, const json& facilities, const Geometry& geometry);
json constraint_to_json(const StageOneConstraint& constraint, const Geometry& geometry);

// {scenarios: [{id, clients: [names], c2: {facility: cost}, p}]}
std::vector<Scenario> scenarios_from_json(const json& doc, const Instance& instance);
Distribution distribution_from_json(const json& doc, const Instance& instance);
json scenario_to_json(const Scenario& scenario, const Instance& instance);
json to_json(const Distribution& distribution, const Instance& instance);

// Instance document plus {penalties: {client: v}, weights?: {facility: w}, V?}.
// Missing weights default to c1, missing V to the budget.
RwInstance rw_instance_from_json(const json& doc);
json to_json(const RwInstance& instance);

json facility_names(const Geometry& geometry, std::span<const FacilityId> set);
FacilitySet facility_set_from_json(const json& names, const Geometry& geometry);

// {F_I, pi_I: {client: rep}, gI: {client: value}, R}
json to_json(const SupCertificate& certificate, const Geometry& geometry);
SupCertificate sup_certificate_from_json(const json& doc, const Geometry& geometry);
// {F_I, rho, radii: {client: R}}
json to_json(const ReductionCertificate& certificate, const Geometry& geometry);
ReductionCertificate reduction_certificate_from_json(const json& doc, const Geometry& geometry);

// Stage-I set and listed stage-II sets, keyed by scenario id.
json strategy_to_json(const Strategy& strategy, const Geometry& geometry);

json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline; byte-stable for equal documents.
void write_json_file(const std::filesystem::path& path, const json& doc);

}  // namespace stochsup::io

#endif  // STOCHSUP_IO_HPP
