#include "stochsup/io.hpp"

#include <fstream>
#include <map>
#include <set>

#include "stochsup/errors.hpp"

namespace stochsup::io {

namespace {

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return doc.at(key);
}

std::string id_of(const json& entry) {
  const json& id = require(entry, "id");
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<long long>());
  throw ValidationError("ids must be strings or integers");
}

template <typename T>
T get_as(const json& value, const char* what) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad value for ") + what + ": " + e.what());
  }
}

// Documents without a version are accepted as the current one.
void check_version(const json& doc) {
  if (doc.is_object() && doc.contains("schema_version") && doc.at("schema_version") != kSchemaVersion) {
    throw ValidationError("unsupported schema_version " + doc.at("schema_version").dump());
  }
}

json with_version(json doc) {
  doc["schema_version"] = kSchemaVersion;
  return doc;
}

std::shared_ptr<const Geometry> geometry_from_json(const json& doc) {
  const json& clients = require(doc, "clients");
  const json& facilities = require(doc, "facilities");
  if (!clients.is_array() || !facilities.is_array()) throw ValidationError("clients and facilities must be arrays");
  std::vector<std::string> client_names;
  std::vector<std::string> facility_names;
  for (const auto& c : clients) client_names.push_back(id_of(c));
  for (const auto& f : facilities) facility_names.push_back(id_of(f));

  const std::string metric = doc.value("metric", std::string("euclidean"));
  if (metric == "euclidean") {
    std::vector<Geometry::Point> cp;
    std::vector<Geometry::Point> fp;
    for (const auto& c : clients) cp.push_back(get_as<Geometry::Point>(require(c, "point"), "client point"));
    for (const auto& f : facilities) fp.push_back(get_as<Geometry::Point>(require(f, "point"), "facility point"));
    return std::make_shared<const Geometry>(
        Geometry::from_points(std::move(client_names), std::move(cp), std::move(facility_names), std::move(fp)));
  }
  if (metric == "matrix") {
    if (doc.contains("matrix")) {
      auto matrix = get_as<std::vector<std::vector<double>>>(doc.at("matrix"), "matrix");
      return std::make_shared<const Geometry>(
          Geometry::from_pairwise(std::move(client_names), std::move(facility_names), std::move(matrix)));
    }
    std::vector<std::vector<double>> rows;
    for (const auto& c : clients) rows.push_back(get_as<std::vector<double>>(require(c, "row"), "client row"));
    return std::make_shared<const Geometry>(
        Geometry::from_client_rows(std::move(client_names), std::move(facility_names), std::move(rows)));
  }
  throw ValidationError("unknown metric '" + metric + "'");
}

void geometry_to_json(const Geometry& g, json& doc) {
  json clients = json::array();
  json facilities = json::array();
  if (g.has_points()) {
    doc["metric"] = "euclidean";
    for (int j = 0; j < g.num_clients(); ++j) {
      clients.push_back({{"id", g.client_names()[static_cast<std::size_t>(j)]},
                         {"point", g.client_points()[static_cast<std::size_t>(j)]}});
    }
    for (int i = 0; i < g.num_facilities(); ++i) {
      facilities.push_back({{"id", g.facility_names()[static_cast<std::size_t>(i)]},
                            {"point", g.facility_points()[static_cast<std::size_t>(i)]}});
    }
  } else {
    doc["metric"] = "matrix";
    for (int j = 0; j < g.num_clients(); ++j) {
      json entry{{"id", g.client_names()[static_cast<std::size_t>(j)]}};
      if (g.pairwise().empty()) {
        std::vector<double> row;
        for (int i = 0; i < g.num_facilities(); ++i) row.push_back(g.distance(j, i));
        entry["row"] = row;
      }
      clients.push_back(entry);
    }
    for (int i = 0; i < g.num_facilities(); ++i) {
      facilities.push_back({{"id", g.facility_names()[static_cast<std::size_t>(i)]}});
    }
    if (!g.pairwise().empty()) doc["matrix"] = g.pairwise();
  }
  doc["clients"] = std::move(clients);
  doc["facilities"] = std::move(facilities);
}

std::vector<double> per_client(const json& value, const Geometry& g, const char* what) {
  std::vector<double> out(static_cast<std::size_t>(g.num_clients()), 0.0);
  if (value.is_number()) {
    std::fill(out.begin(), out.end(), value.get<double>());
    return out;
  }
  if (!value.is_object()) throw ValidationError(std::string(what) + " must be a number or an object keyed by client id");
  std::vector<bool> seen(out.size(), false);
  for (const auto& [name, v] : value.items()) {
    const auto j = static_cast<std::size_t>(g.client_index(name));
    out[j] = get_as<double>(v, what);
    seen[j] = true;
  }
  for (std::size_t j = 0; j < seen.size(); ++j) {
    if (!seen[j]) throw ValidationError(std::string(what) + " missing for client '" + g.client_names()[j] + "'");
  }
  return out;
}

json per_client_json(std::span<const double> values, const Geometry& g) {
  json out = json::object();
  for (int j = 0; j < g.num_clients(); ++j) out[g.client_names()[static_cast<std::size_t>(j)]] = values[static_cast<std::size_t>(j)];
  return out;
}

std::vector<double> per_facility(const json& value, const Geometry& g, const char* what) {
  if (!value.is_object()) throw ValidationError(std::string(what) + " must be an object keyed by facility id");
  std::vector<double> out(static_cast<std::size_t>(g.num_facilities()), 0.0);
  std::vector<bool> seen(out.size(), false);
  for (const auto& [name, v] : value.items()) {
    const auto i = static_cast<std::size_t>(g.facility_index(name));
    out[i] = get_as<double>(v, what);
    seen[i] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ValidationError(std::string(what) + " missing for facility '" + g.facility_names()[i] + "'");
  }
  return out;
}

json per_facility_json(std::span<const double> values, const Geometry& g) {
  json out = json::object();
  for (int i = 0; i < g.num_facilities(); ++i) {
    out[g.facility_names()[static_cast<std::size_t>(i)]] = values[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace

json facility_names(const Geometry& geometry, std::span<const FacilityId> set) {
  json out = json::array();
  for (FacilityId i : set) out.push_back(geometry.facility_names()[static_cast<std::size_t>(i)]);
  return out;
}

FacilitySet facility_set_from_json(const json& names, const Geometry& geometry) {
  if (!names.is_array()) throw ValidationError("facility set must be an array of ids");
  FacilitySet out;
  for (const auto& name : names) out.push_back(geometry.facility_index(get_as<std::string>(name, "facility id")));
  return normalized(std::move(out));
}

StageOneConstraint constraint_from_json(const json& doc, const json& facilities, const Geometry& geometry) {
  if (doc.is_null()) return Unconstrained{};
  const std::string type = get_as<std::string>(require(doc, "type"), "constraint type");
  const int m = geometry.num_facilities();
  auto blocks_from = [&](const json& list) {
    std::vector<ElementSet> blocks;
    for (const auto& block : list) blocks.push_back(facility_set_from_json(block, geometry));
    return blocks;
  };
  if (type == "none") return Unconstrained{};
  if (type == "uniform") return Matroid::uniform(m, get_as<int>(require(doc, "rank"), "rank"));
  if (type == "partition") {
    return Matroid::partition_from_blocks(m, blocks_from(require(doc, "blocks")),
                                          get_as<std::vector<int>>(require(doc, "capacities"), "capacities"));
  }
  if (type == "explicit") return Matroid::explicit_from_bases(m, blocks_from(require(doc, "bases")));
  if (type == "multiknapsack") {
    KnapsackSystem system;
    system.budgets = get_as<std::vector<std::int64_t>>(require(doc, "budgets"), "knapsack budgets");
    system.weights.assign(system.budgets.size(), std::vector<std::int64_t>(static_cast<std::size_t>(m), 0));
    for (std::size_t i = 0; i < facilities.size(); ++i) {
      const auto w = get_as<std::vector<std::int64_t>>(require(facilities[i], "knapsack_weights"), "knapsack weights");
      if (w.size() != system.budgets.size()) throw ValidationError("knapsack_weights needs one entry per budget");
      for (std::size_t l = 0; l < w.size(); ++l) system.weights[l][i] = w[l];
    }
    system.validate(m);
    return system;
  }
  throw ValidationError("unknown constraint type '" + type + "'");
}

json constraint_to_json(const StageOneConstraint& constraint, const Geometry& geometry) {
  if (std::holds_alternative<Unconstrained>(constraint)) return {{"type", "none"}};
  if (const auto* ks = std::get_if<KnapsackSystem>(&constraint)) {
    return {{"type", "multiknapsack"}, {"budgets", ks->budgets}};
  }
  const auto& mat = std::get<Matroid>(constraint);
  switch (mat.kind()) {
    case Matroid::Kind::Uniform:
      return {{"type", "uniform"}, {"rank", mat.uniform_rank()}};
    case Matroid::Kind::Partition: {
      std::vector<FacilitySet> blocks(mat.capacities().size());
      for (int i = 0; i < mat.ground_size(); ++i) {
        const int b = mat.block_of()[static_cast<std::size_t>(i)];
        if (b >= 0) blocks[static_cast<std::size_t>(b)].push_back(i);
      }
      json list = json::array();
      for (const auto& block : blocks) list.push_back(facility_names(geometry, block));
      return {{"type", "partition"}, {"blocks", list}, {"capacities", mat.capacities()}};
    }
    case Matroid::Kind::ExplicitSmall: {
      json list = json::array();
      for (const auto& basis : mat.bases()) list.push_back(facility_names(geometry, basis));
      return {{"type", "explicit"}, {"bases", list}};
    }
  }
  return {{"type", "none"}};
}

Instance instance_from_json(const json& doc) {
  check_version(doc);
  auto geometry = geometry_from_json(doc);
  const json& facilities = doc.at("facilities");
  std::vector<double> c1;
  for (const auto& f : facilities) c1.push_back(get_as<double>(require(f, "c1"), "c1"));
  auto radii = per_client(require(doc, "radii"), *geometry, "radius");
  auto constraint = constraint_from_json(doc.value("constraint", json()), facilities, *geometry);
  const double budget = get_as<double>(require(doc, "budget"), "budget");
  return Instance(std::move(geometry), std::move(radii), std::move(c1), std::move(constraint), budget);
}

json to_json(const Instance& instance) {
  const auto& g = instance.geometry();
  json doc = json::object();
  geometry_to_json(g, doc);
  const auto* ks = std::get_if<KnapsackSystem>(&instance.constraint());
  for (int i = 0; i < g.num_facilities(); ++i) {
    auto& f = doc["facilities"][static_cast<std::size_t>(i)];
    f["c1"] = instance.stage1_costs()[static_cast<std::size_t>(i)];
    if (ks) {
      std::vector<std::int64_t> w;
      for (const auto& layer : ks->weights) w.push_back(layer[static_cast<std::size_t>(i)]);
      f["knapsack_weights"] = w;
    }
  }
  doc["radii"] = per_client_json(instance.radii(), g);
  doc["constraint"] = constraint_to_json(instance.constraint(), g);
  doc["budget"] = instance.budget();
  return with_version(std::move(doc));
}

std::vector<Scenario> scenarios_from_json(const json& doc, const Instance& instance) {
  check_version(doc);
  const auto& g = instance.geometry();
  const json& list = doc.is_array() ? doc : require(doc, "scenarios");
  std::vector<Scenario> out;
  for (const auto& entry : list) {
    Scenario s;
    s.id = id_of(entry);
    for (const auto& name : require(entry, "clients")) {
      s.active_clients.push_back(g.client_index(get_as<std::string>(name, "client id")));
    }
    std::sort(s.active_clients.begin(), s.active_clients.end());
    s.active_clients.erase(std::unique(s.active_clients.begin(), s.active_clients.end()), s.active_clients.end());
    s.stage2_costs = per_facility(require(entry, "c2"), g, "c2");
    s.probability = entry.value("p", 0.0);
    out.push_back(std::move(s));
  }
  return out;
}

Distribution distribution_from_json(const json& doc, const Instance& instance) {
  return Distribution(scenarios_from_json(doc, instance), instance);
}

json scenario_to_json(const Scenario& scenario, const Instance& instance) {
  const auto& g = instance.geometry();
  json clients = json::array();
  for (ClientId j : scenario.active_clients) clients.push_back(g.client_names()[static_cast<std::size_t>(j)]);
  return {{"id", scenario.id}, {"clients", clients}, {"c2", per_facility_json(scenario.stage2_costs, g)},
          {"p", scenario.probability}};
}

json to_json(const Distribution& distribution, const Instance& instance) {
  json list = json::array();
  for (const auto& s : distribution.scenarios()) list.push_back(scenario_to_json(s, instance));
  return with_version({{"scenarios", list}});
}

RwInstance rw_instance_from_json(const json& doc) {
  check_version(doc);
  RwInstance rw;
  rw.geometry = geometry_from_json(doc);
  const auto& g = *rw.geometry;
  rw.radii = per_client(require(doc, "radii"), g, "radius");
  rw.penalties = per_client(require(doc, "penalties"), g, "penalty");
  if (doc.contains("weights")) {
    rw.weights = per_facility(doc.at("weights"), g, "weight");
  } else {
    for (const auto& f : doc.at("facilities")) rw.weights.push_back(get_as<double>(require(f, "c1"), "c1"));
  }
  rw.constraint = constraint_from_json(doc.value("constraint", json()), doc.at("facilities"), g);
  rw.budget = doc.contains("V") ? get_as<double>(doc.at("V"), "V") : get_as<double>(require(doc, "budget"), "budget");
  rw.validate();
  return rw;
}

json to_json(const RwInstance& rw) {
  const auto& g = *rw.geometry;
  json doc = json::object();
  geometry_to_json(g, doc);
  const auto* ks = std::get_if<KnapsackSystem>(&rw.constraint);
  for (int i = 0; i < g.num_facilities(); ++i) {
    auto& f = doc["facilities"][static_cast<std::size_t>(i)];
    f["c1"] = rw.weights[static_cast<std::size_t>(i)];
    if (ks) {
      std::vector<std::int64_t> w;
      for (const auto& layer : ks->weights) w.push_back(layer[static_cast<std::size_t>(i)]);
      f["knapsack_weights"] = w;
    }
  }
  doc["radii"] = per_client_json(rw.radii, g);
  doc["penalties"] = per_client_json(rw.penalties, g);
  doc["weights"] = per_facility_json(rw.weights, g);
  doc["constraint"] = constraint_to_json(rw.constraint, g);
  doc["budget"] = rw.budget;
  doc["V"] = rw.budget;
  return with_version(std::move(doc));
}

json to_json(const SupCertificate& certificate, const Geometry& geometry) {
  json reps = json::object();
  json mass = json::object();
  for (int j = 0; j < geometry.num_clients(); ++j) {
    const auto& name = geometry.client_names()[static_cast<std::size_t>(j)];
    reps[name] = geometry.client_names()[static_cast<std::size_t>(certificate.stage1_rep[static_cast<std::size_t>(j)])];
    mass[name] = certificate.stage1_mass[static_cast<std::size_t>(j)];
  }
  return {{"kind", "sup"},
          {"F_I", facility_names(geometry, certificate.stage1)},
          {"pi_I", reps},
          {"gI", mass},
          {"R", certificate.radius}};
}

SupCertificate sup_certificate_from_json(const json& doc, const Geometry& geometry) {
  SupCertificate c;
  c.stage1 = facility_set_from_json(require(doc, "F_I"), geometry);
  c.radius = get_as<double>(require(doc, "R"), "R");
  c.stage1_mass = per_client(require(doc, "gI"), geometry, "gI");
  c.stage1_rep.assign(static_cast<std::size_t>(geometry.num_clients()), -1);
  for (const auto& [name, rep] : require(doc, "pi_I").items()) {
    c.stage1_rep[static_cast<std::size_t>(geometry.client_index(name))] =
        geometry.client_index(get_as<std::string>(rep, "representative"));
  }
  for (ClientId r : c.stage1_rep) {
    if (r < 0) throw ValidationError("pi_I must map every client");
  }
  return c;
}

json to_json(const ReductionCertificate& certificate, const Geometry& geometry) {
  return {{"kind", "reduction"},
          {"F_I", facility_names(geometry, certificate.stage1)},
          {"rho", certificate.rho},
          {"radii", per_client_json(certificate.radii, geometry)}};
}

ReductionCertificate reduction_certificate_from_json(const json& doc, const Geometry& geometry) {
  ReductionCertificate c;
  c.stage1 = facility_set_from_json(require(doc, "F_I"), geometry);
  c.rho = get_as<double>(require(doc, "rho"), "rho");
  c.radii = per_client(require(doc, "radii"), geometry, "radius");
  return c;
}

json strategy_to_json(const Strategy& strategy, const Geometry& geometry) {
  json stage2 = json::object();
  for (const auto& [id, set] : strategy.stage2) stage2[id] = facility_names(geometry, set);
  return with_version({{"stage1", facility_names(geometry, strategy.stage1)}, {"stage2", stage2}});
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace stochsup::io
