#pragma once

// Scenario files: a JSON object with fields
//   energies      array of reals (n >= 2)
//   beta_bath     real > 0
//   blocked_edges optional array of 1-based index pairs (default: none)
//   grid          optional {beta_min, beta_max, points}

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mpemba/a2.hpp"
#include "mpemba/errors.hpp"
#include "mpemba/markov.hpp"

namespace mpemba {

struct Scenario {
  std::vector<double> energies;
  double beta_bath = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> blocked_edges;  // 1-based pairs
  std::optional<GridSpec> grid;
};

namespace detail {

inline double require_finite_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw ScenarioError(std::string("scenario: ") + what + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ScenarioError(std::string("scenario: ") + what + " must be finite");
  return x;
}

}  // namespace detail

inline Scenario parse_scenario_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "energies" && key != "beta_bath" && key != "blocked_edges" && key != "grid")
      throw ScenarioError("scenario: unknown field '" + key + "'");
  }

  Scenario sc;
  if (!doc.contains("energies") || !doc["energies"].is_array())
    throw ScenarioError("scenario: 'energies' must be an array");
  for (const auto& e : doc["energies"])
    sc.energies.push_back(detail::require_finite_number(e, "energy level"));
  if (sc.energies.size() < 2) throw ScenarioError("scenario: need at least two energy levels");

  if (!doc.contains("beta_bath"))
    throw ScenarioError("scenario: 'beta_bath' is required");
  sc.beta_bath = detail::require_finite_number(doc["beta_bath"], "beta_bath");
  if (sc.beta_bath <= 0.0) throw ScenarioError("scenario: beta_bath must be > 0");

  const std::size_t n = sc.energies.size();
  if (doc.contains("blocked_edges")) {
    if (!doc["blocked_edges"].is_array())
      throw ScenarioError("scenario: 'blocked_edges' must be an array of index pairs");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& pair : doc["blocked_edges"]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
          !pair[1].is_number_integer())
        throw ScenarioError("scenario: each blocked edge must be a pair of integers");
      const long long a = pair[0].get<long long>();
      const long long b = pair[1].get<long long>();
      if (a < 1 || b < 1 || std::size_t(a) > n || std::size_t(b) > n)
        throw ScenarioError("scenario: blocked edge index out of range (1-based)");
      if (a == b) throw ScenarioError("scenario: blocked edge cannot be a self pair");
      const auto key = std::minmax(std::size_t(a), std::size_t(b));
      if (!seen.insert(key).second)
        throw ScenarioError("scenario: duplicate blocked edge");
      sc.blocked_edges.emplace_back(std::size_t(a), std::size_t(b));
    }
  }

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (!g.is_object() || !g.contains("beta_min") || !g.contains("beta_max") ||
        !g.contains("points"))
      throw ScenarioError("scenario: 'grid' must be {beta_min, beta_max, points}");
    GridSpec spec;
    spec.beta_min = detail::require_finite_number(g["beta_min"], "grid.beta_min");
    spec.beta_max = detail::require_finite_number(g["beta_max"], "grid.beta_max");
    if (!g["points"].is_number_integer() || g["points"].get<long long>() < 2)
      throw ScenarioError("scenario: grid.points must be an integer >= 2");
    spec.points = g["points"].get<std::size_t>();
    if (!(spec.beta_min > 0.0) || !(spec.beta_min < spec.beta_max))
      throw ScenarioError("scenario: grid needs 0 < beta_min < beta_max");
    sc.grid = spec;
  }
  return sc;
}

inline Scenario parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("scenario: cannot read file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str());
}

inline EnergySpectrum scenario_spectrum(const Scenario& sc) {
  return EnergySpectrum(sc.energies);
}

/// Adjacency graph of the scenario (complete minus blocked edges).
/// Throws DisconnectedGraphError if the blocked edges cut the graph apart.
inline AdjacencyGraph scenario_graph(const Scenario& sc) {
  std::vector<std::pair<std::size_t, std::size_t>> zero_based;
  zero_based.reserve(sc.blocked_edges.size());
  for (const auto& [a, b] : sc.blocked_edges) zero_based.emplace_back(a - 1, b - 1);
  return AdjacencyGraph::complete_without(sc.energies.size(), zero_based);
}

inline GridSpec scenario_grid(const Scenario& sc) {
  return sc.grid ? *sc.grid : GridSpec::default_for(sc.beta_bath);
}

}  // namespace mpemba
