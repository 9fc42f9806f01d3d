#pragma once

// Deterministic output artifacts: CSV tables with %.17g rendering, JSON
// reports with fixed field order, atomic file writes (temp + rename).
// Identical inputs must produce byte-identical files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mpemba/a2.hpp"
#include "mpemba/scenario.hpp"
#include "mpemba/spectral.hpp"

namespace mpemba {

inline constexpr std::string_view tool_name = "mpemba";
inline constexpr std::string_view tool_version = "0.1.0";

inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Spectrum table: one row per eigenpair, k 1-based,
/// header `k,lambda,v1,...,vn`.
inline std::string spectrum_csv(const SpectralDecomposition& dec) {
  std::string out = "k,lambda";
  for (std::size_t i = 1; i <= dec.size(); ++i) out += ",v" + std::to_string(i);
  out += '\n';
  for (std::size_t k = 0; k < dec.size(); ++k) {
    out += std::to_string(k + 1);
    out += ',';
    out += format_g17(dec.eigenvalues[k]);
    for (double x : dec.eigenvectors[k]) {
      out += ',';
      out += format_g17(x);
    }
    out += '\n';
  }
  return out;
}

/// a2 table: header `beta,a2`, one row per grid point.
inline std::string a2_csv(const A2Curve& curve) {
  std::string out = "beta,a2\n";
  for (std::size_t i = 0; i < curve.beta_grid.size(); ++i) {
    out += format_g17(curve.beta_grid[i]);
    out += ',';
    out += format_g17(curve.values[i]);
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& sc, const GridSpec& resolved) {
  nlohmann::ordered_json j;
  j["energies"] = sc.energies;
  j["beta_bath"] = sc.beta_bath;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& [a, b] : sc.blocked_edges) edges.push_back({a, b});
  j["blocked_edges"] = edges;
  j["grid"] = {{"beta_min", resolved.beta_min},
               {"beta_max", resolved.beta_max},
               {"points", resolved.points}};
  return j;
}

inline nlohmann::ordered_json spectrum_to_json(const SpectralDecomposition& dec,
                                               double rel_residual) {
  nlohmann::ordered_json j;
  j["source"] = to_string(dec.source);
  j["residual"] = rel_residual;
  j["eigenvalues"] = dec.eigenvalues;
  j["eigenvectors"] = dec.eigenvectors;
  return j;
}

inline nlohmann::ordered_json a2_table_to_json(const A2Curve& curve) {
  nlohmann::ordered_json j;
  j["beta"] = curve.beta_grid;
  j["a2"] = curve.values;
  return j;
}

inline nlohmann::ordered_json report_to_json(const Scenario& sc, const GridSpec& grid,
                                             const A2Curve& curve, const MpembaReport& report) {
  nlohmann::ordered_json j;
  j["tool"] = tool_name;
  j["version"] = tool_version;
  j["scenario"] = scenario_to_json(sc, grid);
  j["source"] = to_string(curve.source);
  j["convention"] = {{"c_beta_bath", curve.convention.c_beta_bath},
                     {"eigenvector_scale", curve.convention.eigenvector_scale}};
  // lambda3 serializes as null for n = 2 (no third mode)
  j["gap_check"] = {{"lambda2", curve.gap.lambda2},
                    {"lambda3", curve.gap.lambda3},
                    {"ratio", curve.gap.ratio},
                    {"ok", curve.gap.ok}};
  j["classification"] = to_string(report.classification);
  j["gap_warning"] = report.gap_warning;

  nlohmann::ordered_json roots = nlohmann::ordered_json::array();
  for (const auto& r : report.strong_roots)
    roots.push_back({{"beta", r.beta_star}, {"side", to_string(r.side)}});
  j["strong_roots"] = roots;

  nlohmann::ordered_json windows = nlohmann::ordered_json::array();
  for (const auto& w : report.weak_intervals)
    windows.push_back(
        {{"beta_lo", w.beta_lo}, {"beta_hi", w.beta_hi}, {"side", to_string(w.side)}});
  j["weak_intervals"] = windows;
  j["tangential_candidates"] = report.tangential_candidates;

  if (curve.beta_bath_index)
    j["a2_at_beta_bath"] = curve.values[*curve.beta_bath_index];
  else
    j["a2_at_beta_bath"] = nullptr;
  return j;
}

/// Write content to path via a temp file in the same directory plus rename,
/// so readers never observe a partial file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mpemba
