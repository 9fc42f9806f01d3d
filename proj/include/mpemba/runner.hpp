#pragma once

// Scenario pipelines behind the CLI verbs: build the generator, solve the
// spectrum (closed form on complete graphs, Jacobi otherwise), scan a2 and
// classify, then emit the artifacts.

#include <filesystem>
#include <optional>
#include <string>

#include "mpemba/a2.hpp"
#include "mpemba/artifact.hpp"
#include "mpemba/jacobi.hpp"
#include "mpemba/markov.hpp"
#include "mpemba/scenario.hpp"
#include "mpemba/spectral.hpp"

namespace mpemba {

enum class OutputFormat { csv, json };

struct RunOptions {
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::csv;
  std::optional<GridSpec> grid_override;
};

inline SpectralDecomposition solve_spectrum(const EnergySpectrum& spectrum,
                                            InverseTemperature beta_bath,
                                            const AdjacencyGraph& graph) {
  if (graph.is_complete()) return closed_form_spectrum(spectrum, beta_bath);
  const BoltzmannDistribution pi = boltzmann(spectrum, beta_bath);
  const RateMatrix rates = build_metropolis(spectrum, beta_bath, graph);
  return jacobi_eigen(symmetrize(rates, pi));
}

struct SpectrumRunResult {
  SpectralDecomposition decomposition;
  double rel_residual = 0.0;
  std::filesystem::path table_path;
};

inline SpectrumRunResult run_spectrum(const Scenario& sc, const RunOptions& opt) {
  const EnergySpectrum spectrum = scenario_spectrum(sc);
  const InverseTemperature beta_bath(sc.beta_bath);
  const AdjacencyGraph graph = scenario_graph(sc);
  const RateMatrix rates = build_metropolis(spectrum, beta_bath, graph);

  SpectrumRunResult result;
  result.decomposition = solve_spectrum(spectrum, beta_bath, graph);
  result.rel_residual = residual(rates, result.decomposition);

  std::filesystem::create_directories(opt.out_dir);
  if (opt.format == OutputFormat::csv) {
    result.table_path = opt.out_dir / "spectrum.csv";
    atomic_write(result.table_path, spectrum_csv(result.decomposition));
  } else {
    result.table_path = opt.out_dir / "spectrum.json";
    nlohmann::ordered_json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["scenario"] = scenario_to_json(sc, scenario_grid(sc));
    j.update(spectrum_to_json(result.decomposition, result.rel_residual));
    atomic_write(result.table_path, j.dump(2) + "\n");
  }
  return result;
}

struct ScanRunResult {
  A2Curve curve;
  MpembaReport report;
  std::filesystem::path curve_path;
  std::filesystem::path report_path;
};

inline ScanRunResult run_scan(const Scenario& sc, const RunOptions& opt) {
  const EnergySpectrum spectrum = scenario_spectrum(sc);
  const InverseTemperature beta_bath(sc.beta_bath);
  const AdjacencyGraph graph = scenario_graph(sc);
  const GridSpec grid = opt.grid_override ? *opt.grid_override : scenario_grid(sc);

  ScanRunResult result;
  result.curve = a2_scan(spectrum, beta_bath, graph, grid);
  const StrongRootScan strong = detect_strong(result.curve);
  const auto weak = detect_weak(result.curve);
  result.report = classify(result.curve, strong, weak);

  std::filesystem::create_directories(opt.out_dir);
  if (opt.format == OutputFormat::csv) {
    result.curve_path = opt.out_dir / "a2.csv";
    atomic_write(result.curve_path, a2_csv(result.curve));
  } else {
    result.curve_path = opt.out_dir / "a2.json";
    atomic_write(result.curve_path, a2_table_to_json(result.curve).dump(2) + "\n");
  }
  result.report_path = opt.out_dir / "report.json";
  atomic_write(result.report_path,
               report_to_json(sc, grid, result.curve, result.report).dump(2) + "\n");
  return result;
}

/// The built-in three-level demonstration: energies (0, 0.5, 2), bath
/// temperature T_b = 2 (beta_b = 0.5), direct 2 <-> 3 transitions blocked.
inline Scenario demo_fig1_scenario() {
  Scenario sc;
  sc.energies = {0.0, 0.5, 2.0};
  sc.beta_bath = 0.5;
  sc.blocked_edges = {{2, 3}};
  return sc;
}

inline ScanRunResult run_demo_fig1(const RunOptions& opt) {
  return run_scan(demo_fig1_scenario(), opt);
}

}  // namespace mpemba
