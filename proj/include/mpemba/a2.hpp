#pragma once

// Mpemba coefficient a2(beta) and effect detection.  a2 is the overlap of a
// Boltzmann initial state pi(beta) with the slowest relaxation mode v2 of
// the generator built at the bath temperature:
//
//   a2(beta) = c(beta_b) <v2| F(beta_b) |pi(beta)>,   F(beta_b) = diag(e^{beta_b E_i})
//
// with c(beta_b) fixed to 1 here.  A strong effect is a zero of a2 away from
// beta_b; a weak effect is non-monotonicity of a2 on one side of beta_b.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpemba/jacobi.hpp"
#include "mpemba/markov.hpp"
#include "mpemba/spectral.hpp"

namespace mpemba {

/// <v2| F(beta_b) |pi(beta)> with c(beta_b) = 1.  Each term is a single exp
/// of a log-space exponent, so products of exponentials never overflow.
inline double a2_inner(const EnergySpectrum& spectrum, InverseTemperature beta_bath,
                       InverseTemperature beta, const std::vector<double>& v2) {
  const std::size_t n = spectrum.size();
  if (v2.size() != n) throw std::invalid_argument("a2_inner: eigenvector size mismatch");
  const BoltzmannDistribution pi = boltzmann(spectrum, beta);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exponent = beta_bath.value() * spectrum[i] + pi.log_weights[i] - pi.partition_log;
    sum += v2[i] * std::exp(exponent);
  }
  return sum;
}

/// e^{beta E_min} Z_1(beta) = sum_l exp(-beta (E_l - E_min)), the partition
/// sum referenced to the ground level.  Lies in [1, n] and is strictly
/// decreasing in beta unless all energies are equal.
inline double scaled_partition(const EnergySpectrum& spectrum, InverseTemperature beta) {
  const double e_min = *std::min_element(spectrum.levels().begin(), spectrum.levels().end());
  double sum = 0.0;
  for (double e : spectrum.levels()) sum += std::exp(-beta.value() * (e - e_min));
  return sum;
}

/// Complete-graph a2 in closed form:
///   a2(beta) = 1 - e^{beta_b E_min} Z_1(beta_b) / (e^{beta E_min} Z_1(beta)).
inline double a2_complete_closed_form(const EnergySpectrum& spectrum,
                                      InverseTemperature beta_bath, InverseTemperature beta) {
  const double log_ratio = std::log(scaled_partition(spectrum, beta_bath)) -
                           std::log(scaled_partition(spectrum, beta));
  return 1.0 - std::exp(log_ratio);
}

/// Spectral-gap condition |lambda_2| < |lambda_3| behind the long-time
/// single-mode approximation.  Vacuously ok for n = 2 (lambda_3 = -inf).
struct GapCheck {
  double lambda2 = 0.0;
  double lambda3 = -std::numeric_limits<double>::infinity();
  double ratio = 0.0;  // |lambda2| / |lambda3|
  bool ok = true;
};

inline GapCheck gap_check(const SpectralDecomposition& dec) {
  GapCheck gap;
  gap.lambda2 = dec.eigenvalues.at(1);
  if (dec.size() < 3) return gap;
  gap.lambda3 = dec.eigenvalues[2];
  const double a2 = std::abs(gap.lambda2);
  const double a3 = std::abs(gap.lambda3);
  gap.ratio = a3 > 0.0 ? a2 / a3 : std::numeric_limits<double>::infinity();
  gap.ok = a2 < a3 * (1.0 - 1e-9);
  return gap;
}

/// Inverse-temperature grid request for a scan.
struct GridSpec {
  double beta_min = 0.0;
  double beta_max = 0.0;
  std::size_t points = 400;

  static GridSpec default_for(double beta_bath) {
    return GridSpec{beta_bath / 50.0, 50.0 * beta_bath, 400};
  }
};

struct A2Convention {
  double c_beta_bath = 1.0;
  std::string eigenvector_scale;  // how v2 was scaled by its producing module
};

/// Sampled a2 over an increasing beta grid.  The bath point beta_b is always
/// a grid point when it falls inside the range (beta_bath_index), so the
/// a2(beta_b) = 0 identity is visible in the samples.  `evaluate` is the
/// underlying a2 function used for root refinement; when absent, detectors
/// fall back to piecewise-linear interpolation of the samples.
struct A2Curve {
  std::vector<double> beta_grid;
  std::vector<double> values;
  double beta_bath = 0.0;
  std::optional<std::size_t> beta_bath_index;
  A2Convention convention;
  GapCheck gap;
  SpectrumSource source = SpectrumSource::closed_form;
  std::function<double(double)> evaluate;
};

namespace detail {

inline std::vector<double> log_spaced_grid(const GridSpec& spec) {
  if (!(std::isfinite(spec.beta_min) && std::isfinite(spec.beta_max)) || spec.beta_min <= 0.0 ||
      spec.beta_min >= spec.beta_max)
    throw std::invalid_argument("a2 scan: grid needs 0 < beta_min < beta_max");
  if (spec.points < 2) throw std::invalid_argument("a2 scan: grid needs at least two points");
  std::vector<double> grid(spec.points);
  const double llo = std::log(spec.beta_min);
  const double lhi = std::log(spec.beta_max);
  for (std::size_t i = 0; i < spec.points; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * double(i) / double(spec.points - 1));
  grid.front() = spec.beta_min;
  grid.back() = spec.beta_max;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("a2 scan: grid points collapse; range too narrow");
  return grid;
}

// Insert beta_bath as an exact grid point when it lies inside the range;
// returns its index, or nullopt when it is exterior.
inline std::optional<std::size_t> insert_bath_point(std::vector<double>& grid, double beta_bath) {
  if (beta_bath < grid.front() || beta_bath > grid.back()) return std::nullopt;
  auto it = std::lower_bound(grid.begin(), grid.end(), beta_bath);
  if (it != grid.end() && std::abs(*it - beta_bath) <= 1e-12 * beta_bath) {
    *it = beta_bath;
    return std::size_t(it - grid.begin());
  }
  if (it != grid.begin() && std::abs(*(it - 1) - beta_bath) <= 1e-12 * beta_bath) {
    *(it - 1) = beta_bath;
    return std::size_t(it - 1 - grid.begin());
  }
  const std::size_t pos = std::size_t(it - grid.begin());
  grid.insert(it, beta_bath);
  return pos;
}

}  // namespace detail

/// Build the generator at the bath temperature, take v2 (closed form on the
/// complete graph, Jacobi otherwise) and sample a2 across the grid.
inline A2Curve a2_scan(const EnergySpectrum& spectrum, InverseTemperature beta_bath,
                       const AdjacencyGraph& graph, const GridSpec& grid_spec) {
  if (beta_bath.value() <= 0.0)
    throw std::invalid_argument("a2_scan: bath inverse temperature must be positive");

  A2Curve curve;
  curve.beta_bath = beta_bath.value();
  curve.convention.c_beta_bath = 1.0;

  SpectralDecomposition dec;
  if (graph.is_complete()) {
    dec = closed_form_spectrum(spectrum, beta_bath);
    curve.convention.eigenvector_scale = "closed-form (-Z_k, pi entries)";
  } else {
    const BoltzmannDistribution pi_bath = boltzmann(spectrum, beta_bath);
    const RateMatrix rates = build_metropolis(spectrum, beta_bath, graph);
    dec = jacobi_eigen(symmetrize(rates, pi_bath));
    curve.convention.eigenvector_scale = "unit 2-norm, first significant entry positive";
  }
  curve.source = dec.source;
  curve.gap = gap_check(dec);

  curve.beta_grid = detail::log_spaced_grid(grid_spec);
  curve.beta_bath_index = detail::insert_bath_point(curve.beta_grid, beta_bath.value());

  const std::vector<double> v2 = dec.eigenvectors.at(1);
  curve.evaluate = [spectrum, bb = beta_bath.value(), v2](double b) {
    return a2_inner(spectrum, InverseTemperature(bb), InverseTemperature(b), v2);
  };
  curve.values.resize(curve.beta_grid.size());
  for (std::size_t i = 0; i < curve.beta_grid.size(); ++i)
    curve.values[i] = curve.evaluate(curve.beta_grid[i]);
  return curve;
}

inline A2Curve a2_scan(const EnergySpectrum& spectrum, InverseTemperature beta_bath,
                       const AdjacencyGraph& graph) {
  return a2_scan(spectrum, beta_bath, graph, GridSpec::default_for(beta_bath.value()));
}

/// Zeros of a2 away from beta_b.  `roots` bracket an actual sign change and
/// are refined by bisection; `tangential_candidates` are grid points where
/// |a2| dips below 1e-9 without changing sign.
struct StrongRootScan {
  std::vector<double> roots;
  std::vector<double> tangential_candidates;
};

namespace detail {

inline std::function<double(double)> curve_function(const A2Curve& curve) {
  if (curve.evaluate) return curve.evaluate;
  return [grid = curve.beta_grid, vals = curve.values](double x) {
    if (x <= grid.front()) return vals.front();
    if (x >= grid.back()) return vals.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t hi = std::size_t(it - grid.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
    return vals[lo] + t * (vals[hi] - vals[lo]);
  };
}

inline double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                          double f_lo) {
  while (hi - lo > 1e-10 * std::max(std::abs(lo), std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_lo < 0.0) != (f_mid < 0.0)) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline StrongRootScan detect_strong(const A2Curve& curve) {
  const std::vector<double>& grid = curve.beta_grid;
  const std::vector<double>& vals = curve.values;
  const std::size_t n = grid.size();
  StrongRootScan scan;
  if (n < 2) return scan;
  const auto f = detail::curve_function(curve);
  const auto& ib = curve.beta_bath_index;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (ib && (i == *ib || i + 1 == *ib)) continue;  // bracket containing beta_b
    // both samples under the noise floor is a flat zero, not a crossing
    if (std::max(std::abs(vals[i]), std::abs(vals[i + 1])) <= 1e-11) continue;
    if (vals[i] * vals[i + 1] < 0.0)
      scan.roots.push_back(detail::bisect_root(f, grid[i], grid[i + 1], vals[i]));
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (ib && i == *ib) continue;
    if (vals[i] == 0.0 && vals[i - 1] * vals[i + 1] < 0.0 &&
        std::max(std::abs(vals[i - 1]), std::abs(vals[i + 1])) > 1e-11)
      scan.roots.push_back(grid[i]);
  }
  std::sort(scan.roots.begin(), scan.roots.end());

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (ib && i == *ib) continue;
    if (std::abs(vals[i]) < 1e-9 && std::abs(vals[i]) <= std::abs(vals[i - 1]) &&
        std::abs(vals[i]) <= std::abs(vals[i + 1]) && vals[i - 1] * vals[i + 1] > 0.0 &&
        std::max(std::abs(vals[i - 1]), std::abs(vals[i + 1])) > 1e-9)
      scan.tangential_candidates.push_back(grid[i]);
  }
  return scan;
}

/// Interior extrema of a2 on either side of beta_b, reported as bracketing
/// grid intervals.  Finite differences below the 1e-11 noise floor are
/// ignored.
inline std::vector<std::pair<double, double>> detect_weak(const A2Curve& curve) {
  const std::vector<double>& grid = curve.beta_grid;
  const std::vector<double>& vals = curve.values;
  std::vector<std::pair<double, double>> intervals;

  // side ranges [lo, hi) strictly before and after the bath point
  std::size_t split_lo, split_hi;
  if (curve.beta_bath_index) {
    split_lo = *curve.beta_bath_index;
    split_hi = *curve.beta_bath_index + 1;
  } else {
    split_lo = std::size_t(
        std::lower_bound(grid.begin(), grid.end(), curve.beta_bath) - grid.begin());
    split_hi = split_lo;
  }

  const auto scan_side = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo < 3) return;
    std::vector<std::pair<std::size_t, double>> diffs;  // (left index, difference)
    for (std::size_t i = lo; i + 1 < hi; ++i) {
      const double d = vals[i + 1] - vals[i];
      if (std::abs(d) > 1e-11) diffs.emplace_back(i, d);
    }
    for (std::size_t k = 1; k < diffs.size(); ++k)
      if (diffs[k - 1].second * diffs[k].second < 0.0)
        intervals.emplace_back(grid[diffs[k - 1].first], grid[diffs[k].first + 1]);
  };
  scan_side(0, split_lo);
  scan_side(split_hi, grid.size());
  return intervals;
}

enum class Classification { none, weak, strong, strong_and_weak };

/// direct: finding on the hot-preparation side (beta < beta_b, T > T_b);
/// inverse: cold-preparation side (beta > beta_b).
enum class EffectSide { direct, inverse };

struct StrongRootFinding {
  double beta_star = 0.0;
  EffectSide side = EffectSide::direct;
};

struct WeakWindowFinding {
  double beta_lo = 0.0;
  double beta_hi = 0.0;
  EffectSide side = EffectSide::direct;
};

struct MpembaReport {
  std::vector<StrongRootFinding> strong_roots;
  std::vector<WeakWindowFinding> weak_intervals;
  std::vector<double> tangential_candidates;
  Classification classification = Classification::none;
  bool gap_warning = false;  // |lambda2| not separated from |lambda3|
};

inline MpembaReport classify(const A2Curve& curve, const StrongRootScan& strong,
                             const std::vector<std::pair<double, double>>& weak) {
  MpembaReport report;
  for (double root : strong.roots)
    report.strong_roots.push_back(
        {root, root < curve.beta_bath ? EffectSide::direct : EffectSide::inverse});
  for (const auto& [lo, hi] : weak)
    report.weak_intervals.push_back(
        {lo, hi, 0.5 * (lo + hi) < curve.beta_bath ? EffectSide::direct : EffectSide::inverse});
  report.tangential_candidates = strong.tangential_candidates;

  const bool has_strong = !report.strong_roots.empty();
  const bool has_weak = !report.weak_intervals.empty();
  report.classification = has_strong && has_weak ? Classification::strong_and_weak
                          : has_strong           ? Classification::strong
                          : has_weak             ? Classification::weak
                                                 : Classification::none;
  report.gap_warning = !curve.gap.ok;
  return report;
}

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::none: return "none";
    case Classification::weak: return "weak";
    case Classification::strong: return "strong";
    case Classification::strong_and_weak: return "strong-and-weak";
  }
  return "none";
}

inline const char* to_string(EffectSide s) {
  return s == EffectSide::direct ? "direct" : "inverse";
}

inline const char* to_string(SpectrumSource s) {
  return s == SpectrumSource::closed_form ? "closed-form" : "numeric";
}

}  // namespace mpemba
