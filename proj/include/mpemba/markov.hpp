#pragma once

// Boltzmann distributions, adjacency graphs and Metropolis rate matrices for
// continuous-time Markov jump dynamics.  Column j of a rate matrix holds the
// outgoing rates of state j; every column sums to zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mpemba/errors.hpp"

namespace mpemba {

/// Energy levels E_i defining the target equilibrium (k_B = 1 throughout).
/// Levels need not be sorted or distinct.
class EnergySpectrum {
 public:
  explicit EnergySpectrum(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.size() < 2)
      throw std::invalid_argument("EnergySpectrum: need at least two levels");
    for (double e : levels_)
      if (!std::isfinite(e))
        throw std::invalid_argument("EnergySpectrum: levels must be finite");
  }

  [[nodiscard]] std::size_t size() const noexcept { return levels_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return levels_[i]; }
  [[nodiscard]] const std::vector<double>& levels() const noexcept { return levels_; }

 private:
  std::vector<double> levels_;
};

/// Inverse temperature beta = 1/T.  beta = 0 (infinite temperature) is
/// allowed; negative values are rejected.
class InverseTemperature {
 public:
  explicit InverseTemperature(double beta) : beta_(beta) {
    if (!std::isfinite(beta_) || beta_ < 0.0)
      throw std::invalid_argument("InverseTemperature: beta must be finite and >= 0");
  }

  [[nodiscard]] double value() const noexcept { return beta_; }

 private:
  double beta_;
};

/// Normalized Boltzmann weights pi_i together with their log-space backing,
/// so that ratios of weights can always be formed as exp of a difference.
/// Invariants: weights[i] > 0, sum(weights) == 1 within 1e-12, and
/// weights[i] == exp(log_weights[i] - partition_log) within 1e-12.
struct BoltzmannDistribution {
  std::vector<double> weights;
  std::vector<double> log_weights;  // -beta * E_i, unnormalized
  double partition_log = 0.0;       // log Z

  [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
};

/// pi_i proportional to exp(-beta E_i), normalized.  Uses max-subtraction so
/// no intermediate overflows for |beta * E_i| up to 700.
inline BoltzmannDistribution boltzmann(const EnergySpectrum& spectrum,
                                       InverseTemperature beta) {
  const std::size_t n = spectrum.size();
  BoltzmannDistribution pi;
  pi.log_weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) pi.log_weights[i] = -beta.value() * spectrum[i];

  const double shift = *std::max_element(pi.log_weights.begin(), pi.log_weights.end());
  double sum = 0.0;
  for (double lw : pi.log_weights) sum += std::exp(lw - shift);
  pi.partition_log = shift + std::log(sum);

  pi.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    pi.weights[i] = std::exp(pi.log_weights[i] - pi.partition_log);
    if (pi.weights[i] <= 0.0)
      throw std::invalid_argument(
          "boltzmann: a weight underflowed to zero (beta * energy spread too large)");
  }
  return pi;
}

/// Symmetric transition graph on n states, no self loops, single
/// communicating class.  Construction rejects disconnected graphs since the
/// stationary state would not be unique.
class AdjacencyGraph {
 public:
  AdjacencyGraph(std::size_t n, std::vector<char> allowed)
      : n_(n), allowed_(std::move(allowed)) {
    if (n_ < 2) throw std::invalid_argument("AdjacencyGraph: need at least two states");
    if (allowed_.size() != n_ * n_)
      throw std::invalid_argument("AdjacencyGraph: adjacency storage has wrong size");
    for (std::size_t i = 0; i < n_; ++i) {
      if (allowed_[i * n_ + i])
        throw std::invalid_argument("AdjacencyGraph: self loops are not allowed");
      for (std::size_t j = i + 1; j < n_; ++j)
        if (bool(allowed_[i * n_ + j]) != bool(allowed_[j * n_ + i]))
          throw std::invalid_argument("AdjacencyGraph: adjacency must be symmetric");
    }
    check_connected();
  }

  static AdjacencyGraph complete(std::size_t n) {
    std::vector<char> a(n * n, 1);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 0;
    return AdjacencyGraph(n, std::move(a));
  }

  /// Complete graph minus the given (0-based, unordered) edges.
  static AdjacencyGraph complete_without(
      std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& blocked) {
    std::vector<char> a(n * n, 1);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 0;
    for (const auto& [i, j] : blocked) {
      if (i >= n || j >= n)
        throw std::invalid_argument("AdjacencyGraph: blocked edge index out of range");
      if (i == j) throw std::invalid_argument("AdjacencyGraph: blocked edge is a self pair");
      a[i * n + j] = 0;
      a[j * n + i] = 0;
    }
    return AdjacencyGraph(n, std::move(a));
  }

  [[nodiscard]] std::size_t size() const noexcept { return n_; }

  [[nodiscard]] bool allowed(std::size_t i, std::size_t j) const noexcept {
    return allowed_[i * n_ + j] != 0;
  }

  [[nodiscard]] bool is_complete() const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j && !allowed_[i * n_ + j]) return false;
    return true;
  }

 private:
  void check_connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n_; ++w) {
        if (allowed_[v * n_ + w] && !seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    if (reached != n_)
      throw DisconnectedGraphError("AdjacencyGraph: graph is not connected");
  }

  std::size_t n_;
  std::vector<char> allowed_;  // row-major n x n
};

/// Dense generator of a Markov jump process.  Off-diagonal entry (i, j) is
/// the jump rate j -> i; diagonals carry the escape rates.  The struct itself
/// only fixes the shape; build_metropolis guarantees the generator
/// invariants, check_generator / check_detailed_balance measure them.
struct RateMatrix {
  std::size_t n = 0;
  std::vector<double> entries;  // row-major n x n

  RateMatrix(std::size_t n_states, std::vector<double> values)
      : n(n_states), entries(std::move(values)) {
    if (n == 0 || entries.size() != n * n)
      throw std::invalid_argument("RateMatrix: entry storage has wrong size");
    for (double x : entries)
      if (!std::isfinite(x)) throw std::invalid_argument("RateMatrix: entries must be finite");
  }

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries[i * n + j];
  }
  [[nodiscard]] std::size_t size() const noexcept { return n; }
};

/// Metropolis generator restricted to a graph: for allowed (i, j), i != j,
/// R_ij = min(1, pi_i / pi_j) = min(1, exp(-beta (E_i - E_j))); forbidden
/// entries are zero; diagonals make every column sum to zero.
inline RateMatrix build_metropolis(const EnergySpectrum& spectrum, InverseTemperature beta,
                                   const AdjacencyGraph& graph) {
  const std::size_t n = spectrum.size();
  if (graph.size() != n)
    throw std::invalid_argument("build_metropolis: spectrum and graph sizes differ");

  std::vector<double> lw(n);
  for (std::size_t i = 0; i < n; ++i) lw[i] = -beta.value() * spectrum[i];

  std::vector<double> r(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !graph.allowed(i, j)) continue;
      const double d = lw[i] - lw[j];
      r[i * n + j] = d >= 0.0 ? 1.0 : std::exp(d);
    }
  for (std::size_t j = 0; j < n; ++j) {
    double escape = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) escape += r[i * n + j];
    r[j * n + j] = -escape;
  }
  return RateMatrix(n, std::move(r));
}

/// Largest detailed-balance residual max_{i,j} |R_ij pi_j - R_ji pi_i|.
inline double check_detailed_balance(const RateMatrix& rates,
                                     const BoltzmannDistribution& pi) {
  if (rates.size() != pi.size())
    throw std::invalid_argument("check_detailed_balance: dimension mismatch");
  const std::size_t n = rates.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      worst = std::max(worst,
                       std::abs(rates(i, j) * pi.weights[j] - rates(j, i) * pi.weights[i]));
  return worst;
}

/// Largest column-sum magnitude; zero for a probability-conserving generator.
inline double check_generator(const RateMatrix& rates) {
  const std::size_t n = rates.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += rates(i, j);
    worst = std::max(worst, std::abs(col));
  }
  return worst;
}

/// Row-sum operator norm ||R||_inf.
inline double matrix_inf_norm(const RateMatrix& rates) {
  const std::size_t n = rates.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(rates(i, j));
    worst = std::max(worst, row);
  }
  return worst;
}

}  // namespace mpemba
