#pragma once

// Closed-form eigendecomposition of Metropolis dynamics on the complete
// graph.  With states ordered by descending stationary weight (permutation
// r, tail sums Z_k = sum_{l>=k} pi_{r_l}), the generator has
//
//   lambda_1 = 0,                 v_1 = (pi_1, ..., pi_n)
//   lambda_k = -(Z_{k-1} / pi_{r_{k-1}} + k - 2),          1 < k <= n
//   v_k      = ((k-2) zeros, -Z_k, pi_{r_k}, ..., pi_{r_n})   in the sorted
//              basis; the original-basis vectors are the permutation of these.
//
// The nonzero eigenvalues come out ordered by ascending absolute value.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mpemba/markov.hpp"

namespace mpemba {

enum class SpectrumSource { closed_form, numeric };

/// Permutation sorting states by descending stationary weight.
/// order[k] is the original index of the state in sorted position k;
/// inverse[i] is the sorted position of original state i.  Ties are broken
/// by ascending original index, so the permutation is deterministic.
struct OrderingPermutation {
  std::vector<std::size_t> order;
  std::vector<std::size_t> inverse;
};

inline OrderingPermutation order_states(const BoltzmannDistribution& pi) {
  const std::size_t n = pi.size();
  OrderingPermutation perm;
  perm.order.resize(n);
  std::iota(perm.order.begin(), perm.order.end(), std::size_t{0});
  std::stable_sort(perm.order.begin(), perm.order.end(),
                   [&](std::size_t a, std::size_t b) { return pi.weights[a] > pi.weights[b]; });
  perm.inverse.resize(n);
  for (std::size_t k = 0; k < n; ++k) perm.inverse[perm.order[k]] = k;
  return perm;
}

/// Tail sums of the sorted weights: z[k] = sum_{l=k}^{n-1} pi_{order[l]}
/// (0-based).  z[0] == 1 for a normalized distribution and z is strictly
/// decreasing for positive weights.
struct TailSums {
  std::vector<double> z;
};

inline TailSums tail_sums(const BoltzmannDistribution& pi, const OrderingPermutation& perm) {
  const std::size_t n = pi.size();
  if (perm.order.size() != n)
    throw std::invalid_argument("tail_sums: permutation size mismatch");
  TailSums tails;
  tails.z.resize(n);
  double acc = 0.0;
  // accumulate from the smallest weights upward to minimize rounding loss
  for (std::size_t k = n; k-- > 0;) {
    acc += pi.weights[perm.order[k]];
    tails.z[k] = acc;
  }
  return tails;
}

/// Right eigenpairs of a rate matrix in the original basis, eigenvalues
/// ordered by ascending absolute value (lambda_1 = 0 first for generators).
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
  SpectrumSource source = SpectrumSource::closed_form;

  [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Full eigensystem of the complete-graph Metropolis generator at the given
/// temperature.  The ratio Z_{k-1} / pi_{r_{k-1}} is evaluated as a sum of
/// log-space weight ratios, which keeps it finite for any representable
/// beta * E and makes the fully degenerate case come out exactly -n.
inline SpectralDecomposition closed_form_spectrum(const EnergySpectrum& spectrum,
                                                  InverseTemperature beta) {
  const std::size_t n = spectrum.size();
  const BoltzmannDistribution pi = boltzmann(spectrum, beta);
  const OrderingPermutation perm = order_states(pi);
  const TailSums tails = tail_sums(pi, perm);

  std::vector<double> lw_sorted(n);
  for (std::size_t k = 0; k < n; ++k) lw_sorted[k] = pi.log_weights[perm.order[k]];

  SpectralDecomposition dec;
  dec.source = SpectrumSource::closed_form;
  dec.eigenvalues.resize(n);
  dec.eigenvectors.assign(n, std::vector<double>(n, 0.0));

  dec.eigenvalues[0] = 0.0;  // structural
  dec.eigenvectors[0] = pi.weights;

  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t p = k - 1;  // sorted position of pi_{r_{k-1}}
    double ratio_sum = 0.0;       // Z_{k-1} / pi_{r_{k-1}}, smallest terms first
    for (std::size_t l = n; l-- > p;) ratio_sum += std::exp(lw_sorted[l] - lw_sorted[p]);
    dec.eigenvalues[k] = -(ratio_sum + double(k - 1));

    std::vector<double>& v = dec.eigenvectors[k];
    v[perm.order[k - 1]] = -tails.z[k];
    for (std::size_t l = k; l < n; ++l) v[perm.order[l]] = pi.weights[perm.order[l]];
  }
  return dec;
}

/// Worst relative eigenpair residual
///   max_k ||R v_k - lambda_k v_k||_inf / (||R||_inf ||v_k||_inf).
inline double residual(const RateMatrix& rates, const SpectralDecomposition& dec) {
  const std::size_t n = rates.size();
  if (dec.size() != n || dec.eigenvectors.size() != n)
    throw std::invalid_argument("residual: dimension mismatch");
  const double r_norm = matrix_inf_norm(rates);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<double>& v = dec.eigenvectors[k];
    double v_norm = 0.0;
    for (double x : v) v_norm = std::max(v_norm, std::abs(x));
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double y = 0.0;
      for (std::size_t j = 0; j < n; ++j) y += rates(i, j) * v[j];
      res = std::max(res, std::abs(y - dec.eigenvalues[k] * v[i]));
    }
    worst = std::max(worst, res / (r_norm * v_norm));
  }
  return worst;
}

}  // namespace mpemba
