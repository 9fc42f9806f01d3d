#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mpemba/jacobi.hpp"
#include "mpemba/spectral.hpp"
#include "test_helpers.hpp"

using namespace mpemba;

namespace {

BoltzmannDistribution from_weights(std::vector<double> weights) {
  BoltzmannDistribution pi;
  pi.weights = std::move(weights);
  pi.log_weights.resize(pi.weights.size());
  for (std::size_t i = 0; i < pi.weights.size(); ++i)
    pi.log_weights[i] = std::log(pi.weights[i]);
  pi.partition_log = 0.0;
  return pi;
}

}  // namespace

TEST_CASE("order_states: descending weights, stable on ties") {
  const auto a = order_states(from_weights({0.2, 0.5, 0.3}));
  CHECK(a.order == std::vector<std::size_t>{1, 2, 0});
  CHECK(a.inverse == std::vector<std::size_t>{2, 0, 1});

  const auto b = order_states(from_weights({0.25, 0.25, 0.25, 0.25}));
  CHECK(b.order == std::vector<std::size_t>{0, 1, 2, 3});

  const auto c = order_states(from_weights({0.3, 0.3, 0.4}));
  CHECK(c.order == std::vector<std::size_t>{2, 0, 1});
}

TEST_CASE("tail_sums: examples") {
  const auto pi2 = boltzmann(EnergySpectrum({0.0, std::log(2.0)}), InverseTemperature(1.0));
  const auto z2 = tail_sums(pi2, order_states(pi2));
  CHECK(std::abs(z2.z[0] - 1.0) < 1e-12);
  CHECK(std::abs(z2.z[1] - 1.0 / 3.0) < 1e-12);

  const auto pi4 = from_weights({0.25, 0.25, 0.25, 0.25});
  const auto z4 = tail_sums(pi4, order_states(pi4));
  CHECK(std::abs(z4.z[0] - 1.0) < 1e-15);
  CHECK(std::abs(z4.z[1] - 0.75) < 1e-15);
  CHECK(std::abs(z4.z[2] - 0.5) < 1e-15);
  CHECK(std::abs(z4.z[3] - 0.25) < 1e-15);

  const auto pi3 = from_weights({0.5, 0.3, 0.2});
  const auto z3 = tail_sums(pi3, order_states(pi3));
  CHECK(std::abs(z3.z[0] - 1.0) < 1e-15);
  CHECK(std::abs(z3.z[1] - 0.5) < 1e-15);
  CHECK(std::abs(z3.z[2] - 0.2) < 1e-15);
}

TEST_CASE("closed_form_spectrum: two-level base case") {
  const auto spectrum = EnergySpectrum({0.0, 1.0});
  const auto dec = closed_form_spectrum(spectrum, InverseTemperature(1.0));
  const auto pi = boltzmann(spectrum, InverseTemperature(1.0));

  CHECK(dec.eigenvalues[0] == 0.0);
  CHECK(dec.eigenvectors[0][0] == pi.weights[0]);
  CHECK(dec.eigenvectors[0][1] == pi.weights[1]);
  // lambda_2 = -Z_1 e^{beta E_1} = -(1 + e^{-1}) in the unnormalized convention
  CHECK(std::abs(dec.eigenvalues[1] + (1.0 + std::exp(-1.0))) < 1e-14);
  // v_2 = (-Z_2, pi_2)
  CHECK(std::abs(dec.eigenvectors[1][0] + pi.weights[1]) < 1e-15);
  CHECK(dec.eigenvectors[1][1] == pi.weights[1]);
}

TEST_CASE("closed_form_spectrum: fully degenerate spectrum gives lambda_k = -n exactly") {
  for (std::size_t n : {2u, 3u, 5u, 9u}) {
    const auto dec = closed_form_spectrum(EnergySpectrum(std::vector<double>(n, 0.42)),
                                          InverseTemperature(1.7));
    CHECK(dec.eigenvalues[0] == 0.0);
    for (std::size_t k = 1; k < n; ++k) CHECK(dec.eigenvalues[k] == -double(n));
  }
}

TEST_CASE("closed_form_spectrum: matches the numeric oracle on the 3-level example") {
  const auto spectrum = EnergySpectrum({0.0, 0.5, 2.0});
  const InverseTemperature beta(0.5);
  const auto closed = closed_form_spectrum(spectrum, beta);
  const auto pi = boltzmann(spectrum, beta);
  const auto rates = build_metropolis(spectrum, beta, AdjacencyGraph::complete(3));
  const auto numeric = jacobi_eigen(symmetrize(rates, pi));
  const auto report = match_spectra(closed, numeric);
  CHECK(report.eigenvalue_max_abs_diff <= 1e-9);
  CHECK(report.eigenvector_min_alignment >= 1.0 - 1e-9);
}

TEST_CASE("closed_form_spectrum: rejects fewer than two levels") {
  CHECK_THROWS_AS(EnergySpectrum({0.0}), std::invalid_argument);
}

TEST_CASE("residual: closed form is tight, perturbation is visible") {
  const auto spectrum = EnergySpectrum({0.0, 0.9, 2.3, 3.1});
  const InverseTemperature beta(0.8);
  const auto rates = build_metropolis(spectrum, beta, AdjacencyGraph::complete(4));
  auto dec = closed_form_spectrum(spectrum, beta);
  CHECK(residual(rates, dec) <= 1e-10);

  auto perturbed = dec;
  perturbed.eigenvalues[1] += 0.1;
  CHECK(residual(rates, perturbed) >= 0.1 / matrix_inf_norm(rates) - 1e-12);
}

TEST_CASE("residual: exact-arithmetic two-level case") {
  const auto spectrum = EnergySpectrum({0.0, 1.0});
  const auto rates =
      build_metropolis(spectrum, InverseTemperature(1.0), AdjacencyGraph::complete(2));
  CHECK(residual(rates, closed_form_spectrum(spectrum, InverseTemperature(1.0))) <= 1e-14);
}

TEST_CASE("closed_form_spectrum: invariants over random instances") {
  std::mt19937 rng(201);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = test_util::random_size(rng);
    const auto spectrum = test_util::random_spectrum(rng, n);
    const InverseTemperature beta(test_util::random_beta(rng));
    const auto dec = closed_form_spectrum(spectrum, beta);
    const auto rates = build_metropolis(spectrum, beta, AdjacencyGraph::complete(n));
    const auto pi = boltzmann(spectrum, beta);

    const auto tails = tail_sums(pi, order_states(pi));
    CHECK(std::abs(tails.z[0] - 1.0) < 1e-12);
    for (std::size_t k = 1; k < n; ++k) CHECK(tails.z[k] < tails.z[k - 1]);
    CHECK(tails.z[n - 1] > 0.0);

    CHECK(residual(rates, dec) <= 1e-10);
    CHECK(dec.eigenvalues[0] == 0.0);
    for (std::size_t k = 1; k < n; ++k) {
      CHECK(dec.eigenvalues[k] < 0.0);
      CHECK(std::abs(dec.eigenvalues[k]) >= std::abs(dec.eigenvalues[k - 1]) - 1e-12);
      double sum = 0.0;
      for (double x : dec.eigenvectors[k]) sum += x;
      CHECK(std::abs(sum) < 1e-12);  // relaxation modes conserve probability
    }
    // v_1 is the stationary distribution
    double rv1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double y = 0.0;
      for (std::size_t j = 0; j < n; ++j) y += rates(i, j) * dec.eigenvectors[0][j];
      rv1 = std::max(rv1, std::abs(y));
      CHECK(std::abs(dec.eigenvectors[0][i] - pi.weights[i]) < 1e-12);
    }
    CHECK(rv1 < 1e-12);
  }
}

TEST_CASE("closed_form_spectrum: consistent under state relabeling") {
  std::mt19937 rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = test_util::random_size(rng, 2, 8);
    const auto spectrum = test_util::random_spectrum(rng, n);

    std::vector<std::size_t> sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma[i] = i;
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::vector<double> relabeled(n);
    for (std::size_t i = 0; i < n; ++i) relabeled[i] = spectrum[sigma[i]];

    const InverseTemperature beta(test_util::random_beta(rng));
    const auto a = closed_form_spectrum(spectrum, beta);
    const auto b = closed_form_spectrum(EnergySpectrum(relabeled), beta);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(a.eigenvalues[k] - b.eigenvalues[k]) < 1e-12);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(b.eigenvectors[k][i] - a.eigenvectors[k][sigma[i]]) < 1e-12);
    }
  }
}
