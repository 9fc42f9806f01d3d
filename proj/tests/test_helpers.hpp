#pragma once

#include <random>
#include <vector>

#include "mpemba/mpemba.hpp"

namespace test_util {

inline mpemba::EnergySpectrum random_spectrum(std::mt19937& rng, std::size_t n,
                                              double lo = 0.0, double hi = 5.0) {
  std::uniform_real_distribution<double> energy(lo, hi);
  std::vector<double> levels(n);
  for (double& e : levels) e = energy(rng);
  return mpemba::EnergySpectrum(levels);
}

inline std::size_t random_size(std::mt19937& rng, std::size_t lo = 2, std::size_t hi = 12) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double random_beta(std::mt19937& rng, double lo = 0.1, double hi = 3.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// |cos angle| between two vectors regardless of scale and sign.
inline double direction_alignment(const std::vector<double>& a, const std::vector<double>& b) {
  const double num = std::abs(dot(a, b));
  return num / std::sqrt(dot(a, a) * dot(b, b));
}

/// Sign changes of a sample sequence, ignoring exact zeros.
inline std::size_t sign_change_count(const std::vector<double>& values) {
  std::size_t count = 0;
  int prev = 0;
  for (double v : values) {
    const int s = v > 0.0 ? 1 : v < 0.0 ? -1 : 0;
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

}  // namespace test_util
