#pragma once

// Independent numeric eigensolver for detailed-balanced rate matrices.
// A reversible generator R is similar to the symmetric matrix
// S = D^{-1/2} R D^{1/2} with D = diag(pi), so a plain cyclic Jacobi
// diagonalization of S yields the full real spectrum of R, with
// eigenvectors recovered as v = D^{1/2} u.  Used to cross-validate the
// closed form and to solve incomplete graphs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mpemba/errors.hpp"
#include "mpemba/markov.hpp"
#include "mpemba/spectral.hpp"

namespace mpemba {

namespace detail {

/// Cyclic Jacobi diagonalization of the symmetric matrix `a` (row-major,
/// modified in place), accumulating rotations into `v` (overwritten with the
/// eigenvector columns).  Returns false when the off-diagonal Frobenius mass
/// has not dropped below tol_rel * ||a||_F after max_sweeps sweeps.
inline bool jacobi_sweeps(std::vector<double>& a, std::vector<double>& v, std::size_t n,
                          double tol_rel = 1e-14, int max_sweeps = 100) {
  v.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  if (n < 2) return true;

  double fro = 0.0;
  for (double x : a) fro += x * x;
  const double threshold = tol_rel * std::sqrt(fro);

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= threshold) return true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        // tangent of the rotation angle; closed form degrades for huge tau
        double t;
        if (std::abs(tau) > 1e150) {
          t = 1.0 / (2.0 * tau);
        } else {
          t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        a[p * n + p] -= t * apq;
        a[q * n + q] += t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a[i * n + p];
          const double aiq = a[i * n + q];
          a[i * n + p] = c * aip - s * aiq;
          a[p * n + i] = a[i * n + p];
          a[i * n + q] = s * aip + c * aiq;
          a[q * n + i] = a[i * n + q];
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v[i * n + p];
          const double viq = v[i * n + q];
          v[i * n + p] = c * vip - s * viq;
          v[i * n + q] = s * vip + c * viq;
        }
      }
    }
  }
  return off_norm() <= threshold;
}

/// Flip the vector so its first significant entry is positive.
inline void sign_fix(std::vector<double>& v) {
  double amax = 0.0;
  for (double x : v) amax = std::max(amax, std::abs(x));
  if (amax == 0.0) return;
  for (double x : v) {
    if (std::abs(x) > 1e-12 * amax) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

}  // namespace detail

/// Symmetric similarity transform of a reversible generator,
/// S_ij = R_ij sqrt(pi_j / pi_i).  `scaling` holds d_i = sqrt(pi_i).
struct SymmetrizedGenerator {
  std::size_t n = 0;
  std::vector<double> entries;  // row-major n x n, symmetric
  std::vector<double> scaling;

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries[i * n + j];
  }
};

inline SymmetrizedGenerator symmetrize(const RateMatrix& rates,
                                       const BoltzmannDistribution& pi) {
  const std::size_t n = rates.size();
  if (pi.size() != n) throw std::invalid_argument("symmetrize: dimension mismatch");
  if (check_detailed_balance(rates, pi) > 1e-10)
    throw std::invalid_argument(
        "symmetrize: generator violates detailed balance; similarity transform invalid");

  SymmetrizedGenerator sym;
  sym.n = n;
  sym.scaling.resize(n);
  for (std::size_t i = 0; i < n; ++i) sym.scaling[i] = std::sqrt(pi.weights[i]);
  sym.entries.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      sym.entries[i * n + j] =
          i == j ? rates(i, i) : rates(i, j) * sym.scaling[j] / sym.scaling[i];

  double asym = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      asym = std::max(asym, std::abs(sym.entries[i * n + j] - sym.entries[j * n + i]));
      scale = std::max(scale, std::abs(sym.entries[i * n + j]));
    }
  if (asym > 1e-10 * std::max(1.0, scale))
    throw std::invalid_argument("symmetrize: symmetry residual above tolerance");
  return sym;
}

/// Full eigensystem of a symmetrized generator by cyclic Jacobi rotations.
/// Eigenvectors are back-transformed to the original basis, the stationary
/// vector (if a numerically zero eigenvalue exists) is rescaled to a
/// probability distribution, the rest are unit-norm with the first
/// significant entry positive.  Eigenvalues come out sorted by ascending
/// absolute value.  Throws SolverError if 100 sweeps do not converge.
inline SpectralDecomposition jacobi_eigen(const SymmetrizedGenerator& sym) {
  const std::size_t n = sym.n;
  if (n == 0 || sym.entries.size() != n * n || sym.scaling.size() != n)
    throw std::invalid_argument("jacobi_eigen: malformed symmetrized generator");

  // work on the symmetric average; asymmetry is bounded by the symmetrize check
  std::vector<double> a(n * n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = 0.5 * (sym.entries[i * n + j] + sym.entries[j * n + i]);
      scale = std::max(scale, std::abs(sym.entries[i * n + j]));
    }
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(sym.entries[i * n + j] - sym.entries[j * n + i]));
  if (asym > 1e-10 * std::max(1.0, scale))
    throw std::invalid_argument("jacobi_eigen: input is not symmetric within tolerance");

  std::vector<double> v;
  if (!detail::jacobi_sweeps(a, v, n))
    throw SolverError("jacobi_eigen: no convergence within 100 sweeps");

  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(a[x * n + x]) < std::abs(a[y * n + y]);
  });

  SpectralDecomposition dec;
  dec.source = SpectrumSource::numeric;
  dec.eigenvalues.resize(n);
  dec.eigenvectors.assign(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    dec.eigenvalues[k] = a[idx[k] * n + idx[k]];
    for (std::size_t i = 0; i < n; ++i)
      dec.eigenvectors[k][i] = sym.scaling[i] * v[i * n + idx[k]];
  }

  const double lam_max = std::abs(dec.eigenvalues[n - 1]);
  const bool has_zero_mode = std::abs(dec.eigenvalues[0]) <= 1e-12 * std::max(1.0, lam_max);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double>& vec = dec.eigenvectors[k];
    if (k == 0 && has_zero_mode) {
      dec.eigenvalues[0] = 0.0;  // structural zero of a probability-conserving generator
      double sum = 0.0;
      for (double x : vec) sum += x;
      if (sum != 0.0)
        for (double& x : vec) x /= sum;
      continue;
    }
    double norm = 0.0;
    for (double x : vec) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& x : vec) x /= norm;
    detail::sign_fix(vec);
  }
  return dec;
}

/// Result of comparing two spectral decompositions: worst eigenvalue gap,
/// worst eigenvector (or degenerate-subspace) alignment, and the pairing.
struct SpectrumMatchReport {
  double eigenvalue_max_abs_diff = 0.0;
  double eigenvector_min_alignment = 1.0;
  std::vector<std::pair<std::size_t, std::size_t>> pairing;
};

namespace detail {

// Modified Gram-Schmidt, run twice for orthogonality at working precision.
inline void orthonormalize(std::vector<std::vector<double>>& cols) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      for (std::size_t j = 0; j < k; ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < cols[k].size(); ++i) dot += cols[j][i] * cols[k][i];
        for (std::size_t i = 0; i < cols[k].size(); ++i) cols[k][i] -= dot * cols[j][i];
      }
      double norm = 0.0;
      for (double x : cols[k]) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 0.0)
        for (double& x : cols[k]) x /= norm;
    }
  }
}

// Cosine of the largest principal angle between the spans of two equally
// sized column sets: the smallest singular value of Qa^T Qb.
inline double subspace_alignment(std::vector<std::vector<double>> a,
                                 std::vector<std::vector<double>> b) {
  orthonormalize(a);
  orthonormalize(b);
  const std::size_t k = a.size();
  const std::size_t n = a.empty() ? 0 : a[0].size();
  std::vector<double> m(k * k, 0.0);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t i = 0; i < n; ++i) m[r * k + c] += a[r][i] * b[c][i];
  // sigma_min(M)^2 = smallest eigenvalue of M^T M
  std::vector<double> g(k * k, 0.0);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t l = 0; l < k; ++l) s += m[l * k + r] * m[l * k + c];
      g[r * k + c] = s;
    }
  std::vector<double> rot;
  jacobi_sweeps(g, rot, k);
  double lam_min = g[0];
  for (std::size_t i = 1; i < k; ++i) lam_min = std::min(lam_min, g[i * k + i]);
  return std::clamp(std::sqrt(std::max(0.0, lam_min)), 0.0, 1.0);
}

}  // namespace detail

/// Pair the eigenvalues of two decompositions greedily by value and compare
/// eigenvector directions; eigenvalues closer than degeneracy_tol are grouped
/// and their spans compared through principal angles.
inline SpectrumMatchReport match_spectra(const SpectralDecomposition& a,
                                         const SpectralDecomposition& b,
                                         double degeneracy_tol) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("match_spectra: dimension mismatch");

  SpectrumMatchReport report;
  std::vector<char> used(n, 0);
  std::vector<std::size_t> pair_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = n;
    double best_gap = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double gap = std::abs(a.eigenvalues[i] - b.eigenvalues[j]);
      if (best == n || gap < best_gap) {
        best = j;
        best_gap = gap;
      }
    }
    used[best] = 1;
    pair_of[i] = best;
    report.pairing.emplace_back(i, best);
    report.eigenvalue_max_abs_diff = std::max(report.eigenvalue_max_abs_diff, best_gap);
  }

  double min_alignment = 1.0;
  std::size_t group_start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool extend =
        i < n && std::abs(a.eigenvalues[i] - a.eigenvalues[i - 1]) <= degeneracy_tol;
    if (extend) continue;
    std::vector<std::vector<double>> va, vb;
    for (std::size_t k = group_start; k < i; ++k) {
      va.push_back(a.eigenvectors[k]);
      vb.push_back(b.eigenvectors[pair_of[k]]);
    }
    min_alignment = std::min(min_alignment, detail::subspace_alignment(va, vb));
    group_start = i;
  }
  report.eigenvector_min_alignment = min_alignment;
  return report;
}

/// match_spectra with the default grouping threshold 1e-7 * max |lambda|.
inline SpectrumMatchReport match_spectra(const SpectralDecomposition& a,
                                         const SpectralDecomposition& b) {
  double lam_max = 0.0;
  for (double x : a.eigenvalues) lam_max = std::max(lam_max, std::abs(x));
  return match_spectra(a, b, 1e-7 * lam_max);
}

}  // namespace mpemba
