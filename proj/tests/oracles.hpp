#pragma once

// Independent reference computations the test suites check the library
// against. Everything here is written from first principles (combinatorics,
// direct summation, quadrature) and must not call the code paths under test.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "noon/fock.hpp"
#include "noon/rng.hpp"

namespace oracle {

using noon::cd;
using noon::MatC;
using noon::VecC;

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int j = 0; j < k; ++j) b *= static_cast<double>(n - j) / (j + 1);
  return b;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// <m',n'| U |m,n> for the Fock lift of a 2x2 mode matrix V acting as
/// a_i^dag -> sum_j V(j,i) a_j^dag, by direct binomial expansion of
/// (V00 c^dag + V10 d^dag)^m (V01 c^dag + V11 d^dag)^n |0,0>.
inline cd bs_element(const Eigen::Matrix2cd& v, int mp, int np, int m, int n) {
  if (mp + np != m + n) return 0.0;  // photon-number conserving
  cd acc = 0.0;
  for (int p = 0; p <= m; ++p) {
    const int q = mp - p;
    if (q < 0 || q > n) continue;
    acc += binom(m, p) * binom(n, q) * std::pow(v(0, 0), p) * std::pow(v(1, 0), m - p) *
           std::pow(v(0, 1), q) * std::pow(v(1, 1), n - q);
  }
  return acc * std::sqrt(factorial(mp) * factorial(np)) / std::sqrt(factorial(m) * factorial(n));
}

/// Binomial photon-loss map on a single-mode matrix: direct summation.
inline MatC lossy_single_mode(const MatC& rho, double eta) {
  const auto d = rho.rows();
  MatC out = MatC::Zero(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int k = 0; k < d; ++k) {
        if (m + k >= d || n + k >= d) continue;
        const double amp = std::sqrt(binom(m + k, k) * std::pow(eta, m) * std::pow(1 - eta, k)) *
                           std::sqrt(binom(n + k, k) * std::pow(eta, n) * std::pow(1 - eta, k));
        out(m, n) += amp * rho(m + k, n + k);
      }
  return out;
}

/// Partial trace of a two-mode matrix onto the first mode, direct summation.
inline MatC trace_out_second(const MatC& rho, int d) {
  MatC out = MatC::Zero(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int k = 0; k < d; ++k) out(m, n) += rho(m * d + k, n * d + k);
  return out;
}

/// Fidelity of two diagonal states: (sum_k sqrt(p_k q_k))^2.
inline double diagonal_fidelity(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::sqrt(p[i] * q[i]);
  return s * s;
}

/// Physicists' Hermite polynomial by recurrence.
inline double hermite(int m, double x) {
  double hp = 0.0, h = 1.0;
  for (int k = 1; k <= m; ++k) {
    const double hn = 2.0 * x * h - 2.0 * (k - 1) * hp;
    hp = h;
    h = hn;
  }
  return h;
}

/// Normalized oscillator wavefunction magnitude, no phase.
inline double psi_m(int m, double x) {
  return std::pow(M_PI, -0.25) * std::exp(-x * x / 2.0) * hermite(m, x) /
         std::sqrt(std::pow(2.0, m) * factorial(m));
}

/// Random normalized ket amplitudes for property tests (seeded, reproducible).
inline VecC random_ket(std::int64_t dim, std::uint64_t seed) {
  noon::Rng rng(seed);
  VecC v(dim);
  for (std::int64_t i = 0; i < dim; ++i)
    v[i] = cd(2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0);
  v /= v.norm();
  return v;
}

/// Random density matrix (mixture of a few random kets).
inline MatC random_density(std::int64_t dim, std::uint64_t seed, int rank = 3) {
  MatC rho = MatC::Zero(dim, dim);
  double wsum = 0.0;
  noon::Rng rng(seed);
  for (int r = 0; r < rank; ++r) {
    const double w = rng.uniform01() + 0.1;
    VecC v = random_ket(dim, seed + 1000 * (r + 1));
    rho += w * (v * v.adjoint());
    wsum += w;
  }
  return rho / wsum;
}

}  // namespace oracle
