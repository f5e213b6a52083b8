#pragma once

// Shared helpers for the test suites: seeded generators for property tests
// and a few independent reference computations.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <complex>
#include <random>
#include <vector>

#include "plexsim/cmt.hpp"
#include "plexsim/quantum.hpp"

namespace plexsim::oracle {

/// Deterministic source of random parameter draws.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::complex<double> complex(double scale) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

  Eigen::Matrix3cd complex_symmetric(double scale) {
    Eigen::Matrix3cd m;
    for (int r = 0; r < 3; ++r)
      for (int c = r; c < 3; ++c) m(r, c) = m(c, r) = complex(scale);
    return m;
  }

  /// Physical three-mode parameters in the range the figures explore.
  cmt::CmtParams cmt_params() {
    cmt::CmtParams p;
    p.omega_B = uniform(2.5, 3.5);
    p.omega_D = uniform(2.5, 4.0);
    p.omega_E = uniform(2.5, 4.0);
    p.gamma_B_rad = uniform(0.0, 0.2);
    p.gamma_B_nonrad = uniform(0.0, 0.1);
    p.gamma_D_rad = uniform(0.0, 0.05);
    p.gamma_D_nonrad = uniform(0.01, 0.2);
    p.gamma_E_rad = uniform(0.0, 0.05);
    p.gamma_E_nonrad = uniform(0.01, 0.2);
    p.g_B = uniform(0.0, 0.3);
    p.g_D = uniform(0.0, 1.0);
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

/// Inverse of a 3x3 through the adjugate, independent of any factorization.
inline Eigen::Matrix3cd adjugate_inverse(const Eigen::Matrix3cd& m) {
  Eigen::Matrix3cd adj;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
      adj(r, c) = m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1);
    }
  const std::complex<double> det = m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
  return adj / det;
}

/// Eigenvalues from a general QR-based solver, sorted like EigenSet.
inline std::array<std::complex<double>, 3> reference_eigenvalues(const Eigen::Matrix3cd& h) {
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(h, false);
  std::array<std::complex<double>, 3> v{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return v;
}

/// Roots of z^3 + a z^2 + b z + c by Durand-Kerner iteration; used as an
/// oracle that shares nothing with the Cardano path.
inline std::array<std::complex<double>, 3> durand_kerner(std::complex<double> a, std::complex<double> b,
                                                          std::complex<double> c) {
  using C = std::complex<double>;
  auto f = [&](C z) { return ((z + a) * z + b) * z + c; };
  const double r = 1.0 + std::max({std::abs(a), std::abs(b), std::abs(c)});
  std::array<C, 3> z{C(0.4, 0.9) * r, C(0.4, 0.9) * C(0.4, 0.9) * r, C(0.4, 0.9) * C(0.4, 0.9) * C(0.4, 0.9) * r};
  for (int it = 0; it < 500; ++it) {
    double change = 0.0;
    for (int k = 0; k < 3; ++k) {
      C den = 1.0;
      for (int j = 0; j < 3; ++j)
        if (j != k) den *= z[k] - z[j];
      const C step = f(z[k]) / den;
      z[k] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * r) break;
  }
  std::sort(z.begin(), z.end(), [](auto x, auto y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); });
  return z;
}

/// Strict interior local maxima of a sampled curve, without refinement.
inline std::vector<double> raw_maxima(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < y.size(); ++k)
    if (y[k] > y[k - 1] && y[k] > y[k + 1]) out.push_back(x[k]);
  return out;
}

/// Hand-built three-mode system with g_D swept 0 -> 1 eV and g_B = 0.3 g_D,
/// emitter resonant with the dark mode, ℰ = 1e-4 eV.
inline quantum::QuantumParams swept_system(double g_D) {
  quantum::QuantumParams q;
  q.omega_E = 3.5;
  q.omega_D = 3.5;
  q.omega_B = 3.0;
  q.gamma_B = 0.2;
  q.gamma_D = 0.2;
  q.gamma_E = 0.1;
  q.g_D = g_D;
  q.g_B = 0.3 * g_D;
  q.with_drive_amplitude(1e-4);
  return q;
}

}  // namespace plexsim::oracle
