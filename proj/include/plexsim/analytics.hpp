#pragma once

// Closed-form polariton algebra of the lossless emitter / dark / bright
// system written in the frame rotating at the emitter frequency, basis
// (E, D, B):
//
//        | 0     g_D   g_B  |
//    H = | g_D   Δ_D   0    |     Δ_j = ω_j − ω_E
//        | g_B   0     Δ_B  |
//
// The (E, D) block is diagonalized exactly by a real rotation with half
// angle θ/2; the bright mode then sees the two dark polaritons through
// g_B cos(θ/2) and g_B sin(θ/2).
//
// Detuning conventions: the emitter-relative optimum δ_E^opt = ω_E − ω_B is
// positive for ω_D > ω_B, the bright-relative Δ_B^opt = ω_B − ω_E carries the
// opposite sign, so Δ_B^opt = −δ_E^opt.

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "plexsim/errors.hpp"

namespace plexsim::analytics {

struct DarkBlockResult {
  double delta_minus = 0.0;
  double delta_plus = 0.0;
  double upsilon = 0.0;
  double cos_half = 1.0;
  double sin_half = 0.0;
};

inline void require_nonnegative(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) throw InvalidInput(std::string(name) + " must be finite and >= 0");
}

inline DarkBlockResult dark_block_eigenvalues(double delta_D, double g_D) {
  require_nonnegative(g_D, "g_D");
  if (!std::isfinite(delta_D)) throw InvalidInput("delta_D must be finite");
  DarkBlockResult r;
  r.upsilon = std::hypot(delta_D, 2.0 * g_D);
  if (r.upsilon == 0.0) return r;  // fully degenerate: any rotation diagonalizes

  // δ± = (Δ_D ± Υ)/2, evaluated without cancellation in the smaller root.
  if (delta_D >= 0.0) {
    r.delta_plus = 0.5 * (delta_D + r.upsilon);
    r.delta_minus = -g_D * g_D / r.delta_plus;
  } else {
    r.delta_minus = 0.5 * (delta_D - r.upsilon);
    r.delta_plus = -g_D * g_D / r.delta_minus;
  }

  // cos²(θ/2) = (1 + Δ_D/Υ)/2 and sin(θ/2)cos(θ/2) = g_D/Υ.
  const double c = delta_D / r.upsilon;
  if (c >= 0.0) {
    r.cos_half = std::sqrt(0.5 * (1.0 + c));
    r.sin_half = g_D / (r.upsilon * r.cos_half);
  } else {
    r.sin_half = std::sqrt(0.5 * (1.0 - c));
    r.cos_half = g_D / (r.upsilon * r.sin_half);
  }
  return r;
}

/// The lossless 3x3 in the (E, D, B) basis above.
inline Eigen::Matrix3d lossless_hamiltonian(double g_B, double g_D, double delta_D, double delta_B) {
  Eigen::Matrix3d h;
  h << 0.0, g_D, g_B,  //
      g_D, delta_D, 0.0,  //
      g_B, 0.0, delta_B;
  return h;
}

/// Rotation T3 acting on the (E, D) block; columns are |φ−>, |φ+>, |B>.
inline Eigen::Matrix3d block_rotation(const DarkBlockResult& r) {
  Eigen::Matrix3d t;
  t << r.cos_half, r.sin_half, 0.0,  //
      -r.sin_half, r.cos_half, 0.0,  //
      0.0, 0.0, 1.0;
  return t;
}

/// Hamiltonian in the (φ−, φ+, B) basis.
inline Eigen::Matrix3d partial_diagonalize(double g_B, double g_D, double delta_D, double delta_B) {
  require_nonnegative(g_B, "g_B");
  if (!std::isfinite(delta_B)) throw InvalidInput("delta_B must be finite");
  const DarkBlockResult r = dark_block_eigenvalues(delta_D, g_D);
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h(0, 0) = r.delta_minus;
  h(1, 1) = r.delta_plus;
  h(2, 2) = delta_B;
  h(0, 2) = h(2, 0) = g_B * r.cos_half;
  h(1, 2) = h(2, 1) = g_B * r.sin_half;
  return h;
}

/// Bright vacuum Rabi splitting √2 g_B sqrt(1 + Δ_D / sqrt(4 g_D² + Δ_D²)),
/// Δ_D = ω_D − ω_E.
inline double bright_rabi_splitting(double g_B, double g_D, double omega_D, double omega_E) {
  require_nonnegative(g_B, "g_B");
  require_nonnegative(g_D, "g_D");
  const double detuning = omega_D - omega_E;
  if (g_D == 0.0 && detuning == 0.0)
    throw UndefinedLimit("bright_rabi_splitting: g_D = 0 with omega_D = omega_E is 0/0");
  return 2.0 * g_B * dark_block_eigenvalues(detuning, g_D).cos_half;
}

/// Emitter detuning δ_E^opt = g_D² / (ω_D − ω_B) that puts the lower dark
/// polariton on resonance with the bright mode.
inline double optimal_detuning(double g_D, double omega_B, double omega_D) {
  require_nonnegative(g_D, "g_D");
  const double gap = omega_D - omega_B;
  if (gap == 0.0) throw UndefinedLimit("optimal_detuning: omega_D == omega_B");
  return g_D * g_D / gap;
}

/// Bright-relative form Δ_B^opt = ω_B − ω_E^opt = −g_D² / (ω_D − ω_B).
inline double optimal_bright_detuning(double g_D, double omega_B, double omega_D) {
  return -optimal_detuning(g_D, omega_B, omega_D);
}

}  // namespace plexsim::analytics
