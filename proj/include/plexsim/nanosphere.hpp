#pragma once

// Quasistatic model of a Drude metal sphere (radius R) with a radially
// oriented point dipole emitter a gap h above its surface. Every multipole
// order n >= 1 is a Lorentzian plasmon mode; n = 1 is the bright (dipolar)
// mode and the quasi-degenerate n >= 2 modes are lumped into one dark
// pseudomode.
//
// Units: frequencies and couplings in eV, lengths in nm, dipoles in Debye.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "plexsim/errors.hpp"
#include "plexsim/units.hpp"

namespace plexsim::nanosphere {

using cplx = std::complex<double>;

struct DrudeMetal {
  double eps_inf = 1.0;
  double omega_p = 1.0;
  double gamma_p = 0.0;

  void validate() const {
    if (!std::isfinite(eps_inf) || eps_inf < 1.0) throw InvalidInput("DrudeMetal: eps_inf must be >= 1");
    if (!std::isfinite(omega_p) || !(omega_p > 0.0)) throw InvalidInput("DrudeMetal: omega_p must be > 0");
    if (!std::isfinite(gamma_p) || gamma_p < 0.0) throw InvalidInput("DrudeMetal: gamma_p must be >= 0");
  }
};

/// Drude surrogate whose dipole resonance sits at `omega_dipole` and whose
/// high-order multipoles accumulate at `omega_limit`, both in a medium of
/// permittivity `eps_b`. Solves
///   omega_p² = omega_dipole² (eps_inf + 2 eps_b) = omega_limit² (eps_inf + eps_b).
inline DrudeMetal calibrated_drude(double omega_dipole, double omega_limit, double eps_b, double gamma_p) {
  if (!(omega_limit > omega_dipole && omega_dipole > 0.0))
    throw InvalidInput("calibrated_drude: need 0 < omega_dipole < omega_limit");
  const double r2 = (omega_limit / omega_dipole) * (omega_limit / omega_dipole);
  DrudeMetal m;
  m.eps_inf = eps_b * (2.0 - r2) / (r2 - 1.0);
  m.omega_p = omega_limit * std::sqrt(m.eps_inf + eps_b);
  m.gamma_p = gamma_p;
  m.validate();
  return m;
}

/// Silver surrogate: dipole resonance 3.0 eV, multipole limit 3.4 eV in vacuum
/// (eps_inf ≈ 2.516, omega_p ≈ 6.375 eV).
inline DrudeMetal calibrated_silver(double gamma_p = 0.1) { return calibrated_drude(3.0, 3.4, 1.0, gamma_p); }

inline cplx drude_epsilon(const DrudeMetal& m, double omega) {
  if (!(omega > 0.0)) throw InvalidInput("drude_epsilon: omega must be > 0");
  return m.eps_inf - m.omega_p * m.omega_p / (omega * cplx{omega, m.gamma_p});
}

/// d Re ε / dω = 2 ω_p² ω / (ω² + γ_p²)².
inline double drude_re_epsilon_slope(const DrudeMetal& m, double omega) {
  const double s = omega * omega + m.gamma_p * m.gamma_p;
  return 2.0 * m.omega_p * m.omega_p * omega / (s * s);
}

/// Lossless root of n ε_m + (n + 1) ε_b = 0.
inline double mode_frequency(const DrudeMetal& m, double eps_b, int n) {
  if (n < 1) throw InvalidInput("mode_frequency: n must be >= 1");
  const double nd = static_cast<double>(n);
  return m.omega_p * std::sqrt(nd / (nd * m.eps_inf + (nd + 1.0) * eps_b));
}

inline double mode_frequency_limit(const DrudeMetal& m, double eps_b) {
  return m.omega_p / std::sqrt(m.eps_inf + eps_b);
}

/// Quasistatic multipolar polarizability R^{2n+1} n(ε_m − ε_b)/(n ε_m + (n+1) ε_b), in nm^{2n+1}.
inline cplx multipole_polarizability(const DrudeMetal& m, double eps_b, double R, int n, double omega) {
  if (n < 1) throw InvalidInput("multipole_polarizability: n must be >= 1");
  if (!(R > 0.0)) throw InvalidInput("multipole_polarizability: R must be > 0");
  const cplx eps = drude_epsilon(m, omega);
  const double nd = static_cast<double>(n);
  const cplx denom = nd * eps + (nd + 1.0) * eps_b;
  if (std::abs(denom) <= 1e-13 * (nd * std::abs(eps) + (nd + 1.0) * eps_b))
    throw PoleError("multipole_polarizability: evaluated on a lossless pole");
  return std::pow(R, 2.0 * nd + 1.0) * nd * (eps - eps_b) / denom;
}

struct SphereSystem {
  double R = 5.0;        // nm
  double h = 1.0;        // nm
  double eps_b = 1.0;
  DrudeMetal metal = calibrated_silver();
  double mu_E = 100.0;   // D
  double omega_E = 3.4;  // eV
  int n_max = 400;

  double centre_distance() const { return R + h; }

  void validate() const {
    if (!std::isfinite(R) || !(R > 0.0)) throw InvalidInput("SphereSystem: R must be > 0");
    if (!std::isfinite(h) || !(h > 0.0)) throw InvalidInput("SphereSystem: h must be > 0");
    if (!std::isfinite(eps_b) || eps_b < 1.0) throw InvalidInput("SphereSystem: eps_b must be >= 1");
    if (!std::isfinite(mu_E) || mu_E < 0.0) throw InvalidInput("SphereSystem: mu_E must be >= 0");
    if (!std::isfinite(omega_E) || !(omega_E > 0.0)) throw InvalidInput("SphereSystem: omega_E must be > 0");
    if (n_max < 2) throw InvalidInput("SphereSystem: n_max must be >= 2");
    metal.validate();
  }
};

/// Emitter coupling to multipole n, from the Drude pole residue of α_n:
///   g_n² = C μ² (n+1)²/d^{2n+4} · (2n+1) R^{2n+1} ω_n³ / (2n ω_p²) / ε_b
/// with C = (1 D)²/(4πε₀ nm³). Evaluated in log space so that (R/d)^{2n+1}
/// cannot overflow or underflow prematurely.
inline double coupling_strength(const SphereSystem& s, int n) {
  if (n < 1) throw InvalidInput("coupling_strength: n must be >= 1");
  if (s.mu_E == 0.0) return 0.0;
  const double nd = static_cast<double>(n);
  const double d = s.centre_distance();
  const double wn = mode_frequency(s.metal, s.eps_b, n);
  const double log_g2 = std::log(units::dipole_coupling_unit) + 2.0 * std::log(s.mu_E) +
                        2.0 * std::log(nd + 1.0) - 3.0 * std::log(d) + (2.0 * nd + 1.0) * std::log(s.R / d) +
                        std::log(2.0 * nd + 1.0) + 3.0 * std::log(wn) - std::log(2.0 * nd) -
                        2.0 * std::log(s.metal.omega_p) - std::log(s.eps_b);
  return std::exp(0.5 * log_g2);
}

struct PlasmonMode {
  int n;
  double omega;
  double gamma;
  double g;
};

using ModeLadder = std::vector<PlasmonMode>;

inline ModeLadder mode_ladder(const SphereSystem& s) {
  s.validate();
  ModeLadder ladder;
  ladder.reserve(static_cast<std::size_t>(s.n_max));
  for (int n = 1; n <= s.n_max; ++n)
    ladder.push_back({n, mode_frequency(s.metal, s.eps_b, n), s.metal.gamma_p, coupling_strength(s, n)});
  return ladder;
}

struct SpectralDensity {
  double total = 0.0;
  double dipole = 0.0;
  double dark = 0.0;
};

inline double lorentzian_term(const PlasmonMode& m, double omega) {
  const double dw = omega - m.omega;
  return m.g * m.g / (2.0 * units::pi) * m.gamma / (dw * dw + 0.25 * m.gamma * m.gamma);
}

/// J(ω) = Σ_n (g_n²/2π) γ_n / ((ω − ω_n)² + γ_n²/4); each term integrates to g_n².
inline SpectralDensity spectral_density(const ModeLadder& ladder, double omega) {
  SpectralDensity j;
  for (const auto& m : ladder) {
    const double v = lorentzian_term(m, omega);
    (m.n == 1 ? j.dipole : j.dark) += v;
  }
  j.total = j.dipole + j.dark;
  return j;
}

inline SpectralDensity spectral_density(const SphereSystem& s, double omega) {
  return spectral_density(mode_ladder(s), omega);
}

/// Radiative decay rate (as an energy, ħΓ in eV) of a dipole μ [D] at ω [eV] in vacuum:
/// Γ = ω³ μ² / (3π ε₀ ħ c³).
inline double emitter_radiative_decay(double mu, double omega) {
  if (mu < 0.0 || !(omega > 0.0)) throw InvalidInput("emitter_radiative_decay: need mu >= 0, omega > 0");
  const double w = units::ev_to_rad_per_s(omega);
  const double p = mu * units::debye_si;
  const double rate = w * w * w * p * p / (3.0 * units::pi * units::eps0_si * units::hbar_si * std::pow(units::c_si, 3));
  return units::rad_per_s_to_ev(rate);
}

/// Purcell-normalized spectral density 2π J(ω) / γ_rad(μ_E, ω): the
/// plasmon-assisted decay rate in units of the emitter's vacuum rate.
inline double purcell_factor(const SphereSystem& s, double j_total, double omega) {
  const double free = emitter_radiative_decay(s.mu_E, omega);
  if (!(free > 0.0)) return 0.0;
  return 2.0 * units::pi * j_total / free;
}

struct Pseudomode {
  double g_D = 0.0;
  double omega_D = 0.0;
  double gamma_D = 0.0;
  /// n_max term exceeds 1e-6 of the dark density at the fitted peak.
  bool truncation_warning = false;
};

namespace detail {

template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Root of f - level on [lo, hi], assuming a sign change.
template <class F>
double bisect_level(F&& f, double level, double lo, double hi, double tol) {
  double flo = f(lo) - level;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - level;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

struct PseudomodeFitOptions {
  int grid_points = 4001;
  double polish_tol = 1e-9;  // eV
};

/// Effective dark mode: g_D = (Σ_{n≥2} g_n²)^{1/2}; ω_D and γ_D are the peak
/// position and full width at half maximum of the n ≥ 2 spectral density.
inline Pseudomode aggregate_pseudomode(const SphereSystem& s, const PseudomodeFitOptions& opt = {}) {
  const ModeLadder ladder = mode_ladder(s);
  const std::span<const PlasmonMode> dark(ladder.begin() + 1, ladder.end());

  Pseudomode p;
  double sum = 0.0;
  for (const auto& m : dark) sum += m.g * m.g;
  p.g_D = std::sqrt(sum);

  auto density = [&](double w) {
    double v = 0.0;
    for (const auto& m : dark) v += lorentzian_term(m, w);
    return v;
  };

  const double lo = dark.front().omega - 1.0;
  const double hi = mode_frequency_limit(s.metal, s.eps_b) + 1.0;
  const int npts = std::max(opt.grid_points, 11);
  const double step = (hi - lo) / (npts - 1);
  std::vector<double> values(static_cast<std::size_t>(npts));
  for (int k = 0; k < npts; ++k) values[k] = density(lo + step * k);
  const auto it = std::max_element(values.begin(), values.end());
  const int k_max = static_cast<int>(it - values.begin());
  if (k_max == 0 || k_max == npts - 1 || !(*it > 0.0))
    throw FitFailure("aggregate_pseudomode: dark density has no interior maximum on the search window");

  p.omega_D = detail::golden_max(density, lo + step * (k_max - 1), lo + step * (k_max + 1), opt.polish_tol);
  const double peak = density(p.omega_D);
  const double half = 0.5 * peak;

  int left = k_max;
  while (left > 0 && values[left] > half) --left;
  int right = k_max;
  while (right < npts - 1 && values[right] > half) ++right;
  if (values[left] > half || values[right] > half)
    throw FitFailure("aggregate_pseudomode: half maximum not reached inside the search window");
  const double w_lo = detail::bisect_level(density, half, lo + step * left, p.omega_D, opt.polish_tol);
  const double w_hi = detail::bisect_level(density, half, p.omega_D, lo + step * right, opt.polish_tol);
  p.gamma_D = w_hi - w_lo;

  p.truncation_warning = lorentzian_term(dark.back(), p.omega_D) > 1e-6 * peak;
  return p;
}

/// Radiative rate of the dipolar (bright) plasmon:
/// γ_B^r = 4 ε_b^{3/2} (ω_B R / c)³ / (∂ Re ε_m / ∂ω)|_{ω_B}.
inline double bright_radiative_decay(const DrudeMetal& m, double eps_b, double R, double omega_B) {
  if (!(R > 0.0) || !(omega_B > 0.0)) throw InvalidInput("bright_radiative_decay: need R > 0, omega_B > 0");
  const double slope = drude_re_epsilon_slope(m, omega_B);
  if (!(slope > 0.0)) throw DispersionError("bright_radiative_decay: d Re(eps)/d omega <= 0 at omega_B");
  const double x = omega_B * R / units::hbar_c;
  return 4.0 * std::pow(eps_b, 1.5) * x * x * x / slope;
}

/// Inverse of the dipole radiative rate in a medium ε_b:
/// μ_B = sqrt(3π ħ ε₀ ε_b c³ γ / ω³), returned in Debye.
inline double bright_dipole_moment(double gamma_rad, double omega_B, double eps_b = 1.0) {
  if (gamma_rad < 0.0 || !(omega_B > 0.0) || !(eps_b > 0.0))
    throw InvalidInput("bright_dipole_moment: need gamma >= 0, omega > 0, eps_b > 0");
  const double g = units::ev_to_rad_per_s(gamma_rad);
  const double w = units::ev_to_rad_per_s(omega_B);
  const double p2 = 3.0 * units::pi * units::hbar_si * units::eps0_si * eps_b * std::pow(units::c_si, 3) * g / (w * w * w);
  return std::sqrt(p2) / units::debye_si;
}

/// σ_ext = ω_E μ² / (ħ c ε₀ γ_E), returned in nm².
inline double extinction_cross_section(double mu, double omega_E, double gamma_E) {
  if (mu < 0.0 || !(omega_E > 0.0) || !(gamma_E > 0.0))
    throw InvalidInput("extinction_cross_section: need mu >= 0, omega > 0, gamma > 0");
  const double p = mu * units::debye_si;
  const double sigma = (omega_E / gamma_E) * p * p / (units::hbar_si * units::c_si * units::eps0_si);
  return sigma / (units::nm_si * units::nm_si);
}

/// Transition dipole (Debye) that produces extinction cross-section `sigma_ext` [nm²].
inline double dipole_from_extinction(double sigma_ext, double omega_E, double gamma_E) {
  if (sigma_ext < 0.0 || !(omega_E > 0.0) || !(gamma_E > 0.0))
    throw InvalidInput("dipole_from_extinction: need sigma >= 0, omega > 0, gamma > 0");
  const double sigma = sigma_ext * units::nm_si * units::nm_si;
  const double p2 = sigma * units::hbar_si * units::c_si * units::eps0_si * gamma_E / omega_E;
  return std::sqrt(p2) / units::debye_si;
}

struct EffectiveParams {
  double g_B = 0.0;
  double g_D = 0.0;
  double omega_B = 0.0;
  double omega_D = 0.0;
  double gamma_B = 0.0;  // Drude + radiative
  double gamma_D = 0.0;
  double mu_B = 0.0;     // D
  double gamma_E_rad = 0.0;
  double gamma_B_rad = 0.0;
  bool truncation_warning = false;
};

inline EffectiveParams effective_parameters(const SphereSystem& s, const PseudomodeFitOptions& opt = {}) {
  s.validate();
  EffectiveParams e;
  e.omega_B = mode_frequency(s.metal, s.eps_b, 1);
  e.g_B = coupling_strength(s, 1);
  e.gamma_B_rad = bright_radiative_decay(s.metal, s.eps_b, s.R, e.omega_B);
  e.gamma_B = s.metal.gamma_p + e.gamma_B_rad;
  const Pseudomode pm = aggregate_pseudomode(s, opt);
  e.g_D = pm.g_D;
  e.omega_D = pm.omega_D;
  e.gamma_D = pm.gamma_D;
  e.truncation_warning = pm.truncation_warning;
  e.mu_B = bright_dipole_moment(e.gamma_B_rad, e.omega_B, s.eps_b);
  e.gamma_E_rad = emitter_radiative_decay(s.mu_E, s.omega_E);
  return e;
}

}  // namespace plexsim::nanosphere
