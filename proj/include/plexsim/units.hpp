#pragma once

// Physical constants and unit conversions. Internally hbar = 1 and every
// frequency, rate and coupling is carried in eV.

namespace plexsim::units {

inline constexpr double pi = 3.14159265358979323846;

// CODATA 2018 (exact where SI defines them).
inline constexpr double hbar_si = 1.054571817e-34;        // J s
inline constexpr double c_si = 299792458.0;               // m / s
inline constexpr double eps0_si = 8.8541878128e-12;       // F / m
inline constexpr double electron_volt = 1.602176634e-19;  // J
inline constexpr double debye_si = 3.33564095198e-30;     // C m
inline constexpr double nm_si = 1e-9;                     // m

/// hbar * c in eV nm.
inline constexpr double hbar_c = 197.327;

/// (1 D)^2 / (4 pi eps0 (1 nm)^3) expressed in eV.
inline constexpr double dipole_coupling_unit =
    debye_si * debye_si / (4.0 * pi * eps0_si * nm_si * nm_si * nm_si) / electron_volt;

inline constexpr double ev_to_rad_per_s(double ev) { return ev * electron_volt / hbar_si; }
inline constexpr double rad_per_s_to_ev(double w) { return w * hbar_si / electron_volt; }

}  // namespace plexsim::units
