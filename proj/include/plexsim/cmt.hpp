#pragma once

// Temporal coupled-mode model of a bright mode (B), a dark mode (D) and a
// two-level emitter (E) sharing one radiation channel. Mode order in every
// vector and matrix is (B, D, E).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "plexsim/errors.hpp"
#include "plexsim/lu.hpp"
#include "plexsim/small_eigen.hpp"

namespace plexsim::cmt {

enum Mode : int { B = 0, D = 1, E = 2 };

struct CmtParams {
  double omega_B = 3.0;
  double omega_D = 3.4;
  double omega_E = 3.4;
  double gamma_B_rad = 0.05;
  double gamma_B_nonrad = 0.0;
  double gamma_D_rad = 0.0;
  double gamma_D_nonrad = 0.05;
  double gamma_E_rad = 0.0;
  double gamma_E_nonrad = 0.1;
  double g_B = 0.05;
  double g_D = 0.4;

  double gamma_B() const { return gamma_B_rad + gamma_B_nonrad; }
  double gamma_D() const { return gamma_D_rad + gamma_D_nonrad; }
  double gamma_E() const { return gamma_E_rad + gamma_E_nonrad; }

  /// Far-field (indirect) bright-emitter coupling rate.
  double gamma_ind() const { return std::sqrt(gamma_B_rad * gamma_E_rad / 4.0); }

  void validate() const {
    auto check = [](double v, const char* name, bool strictly_positive) {
      if (!std::isfinite(v)) throw InvalidInput(std::string("CmtParams: ") + name + " is not finite");
      if (strictly_positive ? !(v > 0.0) : (v < 0.0))
        throw InvalidInput(std::string("CmtParams: ") + name +
                           (strictly_positive ? " must be > 0" : " must be >= 0 (nonnegativity)"));
    };
    check(omega_B, "omega_B", true);
    check(omega_D, "omega_D", true);
    check(omega_E, "omega_E", true);
    check(gamma_B_rad, "gamma_B_rad", false);
    check(gamma_B_nonrad, "gamma_B_nonrad", false);
    check(gamma_D_rad, "gamma_D_rad", false);
    check(gamma_D_nonrad, "gamma_D_nonrad", false);
    check(gamma_E_rad, "gamma_E_rad", false);
    check(gamma_E_nonrad, "gamma_E_nonrad", false);
    check(g_B, "g_B", false);
    check(g_D, "g_D", false);
  }
};

inline ComplexMatrix3 build_cmt_hamiltonian(const CmtParams& p) {
  p.validate();
  const cplx i{0.0, 1.0};
  ComplexMatrix3 h = ComplexMatrix3::Zero();
  h(B, B) = p.omega_B - i * p.gamma_B() / 2.0;
  h(D, D) = p.omega_D - i * p.gamma_D() / 2.0;
  h(E, E) = p.omega_E - i * p.gamma_E() / 2.0;
  h(B, E) = h(E, B) = p.g_B - i * p.gamma_ind();
  h(D, E) = h(E, D) = p.g_D;
  return h;
}

/// kappa_j = sqrt(gamma_j^rad).
inline ComplexVector3 coupling_vector(const CmtParams& p) {
  p.validate();
  return ComplexVector3{std::sqrt(p.gamma_B_rad), std::sqrt(p.gamma_D_rad), std::sqrt(p.gamma_E_rad)};
}

struct Response {
  ComplexVector3 amplitudes;
  cplx s_minus;
};

/// Steady state under harmonic drive: solves i(H - omega) a = kappa s_plus
/// and returns s_minus = kappa^T a.
inline Response steady_state_response(const CmtParams& p, double omega, cplx s_plus = 1.0) {
  if (!std::isfinite(omega)) throw InvalidInput("steady_state_response: non-finite frequency");
  const ComplexMatrix3 h = build_cmt_hamiltonian(p);
  const ComplexVector3 kappa = coupling_vector(p);
  const cplx i{0.0, 1.0};
  const ComplexMatrix3 m = i * (h - omega * ComplexMatrix3::Identity());
  Eigen::PartialPivLU<ComplexMatrix3> lu(m);
  const double rcond = reciprocal_condition(lu);
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "steady_state_response: singular system at omega = " << omega << " (rcond " << rcond << ")";
    throw SingularSystem(os.str());
  }
  Response r;
  r.amplitudes = lu.solve(kappa * s_plus);
  r.s_minus = kappa.transpose() * r.amplitudes;
  return r;
}

struct Spectrum {
  std::vector<double> omega;
  std::vector<cplx> s_minus;
  std::vector<double> intensity;
};

inline void require_increasing(const std::vector<double>& grid, const char* who) {
  if (grid.empty()) throw InvalidInput(std::string(who) + ": empty grid");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k])) throw InvalidInput(std::string(who) + ": non-finite grid value");
    if (k > 0 && !(grid[k] > grid[k - 1]))
      throw InvalidInput(std::string(who) + ": grid must be strictly increasing");
  }
}

inline Spectrum scattering_spectrum(const CmtParams& p, const std::vector<double>& grid) {
  require_increasing(grid, "scattering_spectrum");
  Spectrum s;
  s.omega = grid;
  s.s_minus.reserve(grid.size());
  s.intensity.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    try {
      const cplx sm = steady_state_response(p, grid[k]).s_minus;
      s.s_minus.push_back(sm);
      s.intensity.push_back(std::norm(sm));
    } catch (const SingularSystem& e) {
      std::ostringstream os;
      os << "scattering_spectrum: grid point " << k << ": " << e.what();
      throw SingularSystem(os.str());
    }
  }
  return s;
}

inline EigenSet eigenmodes(const CmtParams& p) { return plexsim::eigenmodes(build_cmt_hamiltonian(p)); }

/// Uniform grid of `points` values spanning [start, stop].
inline std::vector<double> linspace(double start, double stop, std::size_t points) {
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = start;
    return g;
  }
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) g[k] = start + step * static_cast<double>(k);
  g.back() = stop;
  return g;
}

}  // namespace plexsim::cmt
