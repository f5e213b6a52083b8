#pragma once

// Driven emitter / bright mode / dark mode system in a truncated Fock basis
// |a, b, c> (a ∈ {g, e}, b = bright photons 0..N_B, c = dark photons 0..N_D),
// written in the frame rotating at the drive frequency ω_L:
//
//   H  = Δ_E σ+σ- + Δ_B a_B†a_B + Δ_D a_D†a_D
//        + g_B (a_B†σ- + a_B σ+) + g_D (a_D†σ- + a_D σ+)
//        + (ℰ_E/2)(σ- + σ+) + (ℰ_B/2)(a_B + a_B†) + (ℰ_D/2)(a_D + a_D†)
//   H~ = H − i(γ_E/2)σ+σ- − i(γ_B/2)a_B†a_B − i(γ_D/2)a_D†a_D
//
// with Δ_j = ω_j − ω_L and ℰ_j = −μ_j E_L. Scattered light is
// a_s = μ_E σ- + μ_B a_B.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "plexsim/cmt.hpp"
#include "plexsim/errors.hpp"

namespace plexsim::quantum {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct BasisState {
  int a;  // 0 = ground, 1 = excited
  int b;
  int c;
  friend bool operator==(const BasisState&, const BasisState&) = default;
};

class HilbertSpace {
 public:
  HilbertSpace(int n_B = 2, int n_D = 2) : n_B_(n_B), n_D_(n_D) {
    if (n_B < 1 || n_D < 1) throw InvalidInput("HilbertSpace: truncations must be >= 1");
  }

  int n_B() const { return n_B_; }
  int n_D() const { return n_D_; }
  int dim() const { return 2 * (n_B_ + 1) * (n_D_ + 1); }

  /// a-major, then b, then c.
  int index(int a, int b, int c) const { return (a * (n_B_ + 1) + b) * (n_D_ + 1) + c; }
  int index(const BasisState& s) const { return index(s.a, s.b, s.c); }

  BasisState unindex(int k) const {
    const int c = k % (n_D_ + 1);
    const int rest = k / (n_D_ + 1);
    return {rest / (n_B_ + 1), rest % (n_B_ + 1), c};
  }

  int ground() const { return index(0, 0, 0); }

  Matrix sigma_minus() const {
    Matrix m = Matrix::Zero(dim(), dim());
    for (int b = 0; b <= n_B_; ++b)
      for (int c = 0; c <= n_D_; ++c) m(index(0, b, c), index(1, b, c)) = 1.0;
    return m;
  }

  Matrix a_bright() const {
    Matrix m = Matrix::Zero(dim(), dim());
    for (int a = 0; a < 2; ++a)
      for (int b = 1; b <= n_B_; ++b)
        for (int c = 0; c <= n_D_; ++c) m(index(a, b - 1, c), index(a, b, c)) = std::sqrt(double(b));
    return m;
  }

  Matrix a_dark() const {
    Matrix m = Matrix::Zero(dim(), dim());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b <= n_B_; ++b)
        for (int c = 1; c <= n_D_; ++c) m(index(a, b, c - 1), index(a, b, c)) = std::sqrt(double(c));
    return m;
  }

 private:
  int n_B_;
  int n_D_;
};

inline HilbertSpace build_space(int n_B, int n_D) { return HilbertSpace(n_B, n_D); }

struct QuantumParams {
  double omega_E = 3.4;
  double omega_B = 3.0;
  double omega_D = 3.4;
  double gamma_E = 0.1;
  double gamma_B = 0.05;
  double gamma_D = 0.05;
  double g_B = 0.05;
  double g_D = 0.4;
  double mu_E = 100.0;  // D
  double mu_B = 100.0;  // D
  double mu_D = 0.0;    // D; the dark mode is undriven unless set
  double E_L = 1e-6;    // eV per Debye
  double omega_L = 3.0;

  double drive_E() const { return -mu_E * E_L; }
  double drive_B() const { return -mu_B * E_L; }
  double drive_D() const { return -mu_D * E_L; }

  /// Sets E_L so that max(|ℰ_E|, |ℰ_B|) equals `amplitude` (eV).
  QuantumParams& with_drive_amplitude(double amplitude) {
    const double mu = std::max(std::abs(mu_E), std::abs(mu_B));
    E_L = mu > 0.0 ? amplitude / mu : 0.0;
    return *this;
  }

  void validate() const {
    const std::pair<double, const char*> finite[] = {
        {omega_E, "omega_E"}, {omega_B, "omega_B"}, {omega_D, "omega_D"}, {omega_L, "omega_L"},
        {E_L, "E_L"},         {mu_E, "mu_E"},       {mu_B, "mu_B"},       {mu_D, "mu_D"}};
    for (auto [v, name] : finite)
      if (!std::isfinite(v)) throw InvalidInput(std::string("QuantumParams: ") + name + " is not finite");
    const std::pair<double, const char*> nonneg[] = {{gamma_E, "gamma_E"}, {gamma_B, "gamma_B"},
                                                     {gamma_D, "gamma_D"}, {g_B, "g_B"},
                                                     {g_D, "g_D"}};
    for (auto [v, name] : nonneg)
      if (!std::isfinite(v) || v < 0.0)
        throw InvalidInput(std::string("QuantumParams: ") + name + " must be >= 0 (nonnegativity)");
  }
};

/// Single-excitation block as a coupled-mode parameter set (no indirect coupling).
inline cmt::CmtParams to_cmt_params(const QuantumParams& q) {
  cmt::CmtParams p;
  p.omega_B = q.omega_B;
  p.omega_D = q.omega_D;
  p.omega_E = q.omega_E;
  p.gamma_B_rad = 0.0;
  p.gamma_B_nonrad = q.gamma_B;
  p.gamma_D_rad = 0.0;
  p.gamma_D_nonrad = q.gamma_D;
  p.gamma_E_rad = 0.0;
  p.gamma_E_nonrad = q.gamma_E;
  p.g_B = q.g_B;
  p.g_D = q.g_D;
  return p;
}

struct Operators {
  Matrix sm, ab, ad;
  explicit Operators(const HilbertSpace& s) : sm(s.sigma_minus()), ab(s.a_bright()), ad(s.a_dark()) {}
};

/// Hermitian rotating-frame Hamiltonian H (drive included, decay excluded).
inline Matrix hermitian_hamiltonian(const QuantumParams& q, const HilbertSpace& space) {
  q.validate();
  const Operators op(space);
  const Matrix sp = op.sm.adjoint();
  const Matrix abd = op.ab.adjoint();
  const Matrix add = op.ad.adjoint();
  Matrix h = (q.omega_E - q.omega_L) * (sp * op.sm) + (q.omega_B - q.omega_L) * (abd * op.ab) +
             (q.omega_D - q.omega_L) * (add * op.ad);
  h += q.g_B * (abd * op.sm + op.ab * sp) + q.g_D * (add * op.sm + op.ad * sp);
  h += 0.5 * q.drive_E() * (op.sm + sp) + 0.5 * q.drive_B() * (op.ab + abd) + 0.5 * q.drive_D() * (op.ad + add);
  return h;
}

/// Non-Hermitian H~ = H − i Σ_j (γ_j/2) n_j.
inline Matrix effective_hamiltonian(const QuantumParams& q, const HilbertSpace& space) {
  Matrix h = hermitian_hamiltonian(q, space);
  const cplx i{0.0, 1.0};
  for (int k = 0; k < space.dim(); ++k) {
    const BasisState st = space.unindex(k);
    h(k, k) -= i * 0.5 * (q.gamma_E * st.a + q.gamma_B * st.b + q.gamma_D * st.c);
  }
  return h;
}

struct SteadyStateVector {
  HilbertSpace space;
  Vector c;  // c(ground) == 1

  cplx operator()(int a, int b, int cc) const { return c[space.index(a, b, cc)]; }

  /// Σ |c|² over every state except |g,0,0>.
  double excited_weight() const { return c.squaredNorm() - std::norm(c[space.ground()]); }
};

struct WeakPumpSolution {
  SteadyStateVector state;
  /// |(H~ ψ)_{g,0,0}|, the row dropped from the linear system.
  double dropped_row_residual = 0.0;
  bool weak_pump_ok = true;
};

inline constexpr double weak_pump_bound = 1e-3;

/// Solves H~ ψ = 0 with c_{g,0,0} = 1 from every row except the ground-state
/// row. Does not throw on weak-pump violations; see `weak_pump_steady_state`.
inline WeakPumpSolution solve_weak_pump(const QuantumParams& q, const HilbertSpace& space) {
  const Matrix h = effective_hamiltonian(q, space);
  const int n = space.dim();
  const int g = space.ground();

  std::vector<int> rest;
  rest.reserve(n - 1);
  for (int k = 0; k < n; ++k)
    if (k != g) rest.push_back(k);

  Matrix a(n - 1, n - 1);
  Vector rhs(n - 1);
  for (int r = 0; r < n - 1; ++r) {
    for (int col = 0; col < n - 1; ++col) a(r, col) = h(rest[r], rest[col]);
    rhs[r] = -h(rest[r], g);
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = reciprocal_condition(lu);
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "weak_pump_steady_state: singular system at omega_L = " << q.omega_L << " (rcond " << rcond << ")";
    throw SingularSystem(os.str());
  }
  const Vector x = lu.solve(rhs);

  WeakPumpSolution out{SteadyStateVector{space, Vector::Zero(n)}, 0.0, true};
  out.state.c[g] = 1.0;
  for (int r = 0; r < n - 1; ++r) out.state.c[rest[r]] = x[r];
  out.dropped_row_residual = std::abs((h.row(g) * out.state.c)(0));
  out.weak_pump_ok = out.state.excited_weight() <= weak_pump_bound;
  return out;
}

inline WeakPumpSolution weak_pump_steady_state(const QuantumParams& q, const HilbertSpace& space) {
  WeakPumpSolution s = solve_weak_pump(q, space);
  if (!s.weak_pump_ok) {
    std::ostringstream os;
    os << "weak_pump_steady_state: excited weight " << s.state.excited_weight() << " exceeds " << weak_pump_bound
       << " at omega_L = " << q.omega_L;
    throw WeakPumpViolation(os.str());
  }
  return s;
}

/// a_s = μ_E σ- + μ_B a_B on `space`.
inline Matrix scattering_operator(const HilbertSpace& space, double mu_E, double mu_B) {
  return mu_E * space.sigma_minus() + mu_B * space.a_bright();
}

/// ⟨a_s† a_s⟩ over the normalized state.
inline double scattering_intensity(const SteadyStateVector& psi, double mu_E, double mu_B) {
  const double norm2 = psi.c.squaredNorm();
  if (!(norm2 > 0.0)) throw InvalidInput("scattering_intensity: zero state");
  const Vector v = scattering_operator(psi.space, mu_E, mu_B) * psi.c;
  return v.squaredNorm() / norm2;
}

inline constexpr double min_intensity = 1e-30;

/// ⟨a_s†a_s†a_s a_s⟩ / ⟨a_s†a_s⟩².
inline double g2_zero(const SteadyStateVector& psi, double mu_E, double mu_B) {
  if (psi.space.n_B() < 2 || psi.space.n_D() < 2)
    throw InvalidInput("g2_zero: needs bright and dark truncation >= 2");
  const double norm2 = psi.c.squaredNorm();
  const Matrix as = scattering_operator(psi.space, mu_E, mu_B);
  const Vector v1 = as * psi.c;
  const double s = v1.squaredNorm() / norm2;
  if (!(s > min_intensity)) throw UndefinedStatistics("g2_zero: scattered intensity underflows");
  const Vector v2 = as * v1;
  return (v2.squaredNorm() / norm2) / (s * s);
}

struct ScanPoint {
  double omega_L = 0.0;
  double S = std::nan("");
  double g2 = std::nan("");
  bool weak_pump_ok = false;
  std::string error;
};

inline ScanPoint scan_point(QuantumParams q, double omega_L, const HilbertSpace& space) {
  ScanPoint pt;
  pt.omega_L = omega_L;
  q.omega_L = omega_L;
  try {
    const WeakPumpSolution sol = solve_weak_pump(q, space);
    pt.weak_pump_ok = sol.weak_pump_ok;
    if (!sol.weak_pump_ok) pt.error = "weak-pump bound exceeded";
    pt.S = scattering_intensity(sol.state, q.mu_E, q.mu_B);
    pt.g2 = g2_zero(sol.state, q.mu_E, q.mu_B);
  } catch (const Error& e) {
    pt.error = e.what();
  }
  return pt;
}

/// S and g² along a drive-frequency grid; per-point failures are recorded,
/// never thrown.
inline std::vector<ScanPoint> spectrum_scan(const QuantumParams& q, const std::vector<double>& grid,
                                            const HilbertSpace& space = HilbertSpace(2, 2)) {
  cmt::require_increasing(grid, "spectrum_scan");
  std::vector<ScanPoint> out;
  out.reserve(grid.size());
  for (double w : grid) out.push_back(scan_point(q, w, space));
  return out;
}

// --- Full Lindblad steady state (dense oracle) ---------------------------

struct DensityMatrixState {
  HilbertSpace space;
  Matrix rho;
};

namespace detail {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace detail

/// Liouvillian acting on column-stacked vec(ρ): vec(AρB) = (Bᵀ ⊗ A) vec(ρ).
inline Matrix liouvillian(const QuantumParams& q, const HilbertSpace& space) {
  const Matrix h = hermitian_hamiltonian(q, space);
  const int n = space.dim();
  const Matrix id = Matrix::Identity(n, n);
  const cplx i{0.0, 1.0};
  Matrix l = -i * (detail::kron(id, h) - detail::kron(h.transpose(), id));
  const std::pair<double, Matrix> channels[] = {
      {q.gamma_E, space.sigma_minus()}, {q.gamma_B, space.a_bright()}, {q.gamma_D, space.a_dark()}};
  for (const auto& [rate, c] : channels) {
    if (rate == 0.0) continue;
    const Matrix cdc = c.adjoint() * c;
    l += rate * (detail::kron(c.conjugate(), c) - 0.5 * detail::kron(id, cdc) - 0.5 * detail::kron(cdc.transpose(), id));
  }
  return l;
}

struct LindbladOptions {
  /// Check uniqueness of the null space with a full SVD (slow, O(dim^6)).
  bool verify_null_space = false;
};

inline DensityMatrixState lindblad_steady_state(const QuantumParams& q, const HilbertSpace& space,
                                                const LindbladOptions& opt = {}) {
  const int n = space.dim();
  if (n > 64) throw InvalidInput("lindblad_steady_state: dense oracle limited to dimension 64");
  Matrix l = liouvillian(q, space);
  const double scale = l.norm();

  if (opt.verify_null_space) {
    Eigen::BDCSVD<Matrix> svd(l);
    const auto& sv = svd.singularValues();
    int zeros = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv[k] <= 1e-10 * scale) ++zeros;
    if (zeros > 1) throw DegenerateNullSpace("lindblad_steady_state: Liouvillian has a degenerate null space");
  }

  // Replace the first equation by the trace condition.
  for (int col = 0; col < n * n; ++col) l(0, col) = 0.0;
  for (int k = 0; k < n; ++k) l(0, k * n + k) = 1.0;
  Vector rhs = Vector::Zero(n * n);
  rhs[0] = 1.0;
  Eigen::PartialPivLU<Matrix> lu(l);
  if (!(reciprocal_condition(lu) > 1e-13))
    throw DegenerateNullSpace("lindblad_steady_state: steady state is not unique (trace-constrained system singular)");
  const Vector x = lu.solve(rhs);

  DensityMatrixState out{space, Eigen::Map<const Matrix>(x.data(), n, n)};
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
  out.rho /= out.rho.trace().real();
  return out;
}

/// Checks the density-matrix invariants; returns an empty string when they hold.
inline std::string density_matrix_violation(const DensityMatrixState& s, double tol = 1e-10) {
  const Matrix& r = s.rho;
  if ((r - r.adjoint()).norm() > tol) return "not Hermitian";
  if (std::abs(r.trace() - cplx{1.0, 0.0}) > tol) return "trace differs from one";
  Eigen::SelfAdjointEigenSolver<Matrix> es(r);
  if (es.eigenvalues().minCoeff() < -tol) return "negative eigenvalue";
  return {};
}

struct Observables {
  double S = 0.0;
  double g2 = 0.0;
};

inline Observables observables_from_rho(const DensityMatrixState& s, double mu_E, double mu_B) {
  const Matrix as = scattering_operator(s.space, mu_E, mu_B);
  const Matrix n1 = as.adjoint() * as;
  const Matrix as2 = as * as;
  const Matrix n2 = as2.adjoint() * as2;
  Observables o;
  o.S = (s.rho * n1).trace().real();
  if (!(o.S > min_intensity)) throw UndefinedStatistics("observables_from_rho: scattered intensity underflows");
  o.g2 = (s.rho * n2).trace().real() / (o.S * o.S);
  return o;
}

}  // namespace plexsim::quantum
