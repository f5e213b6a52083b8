#pragma once

// Eigen-decomposition of general complex 3x3 matrices through the
// characteristic cubic. Roots come from Cardano's formula and are polished
// with Newton steps on det(H - z I); eigenvectors come from cross products
// of the rows of (H - z I), with an SVD null-space fallback for clustered
// eigenvalues and one inverse-iteration step for isolated ones.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>

#include "plexsim/errors.hpp"

namespace plexsim {

using cplx = std::complex<double>;
using ComplexMatrix3 = Eigen::Matrix3cd;
using ComplexVector3 = Eigen::Vector3cd;

/// Three eigenpairs ordered by ascending real part, ties by imaginary part.
/// Index 0/1/2 is the lower/middle/upper polariton.
struct EigenSet {
  std::array<cplx, 3> values{};
  std::array<ComplexVector3, 3> vectors{};

  const cplx& lower() const { return values[0]; }
  const cplx& middle() const { return values[1]; }
  const cplx& upper() const { return values[2]; }
};

enum class Polariton { LP = 0, MP = 1, UP = 2 };

inline const char* polariton_name(Polariton p) {
  switch (p) {
    case Polariton::LP: return "LP";
    case Polariton::MP: return "MP";
    case Polariton::UP: return "UP";
  }
  return "?";
}

namespace detail {

struct Cubic {
  cplx a, b, c;  // z^3 + a z^2 + b z + c
};

inline Cubic characteristic_cubic(const ComplexMatrix3& h) {
  const cplx tr = h.trace();
  const cplx minors = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0) +  //
                      h(0, 0) * h(2, 2) - h(0, 2) * h(2, 0) +  //
                      h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1);
  return {-tr, minors, -h.determinant()};
}

inline cplx principal_cbrt(cplx z) {
  if (z == cplx{}) return {};
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

inline std::array<cplx, 3> cardano_roots(const Cubic& k) {
  const cplx a3 = k.a / 3.0;
  const cplx p = k.b - k.a * a3;
  const cplx q = 2.0 * a3 * a3 * a3 - a3 * k.b + k.c;
  const cplx disc = std::sqrt(0.25 * q * q + p * p * p / 27.0);
  // Pick the branch with the larger modulus to avoid cancellation.
  cplx w1 = -0.5 * q + disc;
  const cplx w2 = -0.5 * q - disc;
  if (std::abs(w2) > std::abs(w1)) w1 = w2;
  const cplx u = principal_cbrt(w1);
  const cplx v = (u == cplx{}) ? cplx{} : -p / (3.0 * u);
  const cplx omega{-0.5, std::sqrt(3.0) / 2.0};
  const cplx omega2 = std::conj(omega);
  return {u + v - a3, omega * u + omega2 * v - a3, omega2 * u + omega * v - a3};
}

inline cplx newton_polish(const ComplexMatrix3& h, cplx z) {
  const ComplexMatrix3 id = ComplexMatrix3::Identity();
  for (int it = 0; it < 4; ++it) {
    const cplx f = (h - z * id).determinant();
    // d/dz det(H - zI) = -trace(adj(H - zI))
    const ComplexMatrix3 m = h - z * id;
    const cplx df = -(m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1) +  //
                      m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +  //
                      m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    if (std::abs(df) < 1e-300) break;
    const cplx step = f / df;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    z -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  return z;
}

/// Cross products of rows of (H - zI) span its null space when rank == 2.
inline ComplexVector3 null_vector_from_rows(const ComplexMatrix3& m) {
  const ComplexVector3 r0 = m.row(0).transpose();
  const ComplexVector3 r1 = m.row(1).transpose();
  const ComplexVector3 r2 = m.row(2).transpose();
  // The bilinear cross product satisfies r_j^T (r_j x r_k) = 0 for complex rows.
  const std::array<ComplexVector3, 3> candidates = {r0.cross(r1), r0.cross(r2), r1.cross(r2)};
  const auto* best = &candidates[0];
  for (const auto& c : candidates)
    if (c.norm() > best->norm()) best = &c;
  return *best;
}

inline void fix_phase(ComplexVector3& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v[k]) > 0) v *= std::abs(v[k]) / v[k];
}

inline cplx rayleigh(const ComplexMatrix3& h, const ComplexVector3& v) {
  return v.dot(h * v) / v.squaredNorm();
}

/// Exact eigenpairs when some basis state is uncoupled from the others.
/// The decoupled diagonal entry is returned bit-exactly and the remaining
/// 2x2 block is solved in closed form. Returns false if no state decouples.
inline bool deflate(const ComplexMatrix3& h, std::array<cplx, 3>& roots, std::array<ComplexVector3, 3>& vecs) {
  auto isolated = [&](int k) {
    for (int j = 0; j < 3; ++j)
      if (j != k && (h(k, j) != cplx{} || h(j, k) != cplx{})) return false;
    return true;
  };
  int k = 0;
  while (k < 3 && !isolated(k)) ++k;
  if (k == 3) return false;

  roots[k] = h(k, k);
  vecs[k] = ComplexVector3::Unit(k);
  const int i = (k + 1) % 3, j = (k + 2) % 3;
  const cplx a = h(i, i), b = h(i, j), c = h(j, i), d = h(j, j);
  if (b == cplx{} && c == cplx{}) {
    roots[i] = a, roots[j] = d;
    vecs[i] = ComplexVector3::Unit(i), vecs[j] = ComplexVector3::Unit(j);
    return true;
  }
  const cplx mean = 0.5 * (a + d);
  const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const std::array<cplx, 2> lam = {mean + disc, mean - disc};
  for (int s = 0; s < 2; ++s) {
    // Two candidate null vectors of the 2x2; keep the better conditioned.
    const Eigen::Vector2cd u(b, lam[s] - a), w(lam[s] - d, c);
    const Eigen::Vector2cd y = u.norm() >= w.norm() ? u : w;
    ComplexVector3 v = ComplexVector3::Zero();
    v[i] = y[0];
    v[j] = y[1];
    roots[s == 0 ? i : j] = lam[s];
    vecs[s == 0 ? i : j] = v.normalized();
  }
  return true;
}

}  // namespace detail

/// Eigenpairs of a general complex 3x3 matrix; vectors have unit Euclidean
/// norm, and the largest component is made real positive.
inline EigenSet eigenmodes(const ComplexMatrix3& h) {
  if (!h.allFinite()) throw InvalidInput("eigenmodes: non-finite matrix entry");
  const double scale = std::max(h.norm(), 1e-300);
  const ComplexMatrix3 id = ComplexMatrix3::Identity();

  std::array<cplx, 3> roots;
  std::array<ComplexVector3, 3> vecs;
  std::array<bool, 3> done{false, false, false};
  if (detail::deflate(h, roots, vecs)) {
    done = {true, true, true};
  } else {
    roots = detail::cardano_roots(detail::characteristic_cubic(h));
    for (auto& z : roots) z = detail::newton_polish(h, z);
  }

  // Clustered roots (exact or near-exact crossings): share one SVD null space.
  const double cluster_tol = 1e-6 * scale;
  for (int i = 0; i < 3; ++i) {
    if (done[i]) continue;
    std::array<int, 3> members{};
    int count = 0;
    for (int j = i; j < 3; ++j)
      if (!done[j] && std::abs(roots[j] - roots[i]) <= cluster_tol) members[count++] = j;
    if (count < 2) continue;

    cplx centre{};
    double spread = 0.0;
    for (int k = 0; k < count; ++k) centre += roots[members[k]];
    centre /= static_cast<double>(count);
    for (int k = 0; k < count; ++k) spread = std::max(spread, std::abs(roots[members[k]] - centre));

    Eigen::JacobiSVD<ComplexMatrix3> svd(h - centre * id, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double rank_tol = std::max(1e-10 * scale, 10.0 * spread);
    int nullity = 0;
    for (int k = 2; k >= 0 && sv[k] <= rank_tol; --k) ++nullity;
    if (nullity < count) continue;  // defective: fall through to the per-root path

    for (int k = 0; k < count; ++k) {
      ComplexVector3 v = svd.matrixV().col(2 - k);
      v.normalize();
      vecs[members[k]] = v;
      roots[members[k]] = detail::rayleigh(h, v);
      done[members[k]] = true;
    }
  }

  for (int i = 0; i < 3; ++i) {
    if (done[i]) continue;
    const ComplexMatrix3 m = h - roots[i] * id;
    ComplexVector3 v = detail::null_vector_from_rows(m);
    if (v.norm() == 0.0) v = ComplexVector3::Unit(i);
    v.normalize();

    // One inverse-iteration step, shifted off the exact root to keep the
    // factorization finite.
    for (int step = 0; step < 3; ++step) {
      const cplx shift = roots[i] + cplx{1e-13 * scale, 0.0};
      Eigen::FullPivLU<ComplexMatrix3> lu(h - shift * id);
      ComplexVector3 x = lu.solve(v);
      if (x.allFinite() && x.norm() > 0.0) v = x.normalized();
      roots[i] = detail::rayleigh(h, v);
      if ((h * v - roots[i] * v).norm() <= 1e-10 * scale) break;
    }
    vecs[i] = v;
  }

  for (int i = 0; i < 3; ++i) {
    const double residual = (h * vecs[i] - roots[i] * vecs[i]).norm();
    if (!(residual <= 1e-9 * scale)) {
      std::ostringstream os;
      os << "eigenmodes: residual " << residual << " above target for eigenvalue " << roots[i]
         << " of matrix\n"
         << h;
      throw ConvergenceFailure(os.str());
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (roots[x].real() != roots[y].real()) return roots[x].real() < roots[y].real();
    return roots[x].imag() < roots[y].imag();
  });

  EigenSet out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = roots[order[k]];
    out.vectors[k] = vecs[order[k]];
    detail::fix_phase(out.vectors[k]);
  }
  return out;
}

/// Squared moduli of the components of `v`, normalized to sum to one.
inline std::array<double, 3> hopfield(const ComplexVector3& v) {
  std::array<double, 3> w{std::norm(v[0]), std::norm(v[1]), std::norm(v[2])};
  const double total = w[0] + w[1] + w[2];
  if (!(total > 0.0)) throw InvalidInput("hopfield: zero vector");
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace plexsim
