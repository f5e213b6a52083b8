#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "plexsim/analytics.hpp"
#include "plexsim/cmt.hpp"
#include "support.hpp"

using namespace plexsim;
using namespace plexsim::analytics;

namespace {

Eigen::Vector3d sorted_eigenvalues(const Eigen::Matrix3d& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

// Exact dark-block eigenvalues from the 2x2 quadratic, written naively.
std::pair<double, double> naive_block(double dD, double g) {
  const double u = std::sqrt(dD * dD + 4 * g * g);
  return {(dD - u) / 2, (dD + u) / 2};
}

}  // namespace

TEST(DarkBlock, ResonantSymmetric) {
  const auto r = dark_block_eigenvalues(0.0, 0.4);
  EXPECT_NEAR(r.delta_plus, 0.4, 1e-15);
  EXPECT_NEAR(r.delta_minus, -0.4, 1e-15);
  EXPECT_NEAR(r.upsilon, 0.8, 1e-15);
  EXPECT_NEAR(r.cos_half, 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.sin_half, 1 / std::sqrt(2.0), 1e-15);
}

TEST(DarkBlock, DetunedExample) {
  const auto r = dark_block_eigenvalues(0.3, 0.4);
  EXPECT_NEAR(r.upsilon, std::sqrt(0.73), 1e-15);
  EXPECT_NEAR(r.delta_plus, 0.577200187, 1e-9);
  EXPECT_NEAR(r.delta_minus, -0.277200187, 1e-9);
}

TEST(DarkBlock, DecoupledLimit) {
  const auto r = dark_block_eigenvalues(0.25, 0.0);
  EXPECT_EQ(r.delta_minus, 0.0);
  EXPECT_EQ(r.delta_plus, 0.25);
  EXPECT_EQ(r.cos_half, 1.0);
  EXPECT_EQ(r.sin_half, 0.0);
}

TEST(DarkBlock, RejectsNegativeCoupling) { EXPECT_THROW(dark_block_eigenvalues(0.1, -0.1), InvalidInput); }

TEST(DarkBlock, InvariantsProperty) {
  oracle::Gen gen(41);
  for (int k = 0; k < 2000; ++k) {
    const double dD = gen.uniform(-2.0, 2.0), g = gen.uniform(0.0, 1.5);
    const auto r = dark_block_eigenvalues(dD, g);
    const auto [lo, hi] = naive_block(dD, g);
    EXPECT_GE(r.delta_plus, r.delta_minus);
    EXPECT_NEAR(r.upsilon, r.delta_plus - r.delta_minus, 1e-14);
    EXPECT_NEAR(r.delta_minus + r.delta_plus, dD, 1e-14);
    EXPECT_NEAR(r.delta_minus, lo, 1e-13);
    EXPECT_NEAR(r.delta_plus, hi, 1e-13);
    EXPECT_NEAR(r.cos_half * r.cos_half + r.sin_half * r.sin_half, 1.0, 1e-12);
    EXPECT_GE(r.cos_half, 0.0);
    EXPECT_LE(r.cos_half, 1.0);
    EXPECT_GE(r.sin_half, 0.0);
    EXPECT_LE(r.sin_half, 1.0);
    const Eigen::Matrix3d t = block_rotation(r);
    EXPECT_LT((t.transpose() * t - Eigen::Matrix3d::Identity()).norm(), 1e-14);
    // T diagonalizes the (E, D) block.
    Eigen::Matrix2d blk;
    blk << 0.0, g, g, dD;
    const Eigen::Matrix2d d = t.topLeftCorner<2, 2>().transpose() * blk * t.topLeftCorner<2, 2>();
    EXPECT_NEAR(d(0, 1), 0.0, 1e-13);
    EXPECT_NEAR(d(0, 0), r.delta_minus, 1e-13);
  }
}

TEST(PartialDiagonalize, Limits) {
  const auto h0 = partial_diagonalize(0.05, 0.0, 0.3, -0.1);
  EXPECT_EQ(h0(0, 2), 0.05);
  EXPECT_EQ(h0(1, 2), 0.0);
  const auto h1 = partial_diagonalize(0.05, 0.4, 0.0, -0.1);
  EXPECT_NEAR(h1(0, 2), 0.05 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(h1(1, 2), 0.05 / std::sqrt(2.0), 1e-15);
}

TEST(PartialDiagonalize, SimilarityInvariantProperty) {
  oracle::Gen gen(8);
  for (int k = 0; k < 1000; ++k) {
    const double gB = gen.uniform(0, 0.3), gD = gen.uniform(0, 1), dD = gen.uniform(-1, 1), dB = gen.uniform(-1, 1);
    const Eigen::Vector3d a = sorted_eigenvalues(lossless_hamiltonian(gB, gD, dD, dB));
    const Eigen::Vector3d b = sorted_eigenvalues(partial_diagonalize(gB, gD, dD, dB));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
    // The rotation reproduces the partially diagonal form.
    const Eigen::Matrix3d t = block_rotation(dark_block_eigenvalues(dD, gD));
    EXPECT_LT((t.transpose() * lossless_hamiltonian(gB, gD, dD, dB) * t - partial_diagonalize(gB, gD, dD, dB)).norm(),
              1e-13);
  }
}

TEST(RabiSplitting, Examples) {
  EXPECT_NEAR(bright_rabi_splitting(0.05, 0.4, 3.4, 3.4), 0.0707106781, 1e-10);
  EXPECT_NEAR(bright_rabi_splitting(0.05, 1e-9, 3.4, 3.2), 0.1, 1e-12);
  const double w = bright_rabi_splitting(0.05, 0.4, 3.6, 3.4);
  EXPECT_NEAR(w, std::sqrt(2.0) * 0.05 * std::sqrt(1 + 0.2 / std::sqrt(0.68)), 1e-15);
  EXPECT_NEAR(w, 0.0788205, 1e-7);
  EXPECT_THROW(bright_rabi_splitting(0.05, 0.0, 3.4, 3.4), UndefinedLimit);
}

// The closed form drops the bright coupling to the upper dark polariton, so
// it tracks the exact lossless gap only to second order in g_B sin(θ/2).
TEST(RabiSplitting, TracksExactGapPerturbatively) {
  oracle::Gen gen(17);
  for (int k = 0; k < 500; ++k) {
    const double gB = gen.uniform(0.01, 0.2), gD = gen.uniform(0.1, 1.0), dD = gen.uniform(-0.5, 0.5);
    const auto r = dark_block_eigenvalues(dD, gD);
    const Eigen::Vector3d ev = sorted_eigenvalues(lossless_hamiltonian(gB, gD, dD, r.delta_minus));
    const double gap = ev(1) - ev(0);
    const double omega = bright_rabi_splitting(gB, gD, dD, 0.0);
    const double coupling = gB * r.sin_half;
    const double bound = 2.0 * coupling * coupling / (r.upsilon - omega / 2.0);
    EXPECT_LE(std::abs(gap - omega), bound) << "gB " << gB << " gD " << gD << " dD " << dD;
  }
}

TEST(RabiSplitting, ExactWhenUpperPolaritonDecouples) {
  // sin(θ/2) → 0 for Δ_D ≫ g_D; the closed form becomes exact.
  const auto r = dark_block_eigenvalues(50.0, 0.01);
  const Eigen::Vector3d ev = sorted_eigenvalues(lossless_hamiltonian(0.05, 0.01, 50.0, r.delta_minus));
  EXPECT_NEAR(ev(1) - ev(0), bright_rabi_splitting(0.05, 0.01, 50.0, 0.0), 1e-9);
}

TEST(RabiSplitting, DecreasesWithDarkCoupling) {
  double prev = bright_rabi_splitting(0.05, 1e-6, 3.6, 3.4);
  for (double gD = 0.01; gD <= 2.0; gD += 0.01) {
    const double now = bright_rabi_splitting(0.05, gD, 3.6, 3.4);
    EXPECT_LT(now, prev);
    prev = now;
  }
}

TEST(OptimalDetuning, Examples) {
  EXPECT_NEAR(optimal_detuning(0.4, 3.0, 3.4), 0.4, 1e-15);
  EXPECT_EQ(optimal_detuning(0.0, 3.0, 3.4), 0.0);
  EXPECT_THROW(optimal_detuning(0.4, 3.0, 3.0), UndefinedLimit);
}

TEST(OptimalDetuning, ResonanceConditionProperty) {
  oracle::Gen gen(23);
  for (int k = 0; k < 1000; ++k) {
    const double gD = gen.uniform(0.0, 1.0), wB = gen.uniform(2.5, 3.5), wD = wB + gen.uniform(0.05, 1.0);
    const double dE = optimal_detuning(gD, wB, wD);
    const double wE = wB + dE;
    EXPECT_EQ(optimal_bright_detuning(gD, wB, wD), -dE);
    EXPECT_NEAR(dark_block_eigenvalues(wD - wE, gD).delta_minus, wB - wE, 1e-12);
  }
}

TEST(OptimalDetuning, MatchesAnticrossingOfFigureTwo) {
  const cmt::CmtParams p;
  EXPECT_NEAR(p.omega_B + optimal_detuning(p.g_D, p.omega_B, p.omega_D), p.omega_D, 1e-15);
}
