#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qode/errors.hpp"
#include "qode/instances.hpp"
#include "qode/spectral_bounds.hpp"
#include "support.hpp"

namespace qode {
namespace {

// ||e^{At}|| for [[-2, 10], [0, -2]]: e^{-2t} sigma_max([[1, 10t], [0, 1]]).
double transient_norm(double t) {
  const double x = 10.0 * t;
  return std::exp(-2.0 * t) * (x + std::sqrt(x * x + 4.0)) / 2.0;
}

TEST(CofA, ZeroMatrixIsOne) {
  for (double T : {0.0, 1.0, 100.0}) EXPECT_EQ(c_of_a(CMatrix::Zero(3, 3), T).value, 1.0);
}

TEST(CofA, ContractiveExampleIsOne) {
  const CofA c = c_of_a(contractive_example(), 5.0);
  EXPECT_EQ(c.value, 1.0);
  EXPECT_EQ(c.t_max, 0.0);
}

TEST(CofA, TransientMatchesFineGrid) {
  double grid = 0.0;
  const int n = 100000;
  for (int i = 0; i <= n; ++i) grid = std::max(grid, transient_norm(5.0 * i / n));
  const CofA c = c_of_a(transient_example(), 5.0);
  EXPECT_GT(c.value, 1.0);
  EXPECT_LT(test::rel(c.value, grid), 1e-4);
  EXPECT_NEAR(transient_norm(c.t_max), c.value, 1e-9);
}

TEST(CofA, NeverBelowSampledNorms) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix a = test::random_complex(rng, 4, 4);
    a.diagonal().array() -= 1.0;
    const CofA c = c_of_a(a, 3.0);
    for (int i = 0; i <= 60; ++i) EXPECT_LE(op_norm(mat_exp(a, 3.0 * i / 60)), c.value * (1 + 1e-9));
  }
}

TEST(CofA, RejectsBadHorizon) {
  EXPECT_THROW(c_of_a(CMatrix::Identity(2, 2), -1.0), InputError);
  EXPECT_THROW(c_of_a(CMatrix::Identity(2, 2), std::nan("")), InputError);
}

TEST(Kreiss, MinusIdentityIsOne) {
  const KreissEstimate k = kreiss_constant(-CMatrix::Identity(3, 3));
  EXPECT_NEAR(k.low, 1.0, 1e-3);
  EXPECT_LE(k.low, 1.0 + 1e-12);
  EXPECT_FALSE(k.unbounded);
}

TEST(Kreiss, NormalStableIsOne) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix q = test::random_unitary(rng, 5);
    CVector lam(5);
    std::uniform_real_distribution<double> u(0.1, 2.0), v(-3.0, 3.0);
    for (Index i = 0; i < 5; ++i) lam(i) = Complex(-u(rng), v(rng));
    const CMatrix a = q * lam.asDiagonal() * q.adjoint();
    EXPECT_NEAR(kreiss_constant(a).low, 1.0, 1e-3);
  }
}

TEST(Kreiss, SandwichOnRandomStable) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix a = test::random_stable(rng, 6, 0.2);
    const KreissEstimate k = kreiss_constant(a);
    const double alpha = spectral_scalars(a).alpha;
    CofAOptions o;
    o.n_grid = 4096;
    const double sup = c_of_a(a, std::log(1e8) / -alpha, o).value;
    EXPECT_LE(k.low, sup * (1 + 1e-6));
    EXPECT_LE(sup, k.high);
    EXPECT_NEAR(k.high, std::exp(1.0) * 6.0 * k.low, 1e-9 * k.high);
  }
}

TEST(Kreiss, UnstableIsUnbounded) {
  EXPECT_TRUE(kreiss_constant(CMatrix::Identity(2, 2) * 0.1).unbounded);
}

TEST(ExpBoundJordan, Reductions) {
  EXPECT_NEAR(exp_bound_jordan(0.7, -0.3, 4.0, 1), 4.0 * std::exp(-0.21), 1e-14);
  EXPECT_NEAR(exp_bound_jordan(1.0, 0.0, 1.0, 2), 2.0, 1e-14);
}

TEST(ExpBoundJordan, DominatesJordanBlock) {
  CMatrix a(2, 2);
  a << -1.0, 1.0, 0.0, -1.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 10.0 * i / 99;
    EXPECT_GE(exp_bound_jordan(t, -1.0, 1.0, 2) * (1 + 1e-12), op_norm(mat_exp(a, t))) << t;
  }
}

TEST(ExpBoundSchur, Reductions) {
  EXPECT_NEAR(exp_bound_schur(1.3, -0.5, 0.0, 4), std::exp(-0.65), 1e-14);
  EXPECT_NEAR(exp_bound_schur(1.3, -0.5, 2.0, 2), (1 + 2.6) * std::exp(-0.65), 1e-14);
}

TEST(ExpBoundSchur, DominatesTransient) {
  for (int i = 0; i <= 200; ++i) {
    const double t = 5.0 * i / 200;
    EXPECT_GE(exp_bound_schur(t, -2.0, 10.0, 2) * (1 + 1e-12), transient_norm(t));
  }
}

TEST(BoundReport, ExamplePairShapes) {
  const BoundCurve a = bound_report(transient_example(), 5.0);
  const BoundCurve b = bound_report(contractive_example(), 5.0);
  ASSERT_EQ(a.t.size(), b.t.size());
  double peak = 0.0;
  for (double v : a.actual) peak = std::max(peak, v);
  EXPECT_GT(peak, 1.0);
  EXPECT_LT(a.actual.back(), 1.0);
  for (std::size_t i = 1; i < b.actual.size(); ++i) EXPECT_LE(b.actual[i], b.actual[i - 1] * (1 + 1e-12));
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    EXPECT_LE(a.actual[i], a.schur_bound[i] * (1 + 1e-12));
    EXPECT_LE(a.actual[i], a.mu_bound[i] * (1 + 1e-12));
  }
}

TEST(BoundReport, ZeroMatrixIsFlat) {
  const BoundCurve c = bound_report(CMatrix::Zero(3, 3), 2.0);
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    EXPECT_NEAR(c.actual[i], 1.0, 1e-15);
    EXPECT_NEAR(c.mu_bound[i], 1.0, 1e-15);
    EXPECT_NEAR(c.schur_bound[i], 1.0, 1e-15);
  }
}

TEST(BoundReport, NormalMatrixAttainsMuBound) {
  std::mt19937_64 rng(24);
  const CMatrix q = test::random_unitary(rng, 5);
  CVector lam(5);
  for (Index i = 0; i < 5; ++i) lam(i) = Complex(-0.2 - 0.3 * i, 0.5 * i);
  const CMatrix a = q * lam.asDiagonal() * q.adjoint();
  const BoundCurve c = bound_report(a, 3.0);
  for (std::size_t i = 0; i < c.t.size(); ++i) EXPECT_NEAR(c.actual[i], c.mu_bound[i], 1e-9);
}

TEST(BoundReport, JordanCurveWithHint) {
  CMatrix a(2, 2);
  a << -1.0, 1.0, 0.0, -1.0;
  BoundReportOptions o;
  o.beta_hint = 2;
  o.kappa_v_hint = 1.0;
  const BoundCurve c = bound_report(a, 10.0, o);
  ASSERT_TRUE(c.jordan_bound.has_value());
  for (std::size_t i = 0; i < c.t.size(); ++i) EXPECT_LE(c.actual[i], (*c.jordan_bound)[i] * (1 + 1e-12));
}

TEST(SpectralProfile, TwistedToeplitz) {
  const SpectralProfile p = spectral_profile(twisted_toeplitz(20), 5.0);
  EXPECT_NEAR(p.mu, -0.05, 1e-15);
  EXPECT_LE(p.alpha, p.mu);
  EXPECT_EQ(p.c_of_a, 1.0);
  EXPECT_TRUE(p.diagonalizable);
}

}  // namespace
}  // namespace qode
