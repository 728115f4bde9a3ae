#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <unsupported/Eigen/KroneckerProduct>

#include "qode/carleman.hpp"
#include "qode/errors.hpp"
#include "qode/instances.hpp"
#include "support.hpp"

namespace qode {
namespace {

QuadraticODE scalar(double f2, double f1, double f0, double u, double T = 1.0) {
  QuadraticODE o;
  o.F0 = RVector::Constant(1, f0);
  o.F1 = RMatrix::Constant(1, 1, f1);
  o.F2 = RMatrix::Constant(1, 1, f2);
  o.u_in = RVector::Constant(1, u);
  o.T = T;
  return o;
}

QuadraticODE random_two_dim(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  QuadraticODE o;
  o.F0 = RVector(2);
  o.F1 = RMatrix(2, 2);
  o.F2 = RMatrix(2, 4);
  for (Index i = 0; i < 2; ++i) o.F0(i) = 0.1 * n(rng);
  for (Index i = 0; i < 4; ++i) o.F1.data()[i] = 0.3 * n(rng);
  for (Index i = 0; i < 8; ++i) o.F2.data()[i] = 0.2 * n(rng);
  o.F1.diagonal().array() -= 1.5;
  o.u_in = RVector(2);
  o.u_in << 0.3, -0.2;
  o.T = 1.0;
  return o;
}

// Largest nonzero count over rows and columns.
Index sparsity(const RMatrix& m) {
  Index s = 0;
  for (Index i = 0; i < m.rows(); ++i) s = std::max<Index>(s, (m.row(i).array() != 0.0).count());
  for (Index j = 0; j < m.cols(); ++j) s = std::max<Index>(s, (m.col(j).array() != 0.0).count());
  return s;
}

RMatrix eye(Index n) { return RMatrix::Identity(n, n); }

// Kronecker sum of G over j positions, built densely.
RMatrix kron_sum(const RMatrix& g, int j, Index d) {
  RMatrix out;
  for (int q = 0; q < j; ++q) {
    RMatrix t = RMatrix::Identity(1, 1);
    for (int r = 0; r < j; ++r) {
      const RMatrix f = r == q ? g : eye(d);
      t = RMatrix(Eigen::kroneckerProduct(t, f));
    }
    out = q == 0 ? t : RMatrix(out + t);
  }
  return out;
}

TEST(BuildCarleman, ScalarTwoLevels) {
  const CarlemanSystem s = build_carleman(scalar(0.7, -1.3, 0.4, 0.5), 2);
  const CMatrix a(s.A);
  CMatrix want(2, 2);
  want << -1.3, 0.7, 0.8, -2.6;
  EXPECT_EQ((a - want).norm(), 0.0);
  EXPECT_EQ(s.b(0), Complex(0.4));
  EXPECT_EQ(s.b(1), Complex(0.0));
  EXPECT_EQ(s.x_in(1), Complex(0.25));
}

TEST(BuildCarleman, MatchesDenseKroneckerOracle) {
  std::mt19937_64 rng(61);
  const QuadraticODE o = random_two_dim(rng);
  const int N = 3;
  const CarlemanSystem s = build_carleman(o, N);
  ASSERT_EQ(s.delta, 2 + 4 + 8);
  const RMatrix a = CMatrix(s.A).real();
  const RMatrix f0 = o.F0;
  for (int j = 1; j <= N; ++j) {
    const Index r = s.level_offset(j), nr = s.level_size(j);
    EXPECT_LT((a.block(r, r, nr, nr) - kron_sum(o.F1, j, 2)).norm(), 1e-15);
    if (j < N) {
      const Index c = s.level_offset(j + 1);
      EXPECT_LT((a.block(r, c, nr, s.level_size(j + 1)) - kron_sum(o.F2, j, 2)).norm(), 1e-15);
    }
    if (j > 1) {
      const Index c = s.level_offset(j - 1);
      EXPECT_LT((a.block(r, c, nr, s.level_size(j - 1)) - kron_sum(f0, j, 2)).norm(), 1e-15);
    }
  }
  // Nothing outside the three block diagonals.
  RMatrix rest = a;
  for (int j = 1; j <= N; ++j)
    for (int i = std::max(1, j - 1); i <= std::min(N, j + 1); ++i)
      rest.block(s.level_offset(j), s.level_offset(i), s.level_size(j), s.level_size(i)).setZero();
  EXPECT_EQ(rest.norm(), 0.0);
}

TEST(BuildCarleman, TensorPowersAndNorms) {
  std::mt19937_64 rng(62);
  const QuadraticODE o = random_two_dim(rng);
  const CarlemanSystem s = build_carleman(o, 4);
  RVector pw = o.u_in;
  for (int j = 1; j <= 4; ++j) {
    const CVector blk = s.x_in.segment(s.level_offset(j), s.level_size(j));
    EXPECT_LT((blk - pw.cast<Complex>()).norm(), 1e-15);
    EXPECT_NEAR(blk.norm(), std::pow(o.u_in.norm(), j), 1e-12 * std::pow(o.u_in.norm(), j));
    pw = RVector(Eigen::kroneckerProduct(pw, o.u_in));
  }
}

TEST(BuildCarleman, UntruncatedLevelsFollowTheFlow) {
  // d/dt u^(x)j along the ODE equals the block row action for j < N.
  std::mt19937_64 rng(63);
  const QuadraticODE o = random_two_dim(rng);
  const int N = 4;
  const CarlemanSystem s = build_carleman(o, N);
  const RVector u = o.u_in;
  const RVector f = quadratic_rhs(o, u);
  const CVector ax = s.A * s.x_in + s.b;
  RVector pw = u;
  for (int j = 1; j < N; ++j) {
    // Product rule over the j factors.
    RVector deriv = RVector::Zero(s.level_size(j));
    for (int q = 0; q < j; ++q) {
      RVector t = RVector::Ones(1);
      for (int r = 0; r < j; ++r) t = RVector(Eigen::kroneckerProduct(t, r == q ? f : u));
      deriv += t;
    }
    EXPECT_LT((ax.segment(s.level_offset(j), s.level_size(j)) - deriv.cast<Complex>()).norm(), 1e-14) << j;
    pw = RVector(Eigen::kroneckerProduct(pw, u));
  }
}

TEST(BuildCarleman, SparsityAndNormBounds) {
  std::mt19937_64 rng(64);
  const QuadraticODE o = random_two_dim(rng);
  const QuadraticNorms n = quadratic_norms(o);
  for (int N = 1; N <= 5; ++N) {
    const CarlemanSystem s = build_carleman(o, N);
    const MatrixHandle h(s.A);
    const Index sp = std::max({sparsity(o.F1), sparsity(o.F2), sparsity(RMatrix(o.F0))});
    EXPECT_LE(h.sparsity(), 3 * N * sp);
    // Diagonal levels contribute max_j j mu1 = mu1; the off-diagonal parts at most N times their norms.
    EXPECT_LE(log_norm(h), n.mu1 + N * (n.f0 + n.f2) + 1e-12);
    EXPECT_LE(op_norm(h), N * (n.f0 + op_norm(CMatrix(o.F1.cast<Complex>())) + n.f2) + 1e-12);
  }
}

TEST(BuildCarleman, DimensionAndCapacity) {
  EXPECT_EQ(carleman_dimension(3, 4), 120);
  EXPECT_EQ(carleman_dimension(1, 7), 7);
  EXPECT_EQ(carleman_dimension(2, 5), 62);
  std::mt19937_64 rng(65);
  EXPECT_THROW(build_carleman(random_two_dim(rng), 20), CapacityError);
  EXPECT_THROW(build_carleman(random_two_dim(rng), 0), InputError);
}

TEST(ComputeR, Examples) {
  EXPECT_EQ(compute_R(scalar(0.0, -1.0, 0.0, 0.7)), 0.0);
  EXPECT_NEAR(compute_R(scalar(0.2, -1.0, 0.1, 1.0)), 0.3, 1e-15);
  EXPECT_NEAR(compute_R(scalar_benchmark()), 0.2, 1e-15);
}

TEST(ComputeR, DissipationGuard) {
  EXPECT_THROW(compute_R(scalar(0.2, 0.0, 0.1, 1.0)), PreconditionError);
  EXPECT_THROW(compute_R(scalar(0.2, 0.5, 0.1, 1.0)), PreconditionError);
  EXPECT_THROW(compute_R(scalar(0.2, -1.0, 0.1, 0.0)), InputError);
}

TEST(Rescale, GeometricMeanRule) {
  const Rescaling r = rescale(scalar(1.0, -3.0, 0.0, 1.0));
  EXPECT_NEAR(r.r_plus, 3.0, 1e-15);
  EXPECT_NEAR(r.r_minus, 0.0, 1e-15);
  EXPECT_NEAR(r.gamma, std::sqrt(3.0), 1e-15);
  EXPECT_FALSE(r.bisected);
  EXPECT_LT(r.gamma * r.gamma - 3.0 * r.gamma, 0.0);
  EXPECT_NEAR(r.ode.u_in(0), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.ode.F2(0, 0), std::sqrt(3.0), 1e-15);
}

TEST(Rescale, PreservesRAndDissipation) {
  std::mt19937_64 rng(66);
  for (int trial = 0; trial < 10; ++trial) {
    const QuadraticODE o = random_two_dim(rng);
    if (!(compute_R(o) < 1.0)) continue;
    const Rescaling r = rescale(o);
    EXPECT_NEAR(compute_R(r.ode), compute_R(o), 1e-12);
    const QuadraticNorms n = quadratic_norms(r.ode);
    EXPECT_GT(std::abs(n.mu1), n.f0 + n.f2);
    EXPECT_LT(r.ode.u_in.norm(), 1.0);
    EXPECT_GT(r.gamma, o.u_in.norm());
    EXPECT_LT(r.gamma, r.r_plus);
  }
}

TEST(Rescale, AlreadyRescaledInput) {
  const Rescaling first = rescale(scalar_benchmark());
  const Rescaling second = rescale(first.ode);
  const QuadraticNorms n = quadratic_norms(second.ode);
  EXPECT_GT(std::abs(n.mu1), n.f0 + n.f2);
  EXPECT_LT(second.ode.u_in.norm(), 1.0);
}

TEST(Rescale, RefusesStrongNonlinearity) {
  EXPECT_THROW(rescale(scalar(1.0, -1.0, 0.5, 1.0)), PreconditionError);
  EXPECT_THROW(rescale(scalar(1.0, 1.0, 0.0, 0.5)), PreconditionError);
}

TEST(TruncationN, Examples) {
  EXPECT_EQ(choose_truncation_N(1.0, 0.3, 0.01, 0.4, 0.5), 13);
  EXPECT_EQ(choose_truncation_N(1.0, 0.3, 0.9, 0.5, 0.5), 1);
  EXPECT_EQ(choose_truncation_N(1.0, 0.0, 0.01, 0.4, 0.5), 1);
  EXPECT_THROW(choose_truncation_N(1.0, 0.3, 0.01, 0.4, 1.0), PreconditionError);
}

TEST(TruncationN, NondecreasingAsDeltaShrinks) {
  int prev = 0;
  for (double delta = 0.5; delta > 1e-12; delta /= 3.0) {
    const int n = choose_truncation_N(2.0, 0.4, delta, 0.3, 0.6);
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(CarlemanBounds, ScalarBenchmark) {
  const Rescaling rs = rescale(scalar_benchmark());
  const double delta = 1e-4 / 4.0;
  const Trajectory ref = solve_quadratic_rk(rs.ode);
  const int N = choose_truncation_N(rs.ode.T, quadratic_norms(rs.ode).f2, delta, ref.final_norm,
                                    rs.ode.u_in.norm());
  const CarlemanSystem s = build_carleman(rs.ode, N);
  const CarlemanDiagnostics diag = verify_carleman_bounds(s, rs.ode, delta);
  ASSERT_EQ(diag.checks.size(), 3u);
  for (const BoundCheck& c : diag.checks) {
    EXPECT_TRUE(c.applicable) << c.name;
    EXPECT_TRUE(c.pass()) << c.name << " " << c.lhs << " " << c.rhs;
  }
  // ||x(t)|| sits between (1 - delta) ||u|| and (1 + delta) sqrt(N) ||u||.
  for (double t : {0.5, 2.0, 5.0}) {
    const LinearProblem lp{MatrixHandle(s.A), s.b, s.x_in, rs.ode.T, 0.5};
    const double xn = exact_linear_solution(lp, t).norm();
    QuadraticODE part = rs.ode;
    part.T = t;
    const double un = solve_quadratic_rk(part).final_norm;
    EXPECT_GE(xn, (1.0 - delta) * un);
    EXPECT_LE(xn, (1.0 + delta) * std::sqrt(double(N)) * un);
  }
}

TEST(CarlemanBounds, LinearSystemIsExact) {
  QuadraticODE o = scalar(0.0, -0.8, 0.0, 0.6, 2.0);
  for (int N : {1, 2, 4}) {
    const CarlemanDiagnostics diag = verify_carleman_bounds(build_carleman(o, N), o, 1e-6);
    EXPECT_LT(diag.eta1, 1e-9) << N;
  }
}

TEST(CarlemanBounds, NonDissipativeIsInapplicable) {
  const QuadraticODE o = scalar(0.05, 0.1, 0.0, 0.3, 1.0);
  const CarlemanDiagnostics diag = verify_carleman_bounds(build_carleman(o, 3), o, 1e-3);
  EXPECT_FALSE(diag.checks[0].applicable);
  EXPECT_FALSE(diag.checks[1].applicable);
}

TEST(EndToEnd, ScalarBenchmark) {
  const NonlinearResult r = solve_nonlinear_end_to_end(scalar_benchmark(), 1e-4);
  EXPECT_NEAR(r.R, 0.2, 1e-15);
  EXPECT_LE(r.normalized_error, 1e-4);
  EXPECT_LE(r.relative_error, 1e-4);
  EXPECT_TRUE(r.all_pass());
  EXPECT_DOUBLE_EQ(r.delta, 2.5e-5);
  EXPECT_LE(r.delta + (1 + r.delta) * r.delta_prime * std::sqrt(double(r.N)), 0.5e-4 + 1e-18);
}

TEST(EndToEnd, CoupledLevelOneProbability) {
  const NonlinearResult r = solve_nonlinear_end_to_end(coupled_benchmark(), 1e-4);
  EXPECT_LT(r.R, 1.0);
  EXPECT_GE(r.level1_probability, 1.0 / (81.0 * r.N * r.g_u * r.g_u));
  EXPECT_LE(r.normalized_error, 1e-4);
  EXPECT_TRUE(r.all_pass());
}

TEST(EndToEnd, LinearInputMatchesEmulator) {
  QuadraticODE o;
  o.F0 = RVector(2);
  o.F0 << 0.2, -0.1;
  o.F1 = RMatrix(2, 2);
  o.F1 << -1.0, 0.3, 0.1, -1.5;
  o.F2 = RMatrix::Zero(2, 4);
  o.u_in = RVector(2);
  o.u_in << 0.4, 0.1;
  o.T = 2.0;
  const NonlinearResult r = solve_nonlinear_end_to_end(o, 1e-3);
  ASSERT_EQ(r.N, 1);
  const LinearProblem lp{MatrixHandle::from_real(o.F1), o.F0.cast<Complex>(), o.u_in.cast<Complex>(), o.T,
                         2.0 * r.delta_prime};
  EmulateOptions eo;
  eo.compute_kappa = false;
  const EmulationResult e = emulate(lp, r.params, eo);
  EXPECT_LT((r.u_T_output - e.y_m).norm(), 1e-13 * e.y_m.norm());
}

TEST(EndToEnd, Refusals) {
  EXPECT_THROW(solve_nonlinear_end_to_end(scalar(1.0, -1.0, 0.5, 1.0), 1e-3), PreconditionError);
  EXPECT_THROW(solve_nonlinear_end_to_end(scalar(0.1, 0.2, 0.0, 0.5), 1e-3), PreconditionError);
  EXPECT_THROW(solve_nonlinear_end_to_end(scalar_benchmark(), 0.0), InputError);
}

}  // namespace
}  // namespace qode
