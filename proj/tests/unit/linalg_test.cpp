#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qode/errors.hpp"
#include "qode/instances.hpp"
#include "qode/linalg.hpp"
#include "support.hpp"

namespace qode {
namespace {

using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

// Truncated power series in extended precision.
CMatrix series_exp(const CMatrix& a, double t, int order) {
  const LMatrix al = (a * t).cast<std::complex<long double>>();
  LMatrix term = LMatrix::Identity(a.rows(), a.cols());
  LMatrix sum = term;
  for (int j = 1; j <= order; ++j) {
    term = term * al / static_cast<long double>(j);
    sum += term;
  }
  CMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = Complex(double(sum(i, j).real()), double(sum(i, j).imag()));
  return out;
}

double power_iteration_norm(const CMatrix& a) {
  std::mt19937_64 rng(99);
  CVector v = test::random_vector(rng, a.cols()).normalized();
  double s = 0.0;
  for (int it = 0; it < 5000; ++it) {
    CVector w = a.adjoint() * (a * v);
    const double n = w.norm();
    v = w / n;
    if (std::abs(n - s) <= 1e-15 * n) break;
    s = n;
  }
  return std::sqrt((a * v).squaredNorm());
}

TEST(MatExp, ZeroMatrixGivesIdentity) {
  for (Index d : {1, 3, 7}) EXPECT_EQ(mat_exp(CMatrix::Zero(d, d), 7.0), CMatrix::Identity(d, d));
}

TEST(MatExp, DiagonalCase) {
  const CMatrix a = CMatrix::Identity(2, 2) * -2.0;
  EXPECT_LT((mat_exp(a, 1.0) - CMatrix::Identity(2, 2) * std::exp(-2.0)).norm(), 1e-15);
}

TEST(MatExp, TransientMatchesExtendedPrecisionSeries) {
  const CMatrix a = transient_example();
  const CMatrix ref = series_exp(a, 1.0, 60);
  EXPECT_LT((mat_exp(a, 1.0) - ref).norm() / ref.norm(), 1e-13);
}

TEST(MatExp, RandomMatricesAcrossScalesMatchSeries) {
  std::mt19937_64 rng(1);
  for (double scale : {1e-3, 0.3, 2.0, 6.0}) {
    const CMatrix a = test::random_complex(rng, 5, 5) * (scale / 3.0);
    const CMatrix ref = series_exp(a, 1.0, 120);
    EXPECT_LT((mat_exp(a) - ref).norm() / ref.norm(), 1e-12) << "scale " << scale;
  }
}

TEST(MatExp, SemigroupProperty) {
  std::mt19937_64 rng(2);
  const CMatrix a = test::random_stable(rng, 6);
  const CMatrix lhs = mat_exp(a, 0.7) * mat_exp(a, 1.3);
  EXPECT_LT((lhs - mat_exp(a, 2.0)).norm(), 1e-12 * mat_exp(a, 2.0).norm());
}

TEST(MatExp, RejectsNegativeTimeAndNonFinite) {
  EXPECT_THROW(mat_exp(CMatrix::Identity(2, 2), -1.0), InputError);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(mat_exp(bad, 1.0), InputError);
}

TEST(Phi1, ZeroMatrix) {
  EXPECT_LT((phi1(CMatrix::Zero(3, 3), 3.0) - 3.0 * CMatrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(Phi1, ScalarClosedForm) {
  const CMatrix a = CMatrix::Constant(1, 1, -1.0);
  EXPECT_NEAR(phi1(a, 1.0)(0, 0).real(), 1.0 - std::exp(-1.0), 1e-15);
}

TEST(Phi1, NilpotentSeries) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  CMatrix want(2, 2);
  want << 2.0, 2.0, 0.0, 2.0;
  EXPECT_LT((phi1(a, 2.0) - want).norm(), 1e-14);
}

TEST(Phi1, InvertibleMatchesInverseFormula) {
  std::mt19937_64 rng(3);
  const CMatrix a = test::random_stable(rng, 5, 0.5);
  const CMatrix want = a.inverse() * (mat_exp(a, 1.5) - CMatrix::Identity(5, 5));
  EXPECT_LT((phi1(a, 1.5) - want).norm(), 1e-12 * want.norm());
}

TEST(LogNorm, ExamplePair) {
  EXPECT_NEAR(log_norm(contractive_example()), -1.5, 1e-14);
  EXPECT_NEAR(log_norm(transient_example()), 3.0, 1e-14);
}

TEST(LogNorm, TwistedToeplitzIsMinusOneOverD) {
  for (Index d : {2, 10, 20, 57}) EXPECT_NEAR(log_norm(twisted_toeplitz(d)), -1.0 / double(d), 1e-14) << d;
}

TEST(LogNorm, SparseHandleAgreesWithDense) {
  std::mt19937_64 rng(4);
  const CMatrix a = test::random_stable(rng, 30);
  const MatrixHandle s(to_sparse(a));
  EXPECT_NEAR(log_norm(s), log_norm(a), 1e-12);
}

TEST(SpectralScalars, ExamplePairHaveAlphaMinusTwo) {
  EXPECT_NEAR(spectral_scalars(transient_example()).alpha, -2.0, 1e-12);
  EXPECT_NEAR(spectral_scalars(contractive_example()).alpha, -2.0, 1e-12);
}

TEST(SpectralScalars, Identity) {
  const SpectralScalars s = spectral_scalars(CMatrix::Identity(4, 4));
  EXPECT_NEAR(s.alpha, 1.0, 1e-15);
  EXPECT_NEAR(s.rho, 1.0, 1e-15);
  EXPECT_NEAR(s.op_norm, 1.0, 1e-15);
}

TEST(SpectralScalars, OpNormMatchesPowerIteration) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix a = test::random_complex(rng, 8, 8);
    EXPECT_LT(test::rel(spectral_scalars(a).op_norm, power_iteration_norm(a)), 1e-8);
  }
}

TEST(SpectralScalars, OrderingInvariants) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = test::random_complex(rng, 6, 6);
    const SpectralScalars s = spectral_scalars(a);
    EXPECT_LE(s.alpha, log_norm(a) + 1e-12);
    EXPECT_LE(s.alpha, s.rho + 1e-12);
    EXPECT_LE(s.rho, s.op_norm * (1 + 1e-12));
    EXPECT_LE(log_norm(a), s.op_norm * (1 + 1e-12));
  }
}

TEST(SpectralScalars, LargeGramPathMatchesSvd) {
  std::mt19937_64 rng(7);
  const CMatrix a = test::random_complex(rng, 150, 150);
  Eigen::JacobiSVD<CMatrix> svd(a);
  EXPECT_LT(test::rel(op_norm(a), svd.singularValues()(0)), 1e-13);
}

TEST(ConditionNumber, UnitaryIsOne) {
  std::mt19937_64 rng(8);
  EXPECT_NEAR(condition_number(test::random_unitary(rng, 12)).kappa, 1.0, 1e-12);
}

TEST(ConditionNumber, Diagonal) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 0.5;
  EXPECT_NEAR(condition_number(a).kappa, 4.0, 1e-14);
}

TEST(ConditionNumber, RandomAgainstGramEigenOracle) {
  std::mt19937_64 rng(9);
  const CMatrix a = test::random_complex(rng, 50, 50);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  const double want = std::sqrt(es.eigenvalues()(49) / es.eigenvalues()(0));
  EXPECT_LT(test::rel(condition_number(a).kappa, want), 1e-8);
}

TEST(ConditionNumber, SingularFlagged) {
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  const ConditionEstimate c = condition_number(a);
  EXPECT_TRUE(c.singular);
  EXPECT_TRUE(std::isinf(c.kappa));
}

TEST(ConditionNumber, LanczosAgreesWithDense) {
  std::mt19937_64 rng(10);
  CMatrix a = test::random_complex(rng, 120, 120) / std::sqrt(240.0);
  a.diagonal().array() += 3.0;
  const MatrixHandle h(to_sparse(a));
  ConditionOptions dense;
  dense.dense_limit = 1000;
  ConditionOptions lanczos;
  lanczos.dense_limit = 0;
  const ConditionEstimate cd = condition_number(h, dense);
  const ConditionEstimate cl = condition_number(h, lanczos);
  EXPECT_EQ(cd.method, ConditionMethod::dense_svd);
  EXPECT_EQ(cl.method, ConditionMethod::lanczos);
  EXPECT_LT(test::rel(cl.kappa, cd.kappa), 1e-8);
}

TEST(SparseOperator, SolvesAndAdjointsAreConsistent) {
  std::mt19937_64 rng(11);
  for (bool lower : {true, false}) {
    CMatrix a = test::random_complex(rng, 20, 20) * 0.1;
    if (lower) a = CMatrix(a.triangularView<Eigen::Lower>());
    a.diagonal().array() += 2.0;
    const SparseOperator op(to_sparse(a));
    EXPECT_EQ(op.lower_triangular(), lower);
    const CVector x = test::random_vector(rng, 20), y = test::random_vector(rng, 20);
    EXPECT_LT((op.apply(x) - a * x).norm(), 1e-13);
    EXPECT_LT((op.solve(op.apply(x)) - x).norm(), 1e-12);
    EXPECT_LT((op.solve_adjoint(op.apply_adjoint(x)) - x).norm(), 1e-12);
    EXPECT_NEAR(std::abs(y.dot(op.apply(x)) - op.apply_adjoint(y).dot(x)), 0.0, 1e-12);
  }
}

TEST(EigvecCondition, NormalMatrixIsOne) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = -1.0;
  a(1, 1) = -2.0;
  EXPECT_NEAR(eigvec_condition(a).kappa, 1.0, 1e-14);
  std::mt19937_64 rng(12);
  const CMatrix q = test::random_unitary(rng, 8);
  CMatrix h = q * test::random_complex(rng, 8, 1).real().cast<Complex>().asDiagonal() * q.adjoint();
  EXPECT_NEAR(eigvec_condition(h).kappa, 1.0, 1e-8);
}

TEST(EigvecCondition, TwistedToeplitzReference) {
  EXPECT_LT(test::rel(eigvec_condition(twisted_toeplitz(10)).kappa, 17.5352873756155), 1e-3);
  EXPECT_LT(test::rel(eigvec_condition(twisted_toeplitz(50)).kappa, 24302637.0004239), 5e-2);
}

TEST(EigvecCondition, JordanBlockNotDiagonalizable) {
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 1) = 1.0;
  a(1, 2) = 1.0;
  EXPECT_FALSE(eigvec_condition(a).diagonalizable);
}

TEST(SchurDeparture, NormalIsZero) {
  std::mt19937_64 rng(13);
  const CMatrix q = test::random_unitary(rng, 6);
  const CMatrix a = q * test::random_vector(rng, 6).asDiagonal() * q.adjoint();
  EXPECT_LT(schur_departure(a), 1e-12);
}

TEST(SchurDeparture, TransientExample) { EXPECT_NEAR(schur_departure(transient_example()), 10.0, 1e-12); }

TEST(SchurDeparture, FrobeniusIdentitySandwich) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = test::random_complex(rng, 6, 6);
    const double frob = std::sqrt(a.squaredNorm() - eigenvalues(a).squaredNorm());
    // ||N||_2 <= ||N||_F <= sqrt(rank N) ||N||_2, rank N <= d - 1.
    const double n2 = schur_departure(a);
    EXPECT_LE(n2, frob * (1 + 1e-8));
    EXPECT_LE(frob, std::sqrt(5.0) * n2 * (1 + 1e-8));
  }
}

TEST(MatrixHandle, ValidatesInput) {
  EXPECT_THROW(MatrixHandle(CMatrix::Zero(2, 3)), InputError);
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(MatrixHandle{bad}, InputError);
}

TEST(MatrixHandle, SparsityAndApply) {
  const CMatrix a = twisted_toeplitz(12);
  const MatrixHandle h(to_sparse(a));
  EXPECT_EQ(h.sparsity(), 3);
  std::mt19937_64 rng(15);
  const CVector x = test::random_vector(rng, 12);
  EXPECT_LT((h.apply(x) - a * x).norm(), 1e-14);
  EXPECT_EQ(h.dense(), a);
}

TEST(MatrixHandle, DenseAboveLimitIsCapacityError) {
  SparseCMatrix s(kDenseLimit + 1, kDenseLimit + 1);
  s.setIdentity();
  const MatrixHandle h(s);
  EXPECT_THROW(h.dense(), CapacityError);
}

}  // namespace
}  // namespace qode
