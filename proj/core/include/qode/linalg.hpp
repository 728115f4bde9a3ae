#pragma once

#include <functional>
#include <memory>
#include <string>

#include "qode/matrix.hpp"

namespace qode {

// e^{A t} by Pade scaling-and-squaring (orders 3..13). Requires t >= 0.
CMatrix mat_exp(const CMatrix& a, double t = 1.0);
CMatrix mat_exp(const MatrixHandle& a, double t = 1.0);

// phi1(A, t) = int_0^t e^{A s} ds, read off exp([[A, I], [0, 0]] t).
// Well defined for singular A.
CMatrix phi1(const CMatrix& a, double t);
CMatrix phi1(const MatrixHandle& a, double t);

// Largest eigenvalue of (A + A^dagger) / 2.
double log_norm(const CMatrix& a);
double log_norm(const MatrixHandle& a);
double log_norm(const RMatrix& a);

// Largest singular value.
double op_norm(const CMatrix& a);
double op_norm(const MatrixHandle& a);

CVector eigenvalues(const CMatrix& a);

struct SpectralScalars {
  double alpha = 0.0;    // max Re(lambda)
  double rho = 0.0;      // max |lambda|
  double op_norm = 0.0;  // ||A||_2
};

SpectralScalars spectral_scalars(const CMatrix& a);
SpectralScalars spectral_scalars(const MatrixHandle& a);

enum class ConditionMethod { dense_svd, lanczos };

const char* to_string(ConditionMethod m) noexcept;

struct ConditionEstimate {
  double kappa = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  // sigma_min < 1e-14 sigma_max; kappa is then +inf.
  bool singular = false;
  ConditionMethod method = ConditionMethod::dense_svd;
  int iterations = 0;
};

inline constexpr double kSingularRatio = 1e-14;

ConditionEstimate condition_number(const CMatrix& m);

// Square operator with cheap solves. Used by the iterative condition
// estimate, where both M^dagger M and M^{-1} M^{-dagger} are needed.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Index dim() const = 0;
  virtual CVector apply(const CVector& x) const = 0;
  virtual CVector apply_adjoint(const CVector& x) const = 0;
  virtual CVector solve(const CVector& r) const = 0;
  virtual CVector solve_adjoint(const CVector& r) const = 0;
};

// CSR operator. Lower triangular matrices are solved by substitution,
// anything else through a sparse LU factorization.
class SparseOperator final : public LinearOperator {
 public:
  explicit SparseOperator(SparseCMatrix m);
  ~SparseOperator() override;
  Index dim() const override { return m_.rows(); }
  CVector apply(const CVector& x) const override;
  CVector apply_adjoint(const CVector& x) const override;
  CVector solve(const CVector& r) const override;
  CVector solve_adjoint(const CVector& r) const override;
  bool lower_triangular() const { return lower_; }

 private:
  struct Lu;
  SparseCMatrix m_;
  SparseCMatrix adj_;
  bool lower_ = false;
  std::unique_ptr<Lu> lu_;
};

struct LanczosOptions {
  int max_iter = 300;
  // Ritz residual relative to the Ritz value; the eigenvalue error is
  // roughly its square over the spectral gap.
  double tol = 1e-8;
  unsigned seed = 0x5eedu;
};

struct LanczosResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest eigenvalue of a Hermitian positive semidefinite operator, full
// reorthogonalization.
LanczosResult lanczos_max_eigenvalue(Index n, const std::function<CVector(const CVector&)>& op,
                                     const LanczosOptions& opt = {});

ConditionEstimate condition_number(const LinearOperator& op, const LanczosOptions& opt = {});

struct ConditionOptions {
  // Dense SVD up to this dimension, Lanczos above.
  Index dense_limit = 256;
  LanczosOptions lanczos;
};

ConditionEstimate condition_number(const MatrixHandle& m, const ConditionOptions& opt = {});

struct EigvecCondition {
  double kappa = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  // False when sigma_min(V) < 1e-13 sigma_max(V). kappa is still reported.
  bool diagonalizable = true;
};

inline constexpr double kDiagonalizableRatio = 1e-13;

// Condition number of the eigenvector matrix with unit 2-norm columns.
EigvecCondition eigvec_condition(const CMatrix& a);

// ||N||_2 where A = Q (D + N) Q^dagger is a complex Schur form.
double schur_departure(const CMatrix& a);

}  // namespace qode
