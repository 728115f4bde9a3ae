#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include "qode/errors.hpp"
#include "qode/linalg.hpp"

namespace qode {

namespace {

void require_square_finite(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols()) throw InputError(std::string(who) + ": matrix must be square");
  if (!a.allFinite()) throw InputError(std::string(who) + ": matrix has a non-finite entry");
  if (a.rows() > kDenseLimit)
    throw CapacityError(std::string(who) + ": d=" + std::to_string(a.rows()) +
                        " above dense limit");
}

RVector singular_values(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return RVector();
  // One-sided Jacobi keeps tiny singular values accurate; BDCSVD for speed above.
  if (std::max(a.rows(), a.cols()) <= 200) {
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues();
  }
  Eigen::BDCSVD<CMatrix> svd(a);
  if (svd.info() != Eigen::Success) throw NumericError("SVD did not converge");
  return svd.singularValues();
}

}  // namespace

double log_norm(const CMatrix& a) {
  require_square_finite(a, "log_norm");
  if (a.rows() == 0) return -std::numeric_limits<double>::infinity();
  const CMatrix h = (a + a.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("log_norm: eigensolver did not converge");
  return es.eigenvalues().maxCoeff();
}

double log_norm(const MatrixHandle& a) {
  if (a.dim() <= kDenseLimit) return log_norm(a.dense());
  // lambda_max(H) = lambda_max(H + c I) - c with c making the shifted operator PSD.
  const SparseCMatrix s = a.sparse();
  const SparseCMatrix h = (SparseCMatrix(s.adjoint()) + s) * Complex(0.5);
  double shift = 0.0;
  for (Index i = 0; i < h.outerSize(); ++i) {
    double row = 0.0;
    for (SparseCMatrix::InnerIterator it(h, i); it; ++it) row += std::abs(it.value());
    shift = std::max(shift, row);
  }
  auto op = [&](const CVector& x) -> CVector { return h * x + shift * x; };
  return lanczos_max_eigenvalue(a.dim(), op).value - shift;
}

double log_norm(const RMatrix& a) { return log_norm(CMatrix(a.cast<Complex>())); }

double op_norm(const CMatrix& a) {
  if (!a.allFinite()) throw InputError("op_norm: matrix has a non-finite entry");
  if (a.size() == 0) return 0.0;
  if (std::min(a.rows(), a.cols()) <= 64) return singular_values(a)(0);
  // Only the largest singular value is needed, and the largest eigenvalue
  // of the Gram matrix carries it to full relative precision.
  const CMatrix gram = a.rows() >= a.cols() ? CMatrix(a.adjoint() * a) : CMatrix(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("op_norm: eigensolver did not converge");
  return std::sqrt(std::max(es.eigenvalues()(es.eigenvalues().size() - 1), 0.0));
}

double op_norm(const MatrixHandle& a) {
  if (a.dim() <= ConditionOptions{}.dense_limit) return op_norm(a.dense());
  const SparseCMatrix s = a.sparse();
  const SparseCMatrix sa = s.adjoint();
  auto op = [&](const CVector& x) -> CVector { return sa * (s * x); };
  return std::sqrt(lanczos_max_eigenvalue(a.dim(), op).value);
}

CVector eigenvalues(const CMatrix& a) {
  require_square_finite(a, "eigenvalues");
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalues: QR iteration did not converge");
  return es.eigenvalues();
}

SpectralScalars spectral_scalars(const CMatrix& a) {
  SpectralScalars s;
  if (a.rows() == 0) return s;
  const CVector ev = eigenvalues(a);
  s.alpha = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < ev.size(); ++i) {
    s.alpha = std::max(s.alpha, ev(i).real());
    s.rho = std::max(s.rho, std::abs(ev(i)));
  }
  s.op_norm = op_norm(a);
  return s;
}

SpectralScalars spectral_scalars(const MatrixHandle& a) { return spectral_scalars(a.dense()); }

const char* to_string(ConditionMethod m) noexcept {
  return m == ConditionMethod::dense_svd ? "dense_svd" : "lanczos";
}

namespace {

ConditionEstimate finish(double smax, double smin, ConditionMethod method, int iters) {
  ConditionEstimate c;
  c.sigma_max = smax;
  c.sigma_min = smin;
  c.method = method;
  c.iterations = iters;
  c.singular = !(smin >= kSingularRatio * smax) || smax == 0.0;
  c.kappa = c.singular ? std::numeric_limits<double>::infinity() : smax / smin;
  return c;
}

}  // namespace

ConditionEstimate condition_number(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("condition_number: matrix must be square");
  if (m.rows() > kDenseLimit) throw CapacityError("condition_number: dense path above limit");
  if (!m.allFinite()) throw InputError("condition_number: matrix has a non-finite entry");
  const RVector sv = singular_values(m);
  if (sv.size() == 0) return finish(0.0, 0.0, ConditionMethod::dense_svd, 0);
  return finish(sv(0), sv(sv.size() - 1), ConditionMethod::dense_svd, 0);
}

struct SparseOperator::Lu {
  Eigen::SparseLU<Eigen::SparseMatrix<Complex, Eigen::ColMajor>> lu;
};

SparseOperator::SparseOperator(SparseCMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw InputError("SparseOperator: matrix must be square");
  m_.makeCompressed();
  adj_ = m_.adjoint();
  lower_ = true;
  for (Index i = 0; i < m_.outerSize() && lower_; ++i) {
    bool diag = false;
    for (SparseCMatrix::InnerIterator it(m_, i); it; ++it) {
      if (it.col() > i) lower_ = false;
      if (it.col() == i && it.value() != Complex(0.0)) diag = true;
    }
    if (!diag) lower_ = false;
  }
  if (!lower_) {
    lu_ = std::make_unique<Lu>();
    Eigen::SparseMatrix<Complex, Eigen::ColMajor> cm(m_);
    lu_->lu.compute(cm);
    if (lu_->lu.info() != Eigen::Success)
      throw NumericError("SparseOperator: LU factorization failed (singular matrix?)");
  }
}

SparseOperator::~SparseOperator() = default;

CVector SparseOperator::apply(const CVector& x) const { return m_ * x; }
CVector SparseOperator::apply_adjoint(const CVector& x) const { return adj_ * x; }

CVector SparseOperator::solve(const CVector& r) const {
  if (lower_) return m_.triangularView<Eigen::Lower>().solve(r);
  return lu_->lu.solve(r);
}

CVector SparseOperator::solve_adjoint(const CVector& r) const {
  if (lower_) return adj_.triangularView<Eigen::Upper>().solve(r);
  // (M^dagger)^{-1} r = conj(M^{-T} conj(r)).
  const CVector c = r.conjugate();
  CVector y = lu_->lu.transpose().solve(c);
  return y.conjugate();
}

ConditionEstimate condition_number(const LinearOperator& op, const LanczosOptions& opt) {
  const Index n = op.dim();
  if (n == 0) return finish(0.0, 0.0, ConditionMethod::lanczos, 0);
  auto gram = [&](const CVector& x) -> CVector { return op.apply_adjoint(op.apply(x)); };
  auto inv_gram = [&](const CVector& x) -> CVector { return op.solve(op.solve_adjoint(x)); };
  const LanczosResult hi = lanczos_max_eigenvalue(n, gram, opt);
  const LanczosResult lo = lanczos_max_eigenvalue(n, inv_gram, opt);
  const double smax = std::sqrt(std::max(hi.value, 0.0));
  const double smin = lo.value > 0.0 ? 1.0 / std::sqrt(lo.value) : 0.0;
  return finish(smax, smin, ConditionMethod::lanczos, hi.iterations + lo.iterations);
}

ConditionEstimate condition_number(const MatrixHandle& m, const ConditionOptions& opt) {
  if (m.dim() <= opt.dense_limit) return condition_number(m.dense());
  const SparseOperator op(m.sparse());
  return condition_number(op, opt.lanczos);
}

EigvecCondition eigvec_condition(const CMatrix& a) {
  require_square_finite(a, "eigvec_condition");
  EigvecCondition out;
  if (a.rows() == 0) return out;
  Eigen::ComplexEigenSolver<CMatrix> es(a, true);
  if (es.info() != Eigen::Success)
    throw NumericError("eigvec_condition: QR iteration did not converge");
  CMatrix v = es.eigenvectors();
  for (Index j = 0; j < v.cols(); ++j) {
    const double nrm = v.col(j).norm();
    if (nrm == 0.0) throw NumericError("eigvec_condition: zero eigenvector");
    Index arg = 0;
    v.col(j).cwiseAbs().maxCoeff(&arg);
    const Complex phase = v(arg, j) / std::abs(v(arg, j));
    v.col(j) *= std::conj(phase) / nrm;
  }
  const RVector sv = singular_values(v);
  out.sigma_max = sv(0);
  out.sigma_min = sv(sv.size() - 1);
  out.diagonalizable = out.sigma_min >= kDiagonalizableRatio * out.sigma_max;
  out.kappa = out.sigma_min > 0.0 ? out.sigma_max / out.sigma_min
                                  : std::numeric_limits<double>::infinity();
  return out;
}

double schur_departure(const CMatrix& a) {
  require_square_finite(a, "schur_departure");
  if (a.rows() == 0) return 0.0;
  Eigen::ComplexSchur<CMatrix> schur(a);
  if (schur.info() != Eigen::Success)
    throw NumericError("schur_departure: Schur iteration did not converge");
  CMatrix n = schur.matrixT().triangularView<Eigen::StrictlyUpper>();
  return op_norm(n);
}

}  // namespace qode
