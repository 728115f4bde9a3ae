#pragma once

#include <complex>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qode {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using SparseCMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// Largest dimension for which dense decompositions are attempted.
inline constexpr Index kDenseLimit = 4096;

// Square complex matrix in dense or CSR storage. Immutable after
// construction, so safe to share across threads.
class MatrixHandle {
 public:
  explicit MatrixHandle(CMatrix dense);
  explicit MatrixHandle(SparseCMatrix sparse);
  static MatrixHandle from_real(const RMatrix& m);

  Index dim() const { return dim_; }
  // Maximum number of nonzeros in any row / column.
  Index row_sparsity() const { return s_r_; }
  Index col_sparsity() const { return s_c_; }
  Index sparsity() const { return s_r_ > s_c_ ? s_r_ : s_c_; }
  bool is_sparse() const { return std::holds_alternative<SparseCMatrix>(storage_); }

  // Throws CapacityError above kDenseLimit.
  CMatrix dense() const;
  SparseCMatrix sparse() const;

  // y = M x without densifying.
  CVector apply(const CVector& x) const;

 private:
  std::variant<CMatrix, SparseCMatrix> storage_;
  Index dim_ = 0;
  Index s_r_ = 0;
  Index s_c_ = 0;
};

SparseCMatrix to_sparse(const CMatrix& m, double drop_tol = 0.0);

}  // namespace qode
