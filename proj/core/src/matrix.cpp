#include "qode/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qode/errors.hpp"

namespace qode {

namespace {

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

MatrixHandle::MatrixHandle(CMatrix dense) {
  if (dense.rows() != dense.cols())
    throw InputError("matrix must be square, got " + std::to_string(dense.rows()) + "x" +
                     std::to_string(dense.cols()));
  std::vector<Index> col_count(dense.cols(), 0);
  for (Index i = 0; i < dense.rows(); ++i) {
    Index row_count = 0;
    for (Index j = 0; j < dense.cols(); ++j) {
      const Complex z = dense(i, j);
      if (!finite(z)) throw InputError("matrix has a non-finite entry");
      if (z != Complex(0.0)) {
        ++row_count;
        ++col_count[j];
      }
    }
    s_r_ = std::max(s_r_, row_count);
  }
  for (Index c : col_count) s_c_ = std::max(s_c_, c);
  dim_ = dense.rows();
  storage_ = std::move(dense);
}

MatrixHandle::MatrixHandle(SparseCMatrix sparse) {
  if (sparse.rows() != sparse.cols())
    throw InputError("matrix must be square, got " + std::to_string(sparse.rows()) + "x" +
                     std::to_string(sparse.cols()));
  sparse.makeCompressed();
  std::vector<Index> col_count(sparse.cols(), 0);
  for (Index i = 0; i < sparse.outerSize(); ++i) {
    Index row_count = 0;
    for (SparseCMatrix::InnerIterator it(sparse, i); it; ++it) {
      if (!finite(it.value())) throw InputError("matrix has a non-finite entry");
      ++row_count;
      ++col_count[it.col()];
    }
    s_r_ = std::max(s_r_, row_count);
  }
  for (Index c : col_count) s_c_ = std::max(s_c_, c);
  dim_ = sparse.rows();
  storage_ = std::move(sparse);
}

MatrixHandle MatrixHandle::from_real(const RMatrix& m) { return MatrixHandle(CMatrix(m.cast<Complex>())); }

CMatrix MatrixHandle::dense() const {
  if (dim_ > kDenseLimit)
    throw CapacityError("dense decomposition requested for d=" + std::to_string(dim_) +
                        " above limit " + std::to_string(kDenseLimit));
  if (const auto* m = std::get_if<CMatrix>(&storage_)) return *m;
  return CMatrix(std::get<SparseCMatrix>(storage_));
}

SparseCMatrix MatrixHandle::sparse() const {
  if (const auto* m = std::get_if<SparseCMatrix>(&storage_)) return *m;
  return to_sparse(std::get<CMatrix>(storage_));
}

CVector MatrixHandle::apply(const CVector& x) const {
  if (const auto* m = std::get_if<SparseCMatrix>(&storage_)) return *m * x;
  return std::get<CMatrix>(storage_) * x;
}

SparseCMatrix to_sparse(const CMatrix& m, double drop_tol) {
  std::vector<Eigen::Triplet<Complex>> trip;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > drop_tol) trip.emplace_back(i, j, m(i, j));
  SparseCMatrix s(m.rows(), m.cols());
  s.setFromTriplets(trip.begin(), trip.end());
  s.makeCompressed();
  return s;
}

}  // namespace qode
