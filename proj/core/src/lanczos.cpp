#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qode/errors.hpp"
#include "qode/linalg.hpp"

namespace qode {

LanczosResult lanczos_max_eigenvalue(Index n, const std::function<CVector(const CVector&)>& op,
                                     const LanczosOptions& opt) {
  LanczosResult res;
  if (n == 0) return res;
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g;
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  v.normalize();

  const int kmax = static_cast<int>(std::min<Index>(n, opt.max_iter));
  CMatrix basis(n, kmax);
  std::vector<double> alpha, beta;
  double theta = 0.0;
  for (int j = 0; j < kmax; ++j) {
    basis.col(j) = v;
    CVector w = op(v);
    if (!w.allFinite()) throw NumericError("lanczos: operator produced non-finite values");
    const double a = v.dot(w).real();
    alpha.push_back(a);
    w -= a * v;
    if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
    // Full reorthogonalization, twice is enough.
    const auto q = basis.leftCols(j + 1);
    for (int pass = 0; pass < 2; ++pass) {
      const CVector c = q.adjoint() * w;
      w.noalias() -= q * c;
    }
    const double b = w.norm();

    const int m = j + 1;
    // The tridiagonal eigensolve is O(m^3); past the first steps only test
    // convergence every fifth iteration.
    if (m > 10 && m % 5 != 0 && m < kmax && b > 0.0) {
      beta.push_back(b);
      v = w / b;
      continue;
    }
    RVector diag = Eigen::Map<RVector>(alpha.data(), m);
    RVector sub(std::max(m - 1, 0));
    for (int i = 0; i + 1 < m; ++i) sub(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<RMatrix> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    theta = tri.eigenvalues()(m - 1);
    const double resid = b * std::abs(tri.eigenvectors()(m - 1, m - 1));
    res.iterations = m;
    const double scale = std::max(std::abs(theta), std::abs(tri.eigenvalues()(0)));
    if (resid <= opt.tol * std::max(std::abs(theta), 1e-300) ||
        b <= 1e-14 * std::max(scale, 1e-300)) {
      res.converged = true;
      break;
    }
    beta.push_back(b);
    v = w / b;
  }
  if (res.iterations == n) res.converged = true;
  res.value = theta;
  return res;
}

}  // namespace qode
