#include "qode/instances.hpp"

#include <cmath>

#include "qode/errors.hpp"

namespace qode {

CMatrix twisted_toeplitz(Index d) {
  if (d < 1) throw InputError("twisted_toeplitz: d must be >= 1");
  CMatrix a = CMatrix::Zero(d, d);
  for (Index j = 1; j <= d; ++j) a(j - 1, j - 1) = Complex(-static_cast<double>(j), 0.0);
  for (Index j = 1; j < d; ++j) {
    a(j - 1, j) = Complex(0.0, static_cast<double>(j));
    a(j, j - 1) = Complex(0.0, static_cast<double>(j));
  }
  return a / static_cast<double>(d);
}

CMatrix transient_example() {
  CMatrix a(2, 2);
  a << -2.0, 10.0, 0.0, -2.0;
  return a;
}

CMatrix contractive_example() {
  CMatrix a(2, 2);
  a << -2.0, 1.0, 0.0, -2.0;
  return a;
}

namespace {

CMatrix gaussian(std::mt19937_64& rng, Index d) {
  std::normal_distribution<double> g;
  CMatrix m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0 * d);
  return m;
}

CVector gaussian_vec(std::mt19937_64& rng, Index d) {
  std::normal_distribution<double> g;
  CVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

}  // namespace

CMatrix random_stable_matrix(std::mt19937_64& rng, Index d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double pick = u(rng);
  const double margin = 0.02 + 0.48 * u(rng);
  CMatrix a;
  if (pick < 0.6) {
    a = gaussian(rng, d);
    const double alpha = spectral_scalars(a).alpha;
    a.diagonal().array() -= alpha + margin;
  } else if (pick < 0.85) {
    // Upper triangular with a heavy strict upper part.
    a = gaussian(rng, d).triangularView<Eigen::Upper>();
    a.triangularView<Eigen::StrictlyUpper>() *= Complex(1.0 + 4.0 * u(rng));
    for (Index i = 0; i < d; ++i) a(i, i) = Complex(-margin - u(rng), 2.0 * u(rng) - 1.0);
  } else {
    const CMatrix q = gaussian(rng, d).householderQr().householderQ();
    CVector lam(d);
    for (Index i = 0; i < d; ++i) lam(i) = Complex(-margin - u(rng), 2.0 * u(rng) - 1.0);
    a = q * lam.asDiagonal() * q.adjoint();
  }
  return a;
}

LinearProblem random_stable_problem(std::mt19937_64& rng, const RandomProblemOptions& opt) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<Index> dd(1, opt.d_max);
  const Index d = dd(rng);
  CMatrix a = random_stable_matrix(rng, d);
  const double T = 0.5 + 2.5 * u(rng);
  const double ta = 0.3 + (opt.ta_max - 0.3) * u(rng);
  a *= ta / (T * op_norm(a));
  CVector x0 = gaussian_vec(rng, d);
  CVector b = CVector::Zero(d);
  if (u(rng) < 0.7) b = gaussian_vec(rng, d) * u(rng);
  const double eps = std::exp(std::log(opt.eps_min) + (std::log(opt.eps_max) - std::log(opt.eps_min)) * u(rng));
  return LinearProblem{MatrixHandle(a), b, x0, T, eps};
}

QuadraticODE scalar_benchmark() {
  QuadraticODE o;
  o.F0 = RVector::Constant(1, 0.05);
  o.F1 = RMatrix::Constant(1, 1, -1.0);
  o.F2 = RMatrix::Constant(1, 1, 0.2);
  o.u_in = RVector::Constant(1, 0.5);
  o.T = 5.0;
  return o;
}

QuadraticODE coupled_benchmark() {
  QuadraticODE o;
  o.F0 = RVector::Zero(2);
  o.F0 << 0.002, 0.001;
  o.F1 = RMatrix::Zero(2, 2);
  o.F1 << -1.0, 0.0, 0.0, -2.0;
  o.F2 = RMatrix::Zero(2, 4);
  o.F2 << 0.001, 0.0, 0.0, 0.0005, 0.0, 0.0005, 0.0005, 0.001;
  o.u_in = RVector::Zero(2);
  o.u_in << 0.4, 0.3;
  o.T = 1.0;
  return o;
}

}  // namespace qode
