#pragma once

#include <cmath>
#include <random>

#include "qode/matrix.hpp"

namespace qode::test {

inline CMatrix random_complex(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline CVector random_vector(std::mt19937_64& rng, Index n) {
  return random_complex(rng, n, 1).col(0);
}

// Stable, usually non-normal: shifts the spectrum left of -margin.
inline CMatrix random_stable(std::mt19937_64& rng, Index d, double margin = 0.1) {
  CMatrix a = random_complex(rng, d, d) / std::sqrt(2.0 * d);
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  a.diagonal().array() -= es.eigenvalues().real().maxCoeff() + margin;
  return a;
}

inline CMatrix random_unitary(std::mt19937_64& rng, Index d) {
  return random_complex(rng, d, d).householderQr().householderQ();
}

inline double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace qode::test
