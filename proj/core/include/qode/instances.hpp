#pragma once

#include <cstdint>
#include <random>

#include "qode/ode_reference.hpp"

namespace qode {

// (1/d) tridiag(i j, -j, i j) for j = 1..d-1 in both off-diagonal positions.
CMatrix twisted_toeplitz(Index d);

// [[-2, 10], [0, -2]] and [[-2, 1], [0, -2]].
CMatrix transient_example();
CMatrix contractive_example();

struct RandomProblemOptions {
  Index d_max = 6;
  double ta_max = 10.0;  // bound on T ||A||
  double eps_min = 1e-6;
  double eps_max = 1e-2;
};

// Stable (alpha < 0) complex matrix of size d. Mix of shifted Gaussian,
// strongly non-normal triangular and normal instances.
CMatrix random_stable_matrix(std::mt19937_64& rng, Index d);

LinearProblem random_stable_problem(std::mt19937_64& rng, const RandomProblemOptions& opt = {});

// du/dt = 0.2 u^2 - u + 0.05, u(0) = 0.5, T = 5.
QuadraticODE scalar_benchmark();
// d = 2, F1 = diag(-1, -2), weak quadratic coupling.
QuadraticODE coupled_benchmark();

}  // namespace qode
