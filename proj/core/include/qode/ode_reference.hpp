#pragma once

#include <vector>

#include "qode/errors.hpp"
#include "qode/taylor_system.hpp"

namespace qode {

struct LinearProblem {
  MatrixHandle A;
  CVector b;
  CVector x0;
  double T = 1.0;
  double eps = 1e-3;
};

void validate(const LinearProblem& prob);

struct Trajectory {
  std::vector<double> t;
  std::vector<CVector> x;
  double max_norm = 0.0;  // refined sup over [0, T]
  double t_max = 0.0;
  double final_norm = 0.0;
  // max_t ||x(t)|| / ||x(T)||
  double g() const { return max_norm / final_norm; }
};

// e^{At} x0 + phi1(A, t) b
CVector exact_linear_solution(const LinearProblem& prob, double t);

// Uniform samples of the exact solution (samples >= 2048 enforced) with a
// golden-section refinement of the largest norm.
Trajectory linear_trajectory(const LinearProblem& prob, int samples = 2048);

// y_0 .. y_m of y_{i+1} = T_k(Ah) y_i + S_k(Ah) h b.
std::vector<CVector> taylor_recursion(const LinearProblem& prob, const SolverParams& params);

// du/dt = F2 (u (x) u) + F1 u + F0, F2 is d x d^2, lexicographic Kronecker order.
struct QuadraticODE {
  RVector F0;
  RMatrix F1;
  RMatrix F2;
  RVector u_in;
  double T = 1.0;
};

void validate(const QuadraticODE& ode);
RVector quadratic_rhs(const QuadraticODE& ode, const RVector& u);

class IntegrationFailure : public NumericError {
 public:
  IntegrationFailure(const std::string& what, double last_t) : NumericError(what), last_t_(last_t) {}
  double last_time() const { return last_t_; }

 private:
  double last_t_;
};

struct RKOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  int samples = 2048;
  long max_steps = 10'000'000;
};

// Dormand-Prince 5(4) with cubic Hermite dense output. Samples are uniform
// on [0, T]; max_norm is refined on the interpolant.
Trajectory solve_quadratic_rk(const QuadraticODE& ode, const RKOptions& opt = {});

// Closed form of dx/dt = a x^2 + b x + c for b^2 > 4ac, a > 0.
double scalar_riccati_closed_form(double a, double b, double c, double x0, double t);

}  // namespace qode
