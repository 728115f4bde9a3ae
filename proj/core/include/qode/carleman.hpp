#pragma once

#include <optional>
#include <vector>

#include "qode/emulator.hpp"

namespace qode {

struct CarlemanSystem {
  int N = 1;
  Index d = 1;
  Index delta = 0;  // sum_{j=1..N} d^j
  SparseCMatrix A;
  CVector b;     // (F0, 0, ..., 0)
  CVector x_in;  // (u, u(x)u, ..., u^(x)N)
  // Offset of level j (1-based) in the stacked vector.
  Index level_offset(int j) const;
  Index level_size(int j) const;
};

inline constexpr Index kCarlemanCapacity = 20000;

Index carleman_dimension(Index d, int N);

struct QuadraticNorms {
  double f0 = 0.0;   // ||F0||
  double mu1 = 0.0;  // mu(F1)
  double f2 = 0.0;   // ||F2||
};

QuadraticNorms quadratic_norms(const QuadraticODE& ode);

CarlemanSystem build_carleman(const QuadraticODE& ode, int N, Index max_delta = kCarlemanCapacity);

// (||F2|| ||u_in|| + ||F0|| / ||u_in||) / |mu(F1)|. PreconditionError when
// mu(F1) >= 0, InputError when u_in = 0.
double compute_R(const QuadraticODE& ode);

struct Rescaling {
  QuadraticODE ode;  // F0 / gamma, F1, gamma F2, u_in / gamma
  double gamma = 1.0;
  double r_minus = 0.0;
  double r_plus = 0.0;
  bool bisected = false;
};

// Requires R < 1. gamma = sqrt(||u_in|| r_+), r_+- roots of
// ||F2|| x^2 + mu(F1) x + ||F0||.
Rescaling rescale(const QuadraticODE& ode);

// ceil(2 log(T ||F2|| / (delta ||u(T)||)) / log(1 / ||u(0)||)), at least 1.
int choose_truncation_N(double T, double f2_norm, double delta, double uT_norm, double u0_norm);

struct CarlemanDiagnostics {
  double max_u_norm = 0.0;
  double c_of_a = 0.0;
  double eta1 = 0.0;
  std::vector<BoundCheck> checks;
};

// On a rescaled ODE: ||u(t)|| <= ||u_in||, C(A_carleman) <= 1 and the level-1
// truncation error of the exact Carleman solution is below delta ||u(T)||.
CarlemanDiagnostics verify_carleman_bounds(const CarlemanSystem& sys, const QuadraticODE& ode,
                                           double delta, const RKOptions& rk = {});

struct NonlinearOptions {
  bool compute_kappa = false;
  RKOptions rk;
  Index max_delta = kCarlemanCapacity;
};

struct NonlinearResult {
  double R = 0.0;
  double gamma = 1.0;
  int N = 1;
  Index delta_dim = 0;
  double delta = 0.0;        // eps / 4
  double delta_prime = 0.0;  // eps / (4 (1 + delta) sqrt(N))
  SolverParams params;
  RVector u_T_reference;  // original scaling
  CVector u_T_output;     // gamma y_1
  double normalized_error = 0.0;
  double relative_error = 0.0;
  double g_u = 0.0;
  double g = 0.0;
  double level1_probability = 0.0;
  double p_meas = 0.0;
  CarlemanDiagnostics carleman;
  EmulationResult emulation;
  QueryCost cost;
  std::vector<BoundCheck> checks;
  bool all_pass() const;
};

NonlinearResult solve_nonlinear_end_to_end(const QuadraticODE& ode, double eps,
                                           const NonlinearOptions& opt = {});

}  // namespace qode
