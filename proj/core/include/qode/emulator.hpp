#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qode/ode_reference.hpp"
#include "qode/spectral_bounds.hpp"

namespace qode {

// (m e^3 / delta) (1 + T e^2 ||b|| / ||x_T||); the solution-error theorem
// needs (k+1)! at least this large.
double solution_error_threshold(Index m, double delta, double T, double b_norm, double xT_norm);

// h = T / ceil(T||A||), m = p = ceil(T||A||), delta = eps / 2, k from Omega
// and then raised until the factorial condition holds. x_T_norm is a lower
// bound on ||x_T||; when absent the exact solution is used.
SolverParams choose_params(const LinearProblem& prob, std::optional<double> xT_norm = std::nullopt);

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = true;
  // Reported but not part of the verdict.
  bool informational = false;
  std::string note;
  bool pass() const { return !applicable || informational || lhs <= rhs; }
  double slack() const { return lhs > 0.0 ? rhs / lhs : std::numeric_limits<double>::infinity(); }
};

struct EmulateOptions {
  bool compute_kappa = true;
  bool check_bounds = true;
  bool keep_solution = false;
  KappaOptions kappa;
  int trajectory_samples = 2048;
};

struct EmulationResult {
  SolverParams params;
  std::vector<CVector> y_blocks;  // y_0 .. y_m read from the solution
  CVector y_m;
  CVector x_T;
  double rel_error = 0.0;           // ||y_m - x_T|| / ||x_T||
  double output_state_error = 0.0;  // distance of the normalized states
  double p_meas = 0.0;
  double g = 0.0;
  double n_init = 0.0;
  std::optional<ConditionEstimate> kappa_L;
  std::optional<double> c_of_a;
  std::vector<BoundCheck> bound_checks;
  std::optional<CVector> solution;
  bool all_pass() const;
};

EmulationResult emulate(const LinearProblem& prob, const SolverParams& params,
                        const EmulateOptions& opt = {});

std::vector<BoundCheck> verify_truncation_lemmas(const CMatrix& a, const SolverParams& params,
                                                 double T);

// Statement form (m+p) C(A) (1+delta) e (1+e), proof form with sqrt(k);
// passes when kappa_L is below the larger of the two.
BoundCheck verify_condition_bound(const EmulationResult& r, double c_of_a);

BoundCheck verify_success_prob(const EmulationResult& r);

struct QueryCost {
  double query_factor = 0.0;  // s k kappa_L
  std::vector<std::pair<std::string, double>> query_log_args;
  double main_factor = 0.0;  // g T ||A|| C(A)
  std::vector<std::pair<std::string, double>> main_log_args;
  std::vector<std::pair<std::string, double>> components;
  // prod max(1, log(arg)) over the recorded log arguments.
  double query_polylog() const;
  double main_polylog() const;
};

struct CostInputs {
  Index s = 1;
  Index d = 1;
  int k = 1;
  Index m = 1;
  double kappa_L = 1.0;
  double eps = 1e-3;
  double g = 1.0;
  double T = 1.0;
  double a_norm = 1.0;
  double c_of_a = 1.0;
  double b_norm = 0.0;
  double xT_norm = 1.0;
};

QueryCost cost_model(const CostInputs& in);

}  // namespace qode
