#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qode/taylor_system.hpp"

namespace qode::workbench {

enum class StepRule { unit_norm, unit_horizon };  // h = 1/||A|| or h = 1/m (T = 1)

const char* to_string(StepRule r) noexcept;

struct Fig2Policy {
  std::string mode;  // "search" or "auto"
  StepRule rule = StepRule::unit_norm;
  Index m = 1;
  int k = 1;
  double target = 0.0;    // kappa_L reference the search aimed at
  double achieved = 0.0;  // kappa_L at the search dimension
};

struct Fig2Options {
  Index d_min = 15;
  Index d_max = 100;
  Index d_step = 1;
  std::string params = "search";
  bool raw_bcow = false;
  Index search_d = 10;
  int search_max = 12;
  unsigned workers = 0;
};

struct Fig2Row {
  Index d = 0;
  double h = 0.0;
  Index m = 0;
  int k = 0;
  double kappa_L = 0.0;
  double kappa_C = 0.0;
  double kappa_V = 0.0;
  bool diagonalizable = true;
  std::optional<double> ref_L, ref_C, ref_V;
  // Numeric failure in this row; the sweep carries on.
  std::string error;
};

// Grid over m = p in 1..search_max, k in 1..search_max and both step rules
// at d = search_d, minimizing |kappa_L - reference|.
Fig2Policy search_policy(Index search_d, int search_max);

SolverParams policy_params(const Fig2Policy& pol, const CMatrix& a);

Fig2Row fig2_row(Index d, const Fig2Policy& pol, bool raw_bcow);

std::vector<Fig2Row> fig2_sweep(const Fig2Options& opt, Fig2Policy& policy_out);

// Least-squares slope of log(kappa_V) against d.
double log_slope(const std::vector<Fig2Row>& rows);

}  // namespace qode::workbench
