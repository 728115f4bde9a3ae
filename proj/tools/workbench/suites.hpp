#pragma once

#include <cstdint>
#include <vector>

#include "qode/emulator.hpp"

namespace qode::workbench {

struct LinearTrial {
  int index = 0;
  Index d = 0;
  double T = 0.0;
  double a_norm = 0.0;
  double eps = 0.0;
  SolverParams params;
  double rel_error = 0.0;
  double block_mismatch = 0.0;  // max_i ||y_i - recursion_i|| / max(1, ||recursion_i||)
  double kappa_L = 0.0;
  double c_of_a = 0.0;
  double p_meas = 0.0;
  double g = 0.0;
  std::vector<BoundCheck> checks;  // emulator bound checks
  std::vector<BoundCheck> lemmas;
};

// Trial i draws from a generator seeded with seed + i.
std::vector<LinearTrial> run_linear_suite(std::uint64_t seed, int trials, unsigned workers = 0);

struct KreissTrial {
  int index = 0;
  Index d = 0;
  double alpha = 0.0;
  double horizon = 0.0;
  double low = 0.0;
  double high = 0.0;
  double sup = 0.0;
  bool unbounded = false;
};

// Random stable matrices with d <= d_max; horizon such that e^{alpha T} < 1e-6.
std::vector<KreissTrial> run_kreiss_suite(std::uint64_t seed, int trials, Index d_max = 8,
                                          unsigned workers = 0);

inline constexpr double kBlockTolerance = 1e-10;
inline constexpr double kSupRelTol = 1e-6;

// One verdict per bound: lhs = number of violations, rhs = 0. The note
// carries the smallest observed slack.
std::vector<BoundCheck> summarize(const std::vector<LinearTrial>& trials);
std::vector<BoundCheck> summarize(const std::vector<KreissTrial>& trials);

}  // namespace qode::workbench
