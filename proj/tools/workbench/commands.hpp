#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "report.hpp"

namespace qode::workbench {

struct GlobalOptions {
  std::string out = "qode_out";
  std::uint64_t seed = 1;
  double tol = 1e-8;  // Lanczos residual tolerance for condition numbers
  int samples = -1;   // command specific; -1 keeps the command default
  bool raw_bcow = false;
  std::string params = "search";
  unsigned workers = 0;
  bool quiet = false;
};

// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCapacity = 3;

// Parses argv, runs the subcommand, writes artifacts and returns the exit
// code. Never throws.
int run_cli(int argc, char** argv);

}  // namespace qode::workbench
