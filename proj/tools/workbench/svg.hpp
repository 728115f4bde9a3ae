#pragma once

#include <string>
#include <vector>

namespace qode::workbench {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string line_plot(const std::string& title, const std::vector<Series>& series, bool log_y);

}  // namespace qode::workbench
