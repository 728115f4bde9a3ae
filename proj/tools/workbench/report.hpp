#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qode/emulator.hpp"

namespace qode::workbench {

using Json = nlohmann::ordered_json;

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string command;
  Json config = Json::object();
  Json results = Json::array();
  std::vector<BoundCheck> verdicts;
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, std::string>> files;  // extra artifacts: file name, content

  bool all_pass() const;
  Json to_json() const;
};

Json verdict_json(const BoundCheck& c);
Json versions_json();
// NaN and infinities become JSON null.
Json number(double v);

std::string format_double(double v);
std::string to_csv(const CsvTable& t);

// Writes <out>/<command>.json, the CSV tables and SVGs, and a separate
// run_record.json holding wall-clock data.
void write_report(const Report& r, const std::string& out_dir, const std::vector<std::string>& argv,
                  double elapsed_seconds);

}  // namespace qode::workbench
