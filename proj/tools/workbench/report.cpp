#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Core>

#include "qode/errors.hpp"

namespace qode::workbench {

bool Report::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const BoundCheck& c) { return c.pass(); });
}

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json verdict_json(const BoundCheck& c) {
  Json j;
  j["name"] = c.name;
  j["lhs"] = number(c.lhs);
  j["rhs"] = number(c.rhs);
  j["applicable"] = c.applicable;
  j["informational"] = c.informational;
  j["pass"] = c.pass();
  j["slack"] = number(c.slack());
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json versions_json() {
  Json j;
  j["qode"] = QODE_VERSION;
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  return j;
}

Json Report::to_json() const {
  Json j;
  j["command"] = command;
  j["config"] = config;
  j["results"] = results;
  Json v = Json::array();
  for (const BoundCheck& c : verdicts) v.push_back(verdict_json(c));
  j["verdicts"] = v;
  j["all_pass"] = all_pass();
  j["versions"] = versions_json();
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const CsvTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
  return os.str();
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError(p.string() + ": cannot open for writing");
  f << content;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_report(const Report& r, const std::string& out_dir, const std::vector<std::string>& argv,
                  double elapsed_seconds) {
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError(out_dir + ": cannot create output directory: " + ec.message());
  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    outputs.push_back((dir / name).string());
  };
  emit(r.command + ".json", r.to_json().dump(2) + "\n");
  for (const CsvTable& t : r.tables) emit(t.name + ".csv", to_csv(t));
  for (const auto& [name, body] : r.files) emit(name, body);
  Json rec;
  rec["command"] = r.command;
  rec["argv"] = argv;
  rec["finished_utc"] = utc_now();
  rec["elapsed_seconds"] = elapsed_seconds;
  rec["outputs"] = outputs;
  rec["all_pass"] = r.all_pass();
  rec["versions"] = versions_json();
  write_file(dir / "run_record.json", rec.dump(2) + "\n");
}

}  // namespace qode::workbench
