#include "qode/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>

#include "json.hpp"

#include "qode/errors.hpp"
#include "qode/matrix_market.hpp"

namespace qode {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

CMatrix json_to_matrix(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected a non-empty array");
  if (j[0].is_number()) {
    CMatrix v(j.size(), 1);
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) throw InputError(where + ": mixed array");
      v(i, 0) = j[i].get<double>();
    }
    return v;
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw InputError(where + ": rows must be non-empty arrays");
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError(where + ": ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw InputError(where + ": non-numeric entry");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source, const std::string& base_dir,
                     const std::vector<std::string>& allowed) {
  Config cfg;
  cfg.source_ = source;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw InputError(where + ": empty key");
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InputError(where + ": unknown key '" + key + "'");
    if (cfg.entries_.count(key)) throw InputError(where + ": duplicate key '" + key + "'");
    if (val.empty()) throw InputError(where + ": missing value for '" + key + "'");
    Entry e;
    e.raw = val;
    e.line = no;
    if (val[0] == '@') {
      e.is_file = true;
      std::filesystem::path p(val.substr(1));
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      e.file = p.string();
    } else if (val[0] == '[') {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(val);
      } catch (const nlohmann::json::exception& ex) {
        throw InputError(where + ": malformed array for '" + key + "': " + ex.what());
      }
      e.array = json_to_matrix(j, where);
    } else {
      char* end = nullptr;
      e.number = std::strtod(val.c_str(), &end);
      if (end != val.c_str() + val.size())
        throw InputError(where + ": malformed number '" + val + "' for '" + key + "'");
      if (!std::isfinite(e.number)) throw InputError(where + ": non-finite value for '" + key + "'");
      e.is_number = true;
    }
    cfg.entries_.emplace(key, std::move(e));
  }
  return cfg;
}

Config Config::load(const std::string& path, const std::vector<std::string>& allowed) {
  std::ifstream f(path);
  if (!f) throw InputError(path + ": cannot open config file");
  return parse(f, path, std::filesystem::path(path).parent_path().string(), allowed);
}

const Config::Entry& Config::at(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw InputError(source_ + ": missing required key '" + key + "'");
  return it->second;
}

double Config::scalar(const std::string& key) const {
  const Entry& e = at(key);
  if (!e.is_number) throw InputError(source_ + ":" + std::to_string(e.line) + ": '" + key + "' must be a number");
  return e.number;
}

CMatrix Config::matrix_of(const std::string& key) const {
  const Entry& e = at(key);
  if (e.is_number) return CMatrix::Constant(1, 1, e.number);
  if (e.is_file) return CMatrix(read_matrix_market_file(e.file).values);
  return e.array;
}

RMatrix Config::real_matrix(const std::string& key) const {
  const CMatrix m = matrix_of(key);
  if ((m.imag().array() != 0.0).any()) throw InputError(source_ + ": '" + key + "' must be real");
  return m.real();
}

CMatrix Config::complex_matrix(const std::string& key) const { return matrix_of(key); }

RVector Config::real_vector(const std::string& key) const {
  const RMatrix m = real_matrix(key);
  if (m.cols() != 1 && m.rows() != 1) throw InputError(source_ + ": '" + key + "' must be a vector");
  return m.cols() == 1 ? RVector(m.col(0)) : RVector(m.row(0).transpose());
}

CVector Config::complex_vector(const std::string& key) const {
  const CMatrix m = matrix_of(key);
  if (m.cols() != 1 && m.rows() != 1) throw InputError(source_ + ": '" + key + "' must be a vector");
  return m.cols() == 1 ? CVector(m.col(0)) : CVector(m.row(0).transpose());
}

std::map<std::string, std::string> Config::raw() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, e] : entries_) out[k] = e.raw;
  return out;
}

}  // namespace qode
