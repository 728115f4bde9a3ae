#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qode/matrix.hpp"

namespace qode {

// Flat "key = value" files. '#' starts a comment. Values are numbers,
// inline JSON arrays ([1, 2] or [[1, 0], [0, 1]]) or '@path' references to
// Matrix Market files, resolved relative to the config file.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source, const std::string& base_dir,
                      const std::vector<std::string>& allowed);
  static Config load(const std::string& path, const std::vector<std::string>& allowed);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  double scalar(const std::string& key) const;
  RMatrix real_matrix(const std::string& key) const;
  CMatrix complex_matrix(const std::string& key) const;
  RVector real_vector(const std::string& key) const;
  CVector complex_vector(const std::string& key) const;
  // Raw value text, for echoing the configuration back.
  std::map<std::string, std::string> raw() const;

 private:
  struct Entry {
    std::string raw;
    int line = 0;
    bool is_number = false;
    double number = 0.0;
    bool is_file = false;
    std::string file;
    CMatrix array;  // inline array, column vectors for 1-d input
  };
  const Entry& at(const std::string& key) const;
  CMatrix matrix_of(const std::string& key) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace qode
