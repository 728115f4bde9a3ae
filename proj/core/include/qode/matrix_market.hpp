#pragma once

#include <iosfwd>
#include <string>

#include "qode/matrix.hpp"

namespace qode {

enum class MMFormat { coordinate, array };
enum class MMField { real, complex, integer, pattern };
enum class MMSymmetry { general, symmetric, skew_symmetric, hermitian };

struct MMMatrix {
  MMFormat format = MMFormat::coordinate;
  MMField field = MMField::real;
  MMSymmetry symmetry = MMSymmetry::general;
  SparseCMatrix values;  // symmetric storage already expanded
};

// Errors are InputError carrying "<source>:<line>:<column>: ...".
MMMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
MMMatrix read_matrix_market_file(const std::string& path);

// Real field when every imaginary part is zero, complex otherwise.
// Entries use %.17g so a read/write round trip is bit exact.
void write_matrix_market(std::ostream& out, const SparseCMatrix& m);
void write_matrix_market_array(std::ostream& out, const CMatrix& m);
void write_matrix_market_file(const std::string& path, const SparseCMatrix& m);

}  // namespace qode
