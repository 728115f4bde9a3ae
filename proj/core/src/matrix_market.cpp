#include "qode/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "qode/errors.hpp"

namespace qode {

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Reader {
  std::istream& in;
  const std::string& source;
  int line_no = 0;

  [[noreturn]] void fail(int column, const std::string& msg) const {
    throw InputError(source + ":" + std::to_string(line_no) + ":" + std::to_string(column) + ": " + msg);
  }

  // Next non-comment, non-blank line.
  bool next(std::vector<Token>& toks) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] == '%') continue;
      toks = tokenize(line);
      if (toks.empty()) continue;
      return true;
    }
    return false;
  }

  double number(const Token& t) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.text.c_str(), &end);
    if (end != t.text.c_str() + t.text.size()) fail(t.column, "malformed number '" + t.text + "'");
    if (!std::isfinite(v) || errno == ERANGE) fail(t.column, "non-finite value '" + t.text + "'");
    return v;
  }

  long integer(const Token& t) const {
    char* end = nullptr;
    const long v = std::strtol(t.text.c_str(), &end, 10);
    if (end != t.text.c_str() + t.text.size()) fail(t.column, "expected an integer, got '" + t.text + "'");
    return v;
  }
};

}  // namespace

MMMatrix read_matrix_market(std::istream& in, const std::string& source) {
  Reader rd{in, source};
  std::string header;
  if (!std::getline(in, header)) throw InputError(source + ":1:1: empty file");
  rd.line_no = 1;
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const std::vector<Token> h = tokenize(header);
  if (h.size() != 5 || h[0].text != "%%MatrixMarket")
    rd.fail(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'");
  if (lower(h[1].text) != "matrix") rd.fail(h[1].column, "only 'matrix' objects are supported");

  MMMatrix mm;
  const std::string fmt = lower(h[2].text), field = lower(h[3].text), sym = lower(h[4].text);
  if (fmt == "coordinate") mm.format = MMFormat::coordinate;
  else if (fmt == "array") mm.format = MMFormat::array;
  else rd.fail(h[2].column, "unknown format '" + h[2].text + "'");
  if (field == "real" || field == "double") mm.field = MMField::real;
  else if (field == "complex") mm.field = MMField::complex;
  else if (field == "integer") mm.field = MMField::integer;
  else if (field == "pattern") mm.field = MMField::pattern;
  else rd.fail(h[3].column, "unknown field '" + h[3].text + "'");
  if (sym == "general") mm.symmetry = MMSymmetry::general;
  else if (sym == "symmetric") mm.symmetry = MMSymmetry::symmetric;
  else if (sym == "skew-symmetric") mm.symmetry = MMSymmetry::skew_symmetric;
  else if (sym == "hermitian") mm.symmetry = MMSymmetry::hermitian;
  else rd.fail(h[4].column, "unknown symmetry '" + h[4].text + "'");
  if (mm.format == MMFormat::array && mm.field == MMField::pattern)
    rd.fail(h[3].column, "pattern field is not allowed with array format");
  if (mm.symmetry == MMSymmetry::hermitian && mm.field != MMField::complex)
    rd.fail(h[4].column, "hermitian symmetry requires complex field");

  std::vector<Token> t;
  if (!rd.next(t)) rd.fail(1, "missing size line");
  const std::size_t want = mm.format == MMFormat::coordinate ? 3 : 2;
  if (t.size() != want) rd.fail(t[0].column, "size line needs " + std::to_string(want) + " integers");
  const long rows = rd.integer(t[0]), cols = rd.integer(t[1]);
  const long nnz = mm.format == MMFormat::coordinate ? rd.integer(t[2]) : rows * cols;
  if (rows < 0 || cols < 0 || nnz < 0) rd.fail(t[0].column, "negative size");
  if (mm.symmetry != MMSymmetry::general && rows != cols) rd.fail(t[0].column, "symmetric storage needs a square matrix");

  const std::size_t nvals = mm.field == MMField::complex ? 2 : (mm.field == MMField::pattern ? 0 : 1);
  std::vector<Eigen::Triplet<Complex>> trip;
  auto push = [&](long i, long j, Complex v) {
    trip.emplace_back(i, j, v);
    if (i == j) return;
    switch (mm.symmetry) {
      case MMSymmetry::general: break;
      case MMSymmetry::symmetric: trip.emplace_back(j, i, v); break;
      case MMSymmetry::skew_symmetric: trip.emplace_back(j, i, -v); break;
      case MMSymmetry::hermitian: trip.emplace_back(j, i, std::conj(v)); break;
    }
  };

  if (mm.format == MMFormat::coordinate) {
    for (long e = 0; e < nnz; ++e) {
      if (!rd.next(t)) rd.fail(1, "expected " + std::to_string(nnz) + " entries, found " + std::to_string(e));
      if (t.size() != 2 + nvals)
        rd.fail(t[0].column, "entry needs " + std::to_string(2 + nvals) + " fields, got " + std::to_string(t.size()));
      const long i = rd.integer(t[0]), j = rd.integer(t[1]);
      if (i < 1 || i > rows) rd.fail(t[0].column, "row index " + t[0].text + " out of range");
      if (j < 1 || j > cols) rd.fail(t[1].column, "column index " + t[1].text + " out of range");
      if (mm.symmetry != MMSymmetry::general && j > i) rd.fail(t[1].column, "entry above the diagonal in symmetric storage");
      Complex v = 1.0;
      if (nvals >= 1) v = Complex(rd.number(t[2]), nvals == 2 ? rd.number(t[3]) : 0.0);
      push(i - 1, j - 1, v);
    }
  } else {
    // Column major; symmetric storage lists the lower triangle only.
    for (long j = 0; j < cols; ++j) {
      const long i0 = mm.symmetry == MMSymmetry::general ? 0 : (mm.symmetry == MMSymmetry::skew_symmetric ? j + 1 : j);
      for (long i = i0; i < rows; ++i) {
        if (!rd.next(t)) rd.fail(1, "array data ended early");
        if (t.size() != nvals) rd.fail(t[0].column, "entry needs " + std::to_string(nvals) + " fields");
        const Complex v(rd.number(t[0]), nvals == 2 ? rd.number(t[1]) : 0.0);
        if (v != Complex(0.0)) push(i, j, v);
      }
    }
  }
  if (rd.next(t)) rd.fail(t[0].column, "unexpected data after the last entry");
  mm.values.resize(rows, cols);
  mm.values.setFromTriplets(trip.begin(), trip.end());
  mm.values.makeCompressed();
  return mm;
}

MMMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError(path + ": cannot open file");
  return read_matrix_market(f, path);
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

void write_matrix_market(std::ostream& out, const SparseCMatrix& m) {
  bool cplx = false;
  Index nnz = 0;
  for (Index i = 0; i < m.outerSize(); ++i)
    for (SparseCMatrix::InnerIterator it(m, i); it; ++it) {
      ++nnz;
      if (it.value().imag() != 0.0) cplx = true;
    }
  out << "%%MatrixMarket matrix coordinate " << (cplx ? "complex" : "real") << " general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  for (Index i = 0; i < m.outerSize(); ++i)
    for (SparseCMatrix::InnerIterator it(m, i); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << fmt17(it.value().real());
      if (cplx) out << ' ' << fmt17(it.value().imag());
      out << '\n';
    }
}

void write_matrix_market_array(std::ostream& out, const CMatrix& m) {
  const bool cplx = (m.imag().array() != 0.0).any();
  out << "%%MatrixMarket matrix array " << (cplx ? "complex" : "real") << " general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      out << fmt17(m(i, j).real());
      if (cplx) out << ' ' << fmt17(m(i, j).imag());
      out << '\n';
    }
}

void write_matrix_market_file(const std::string& path, const SparseCMatrix& m) {
  std::ofstream f(path);
  if (!f) throw InputError(path + ": cannot open for writing");
  write_matrix_market(f, m);
}

}  // namespace qode
