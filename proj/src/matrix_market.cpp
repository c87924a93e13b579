#include "spamm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace spamm::mm {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DenseMatrix read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty MatrixMarket stream");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix") {
    throw FormatError("missing %%MatrixMarket matrix banner");
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "array" && format != "coordinate") throw FormatError("unknown layout " + format);
  if (field != "real" && field != "integer" && field != "double") {
    throw FormatError("unsupported field " + field);
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw FormatError("unsupported symmetry " + symmetry);
  }
  const bool symmetric = symmetry == "symmetric";

  do {
    if (!std::getline(in, line)) throw FormatError("missing size line");
  } while (line.empty() || line[0] == '%');

  std::istringstream size_line(line);
  std::size_t rows = 0, cols = 0, entries = 0;
  size_line >> rows >> cols;
  if (!size_line) throw FormatError("malformed size line: " + line);
  if (format == "coordinate") {
    size_line >> entries;
    if (!size_line) throw FormatError("coordinate size line needs an entry count");
  }
  if (rows != cols) {
    throw DimensionError("MatrixMarket matrix must be square, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  if (rows == 0) throw DimensionError("MatrixMarket matrix has zero dimension");

  DenseMatrix m(rows);
  if (format == "array") {
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t i = symmetric ? j : 0; i < rows; ++i) {
        double v;
        if (!(in >> v)) throw FormatError("truncated array data");
        m(i, j) = static_cast<Real>(v);
        if (symmetric) m(j, i) = static_cast<Real>(v);
      }
    }
  } else {
    for (std::size_t e = 0; e < entries; ++e) {
      std::size_t i, j;
      double v;
      if (!(in >> i >> j >> v)) throw FormatError("truncated coordinate data");
      if (i < 1 || j < 1 || i > rows || j > cols) throw FormatError("coordinate index out of range");
      m(i - 1, j - 1) = static_cast<Real>(v);
      if (symmetric) m(j - 1, i - 1) = static_cast<Real>(v);
    }
  }
  return m;
}

DenseMatrix read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read(in);
}

void write(std::ostream& out, const DenseMatrix& m, Layout layout) {
  const std::size_t n = m.dim();
  if (layout == Layout::array) {
    out << "%%MatrixMarket matrix array real general\n" << n << ' ' << n << '\n';
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) out << format_value(m(i, j)) << '\n';
    }
    return;
  }
  std::size_t nnz = 0;
  for (Real v : m.data()) nnz += v != 0;
  out << "%%MatrixMarket matrix coordinate real general\n" << n << ' ' << n << ' ' << nnz << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) != 0) out << i + 1 << ' ' << j + 1 << ' ' << format_value(m(i, j)) << '\n';
    }
  }
}

void write_file(const std::string& path, const DenseMatrix& m, Layout layout) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out, m, layout);
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace spamm::mm
