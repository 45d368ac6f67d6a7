#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "decaycert/linalg.hpp"

namespace decaycert::mm {

enum class Format { Array, Coordinate };
enum class Field { Real, Complex, Integer };
enum class Symmetry { General, Symmetric, Hermitian, SkewSymmetric };

struct Header {
  Format format = Format::Array;
  Field field = Field::Real;
  Symmetry symmetry = Symmetry::General;
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

inline double parse_real(std::string_view tok, std::size_t line) {
  double value = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto res = std::from_chars(first, tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw Error(ErrorKind::ParseError, "invalid number '" + std::string(tok) + "'", line);
  return value;
}

inline long long parse_integer(std::string_view tok, std::size_t line) {
  long long value = 0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto res = std::from_chars(first, tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw Error(ErrorKind::ParseError, "invalid integer '" + std::string(tok) + "'", line);
  return value;
}

inline Header parse_header(const std::string& line) {
  const auto tokens = split(line);
  if (tokens.size() != 5 || tokens[0] != "%%MatrixMarket")
    throw Error(ErrorKind::ParseError, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'", 1);
  if (lower(tokens[1]) != "matrix")
    throw Error(ErrorKind::ParseError, "only the 'matrix' object is supported", 1);
  Header h;
  const std::string format = lower(tokens[2]);
  if (format == "array") h.format = Format::Array;
  else if (format == "coordinate") h.format = Format::Coordinate;
  else throw Error(ErrorKind::ParseError, "unknown format '" + format + "'", 1);

  const std::string field = lower(tokens[3]);
  if (field == "real") h.field = Field::Real;
  else if (field == "complex") h.field = Field::Complex;
  else if (field == "integer") h.field = Field::Integer;
  else if (field == "pattern")
    throw Error(ErrorKind::ParseError, "pattern matrices carry no values and are rejected", 1);
  else throw Error(ErrorKind::ParseError, "unknown field '" + field + "'", 1);

  const std::string sym = lower(tokens[4]);
  if (sym == "general") h.symmetry = Symmetry::General;
  else if (sym == "symmetric") h.symmetry = Symmetry::Symmetric;
  else if (sym == "hermitian") h.symmetry = Symmetry::Hermitian;
  else if (sym == "skew-symmetric") h.symmetry = Symmetry::SkewSymmetric;
  else throw Error(ErrorKind::ParseError, "unknown symmetry '" + sym + "'", 1);

  if (h.symmetry == Symmetry::Hermitian && h.field != Field::Complex)
    throw Error(ErrorKind::ParseError, "hermitian storage requires the complex field", 1);
  if (h.format == Format::Array && h.field == Field::Integer && h.symmetry == Symmetry::Hermitian)
    throw Error(ErrorKind::ParseError, "invalid field/symmetry combination", 1);
  return h;
}

inline cplx parse_value(const Header& h, const std::vector<std::string_view>& tokens,
                        std::size_t offset, std::size_t line) {
  const std::size_t needed = h.field == Field::Complex ? 2 : 1;
  if (tokens.size() != offset + needed)
    throw Error(ErrorKind::ParseError,
                "expected " + std::to_string(offset + needed) + " fields, found " +
                    std::to_string(tokens.size()),
                line);
  switch (h.field) {
    case Field::Real: return {parse_real(tokens[offset], line), 0.0};
    case Field::Integer: return {static_cast<double>(parse_integer(tokens[offset], line)), 0.0};
    case Field::Complex:
      return {parse_real(tokens[offset], line), parse_real(tokens[offset + 1], line)};
  }
  return {};
}

/// Places an entry and its mirror image according to the storage symmetry.
inline void place(Matrix& m, const Header& h, Eigen::Index i, Eigen::Index j, cplx value,
                  std::size_t line) {
  if (h.symmetry != Symmetry::General && i < j)
    throw Error(ErrorKind::ParseError, "symmetric storage lists only the lower triangle", line);
  if (h.symmetry == Symmetry::SkewSymmetric && i == j)
    throw Error(ErrorKind::ParseError, "skew-symmetric storage has no diagonal entries", line);
  if (h.symmetry == Symmetry::Hermitian && i == j && value.imag() != 0.0)
    throw Error(ErrorKind::ParseError, "hermitian diagonal entries must be real", line);
  m(i, j) = value;
  if (i == j) return;
  switch (h.symmetry) {
    case Symmetry::General: break;
    case Symmetry::Symmetric: m(j, i) = value; break;
    case Symmetry::Hermitian: m(j, i) = std::conj(value); break;
    case Symmetry::SkewSymmetric: m(j, i) = -value; break;
  }
}

}  // namespace detail

/// Reads a Matrix Market matrix (array or coordinate; real, complex or integer;
/// general, symmetric, hermitian or skew-symmetric storage expanded to full).
inline Matrix read(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "empty input", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const Header h = detail::parse_header(line);

  auto next_data_line = [&](std::vector<std::string_view>& tokens) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line.front() == '%') continue;
      tokens = detail::split(line);
      if (tokens.empty()) continue;
      return true;
    }
    return false;
  };

  std::vector<std::string_view> tokens;
  if (!next_data_line(tokens)) throw Error(ErrorKind::ParseError, "missing size line", line_no + 1);
  const std::size_t size_fields = h.format == Format::Array ? 2 : 3;
  if (tokens.size() != size_fields)
    throw Error(ErrorKind::ParseError, "malformed size line", line_no);
  const long long rows = detail::parse_integer(tokens[0], line_no);
  const long long cols = detail::parse_integer(tokens[1], line_no);
  if (rows < 0 || cols < 0) throw Error(ErrorKind::ParseError, "negative dimension", line_no);
  if (h.symmetry != Symmetry::General && rows != cols)
    throw Error(ErrorKind::ParseError, "symmetric storage requires a square matrix", line_no);

  Matrix m = Matrix::Zero(rows, cols);
  if (h.format == Format::Array) {
    // Column-major; symmetric storage keeps the lower triangle (strictly lower for skew).
    for (long long j = 0; j < cols; ++j) {
      long long i0 = 0;
      if (h.symmetry == Symmetry::SkewSymmetric) i0 = j + 1;
      else if (h.symmetry != Symmetry::General) i0 = j;
      for (long long i = i0; i < rows; ++i) {
        if (!next_data_line(tokens))
          throw Error(ErrorKind::ParseError, "too few array entries", line_no + 1);
        detail::place(m, h, i, j, detail::parse_value(h, tokens, 0, line_no), line_no);
      }
    }
  } else {
    const long long nnz = detail::parse_integer(tokens[2], line_no);
    if (nnz < 0) throw Error(ErrorKind::ParseError, "negative entry count", line_no);
    for (long long e = 0; e < nnz; ++e) {
      if (!next_data_line(tokens))
        throw Error(ErrorKind::ParseError, "too few coordinate entries", line_no + 1);
      if (tokens.size() < 2) throw Error(ErrorKind::ParseError, "missing indices", line_no);
      const long long i = detail::parse_integer(tokens[0], line_no);
      const long long j = detail::parse_integer(tokens[1], line_no);
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw Error(ErrorKind::ParseError, "index out of range", line_no);
      detail::place(m, h, i - 1, j - 1, detail::parse_value(h, tokens, 2, line_no), line_no);
    }
  }
  if (next_data_line(tokens)) throw Error(ErrorKind::ParseError, "unexpected trailing data", line_no);
  return m;
}

inline Matrix read_string(const std::string& text) {
  std::istringstream in(text);
  return read(in);
}

inline Matrix load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  return read(in);
}

/// Writes a dense array file: real general when every entry is real, else complex general.
/// Numbers use the shortest round-trip decimal form.
inline void write(std::ostream& out, const Matrix& m) {
  const bool real = m.imag().isZero(0.0);
  out << "%%MatrixMarket matrix array " << (real ? "real" : "complex") << " general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  auto emit = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
  };
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      emit(m(i, j).real());
      if (!real) {
        out << ' ';
        emit(m(i, j).imag());
      }
      out << '\n';
    }
}

inline void save(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  write(out, m);
}

}  // namespace decaycert::mm
