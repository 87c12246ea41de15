#include "gcomp/vector_set.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gcomp/errors.hpp"
#include "gcomp/numeric.hpp"

namespace gcomp {

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
  if (data.size() != rows * cols) {
    throw ValidationError("matrix: expected " + std::to_string(rows * cols) + " entries, got " +
                          std::to_string(data.size()));
  }
}

Matrix VectorSet::to_matrix() const {
  Matrix m(n_, l_);
  for (std::size_t i = 0; i < l_; ++i) {
    for (std::size_t k = 0; k < n_; ++k) m(k, i) = vectors_[i * n_ + k];
  }
  return m;
}

VectorSet build_set(const Matrix& matrix) {
  if (matrix.rows == 0 || matrix.cols == 0) throw ValidationError("vector set: empty matrix");
  if (matrix.data.size() != matrix.rows * matrix.cols) throw ValidationError("vector set: malformed matrix");
  VectorSet s;
  s.n_ = matrix.rows;
  s.l_ = matrix.cols;
  const std::size_t n = s.n_;
  const std::size_t l = s.l_;
  s.vectors_.resize(n * l);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < l; ++i) {
      const double v = matrix(k, i);
      if (!std::isfinite(v)) {
        throw ValidationError("vector set: non-finite entry at row " + std::to_string(k + 1) + ", column " +
                              std::to_string(i + 1));
      }
      s.vectors_[i * n + k] = v;
    }
  }
  s.norms_.resize(l);
  s.units_.resize(n * l);
  s.unit_ = true;
  for (std::size_t i = 0; i < l; ++i) {
    const double* x = s.vectors_.data() + i * n;
    const double nrm = std::sqrt(detail::dot(x, x, n));
    if (!(nrm > 0.0)) throw DegenerateDirectionError("vector set: column " + std::to_string(i + 1) + " is zero");
    s.norms_[i] = nrm;
    for (std::size_t k = 0; k < n; ++k) s.units_[i * n + k] = x[k] / nrm;
    if (std::abs(nrm - 1.0) > VectorSet::kUnitTolerance) s.unit_ = false;
  }
  s.gram_.resize(l * l);
  s.dots_.resize(l * l);
  for (std::size_t i = 0; i < l; ++i) {
    s.gram_[i * l + i] = 1.0;
    s.dots_[i * l + i] = s.norms_[i] * s.norms_[i];
    for (std::size_t p = i + 1; p < l; ++p) {
      const double g = detail::dot(s.units_.data() + i * n, s.units_.data() + p * n, n);
      const double d = detail::dot(s.vectors_.data() + i * n, s.vectors_.data() + p * n, n);
      s.gram_[i * l + p] = s.gram_[p * l + i] = g;
      s.dots_[i * l + p] = s.dots_[p * l + i] = d;
    }
  }
  return s;
}

Matrix normalize_columns(const Matrix& matrix) {
  Matrix out = matrix;
  for (std::size_t i = 0; i < matrix.cols; ++i) {
    double ss = 0.0;
    for (std::size_t k = 0; k < matrix.rows; ++k) ss += matrix(k, i) * matrix(k, i);
    const double nrm = std::sqrt(ss);
    if (!(nrm > 0.0)) throw DegenerateDirectionError("normalize: column " + std::to_string(i + 1) + " is zero");
    for (std::size_t k = 0; k < matrix.rows; ++k) out(k, i) = matrix(k, i) / nrm;
  }
  return out;
}

Matrix read_matrix(std::istream& in) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    std::string tok;
    std::size_t count = 0;
    while (row >> tok) {
      double v = 0.0;
      const char* b = tok.data();
      const char* e = tok.data() + tok.size();
      if (*b == '+') ++b;
      auto [ptr, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || ptr != e) {
        throw ValidationError("matrix line " + std::to_string(line_no) + ": not a number: '" + tok + "'");
      }
      if (!std::isfinite(v)) {
        throw ValidationError("matrix line " + std::to_string(line_no) + ": non-finite value '" + tok + "'");
      }
      values.push_back(v);
      ++count;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw ValidationError("matrix line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                            " values, found " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) throw ValidationError("matrix: no data rows");
  return Matrix(rows, cols, std::move(values));
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& matrix, const std::vector<std::string>& comment) {
  for (const auto& c : comment) out << "# " << c << '\n';
  for (std::size_t k = 0; k < matrix.rows; ++k) {
    for (std::size_t i = 0; i < matrix.cols; ++i) {
      if (i) out << ' ';
      out << detail::format_double(matrix(k, i));
    }
    out << '\n';
  }
}

}  // namespace gcomp
