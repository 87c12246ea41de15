#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gcomp {

// Dense row-major matrix used for input and export.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> values);

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool operator==(const Matrix&) const = default;
};

// The set X = {x_1, ..., x_l} of n-dimensional vectors (the columns of an
// n x l matrix), with norms and the Gram matrix of the normalized directions.
class VectorSet {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  std::size_t dim() const { return n_; }
  std::size_t size() const { return l_; }

  std::span<const double> vector(std::size_t i) const { return {vectors_.data() + i * n_, n_}; }
  std::span<const double> direction(std::size_t i) const { return {units_.data() + i * n_, n_}; }
  double norm(std::size_t i) const { return norms_[i]; }
  const std::vector<double>& norms() const { return norms_; }
  double gram_unit(std::size_t i, std::size_t p) const { return gram_[i * l_ + p]; }
  // Raw inner product x_i^T x_p.
  double dot(std::size_t i, std::size_t p) const { return dots_[i * l_ + p]; }
  bool unit_flag() const { return unit_; }

  // The set as an n x l matrix (columns are the vectors).
  Matrix to_matrix() const;

  bool operator==(const VectorSet&) const = default;

 private:
  friend VectorSet build_set(const Matrix& matrix);

  std::size_t n_ = 0;
  std::size_t l_ = 0;
  std::vector<double> vectors_;  // column-major, l blocks of n
  std::vector<double> units_;    // same layout, x / ||x||
  std::vector<double> norms_;
  std::vector<double> gram_;  // l x l row-major
  std::vector<double> dots_;  // l x l row-major
  bool unit_ = false;
};

// Columns of `matrix` become the vectors. Throws ValidationError on empty or
// non-finite input and DegenerateDirectionError on a zero column.
VectorSet build_set(const Matrix& matrix);

// Scales every column to unit Euclidean norm.
Matrix normalize_columns(const Matrix& matrix);

// Plain-text matrix format: one matrix row per line, whitespace-separated
// reals, lines starting with '#' (after optional blanks) are comments.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
// Writes with round-trip precision; `comment` lines are prefixed with "# ".
void write_matrix(std::ostream& out, const Matrix& matrix, const std::vector<std::string>& comment = {});

}  // namespace gcomp
