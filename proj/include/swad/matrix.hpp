#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace swad {

// Dense row-major matrix of doubles. Value type; every numeric routine in the
// library takes and returns these.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix row_vector(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  // "RxC", used in error messages.
  std::string shape_string() const;

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class ElementOp { kAdd, kSub, kMul };

// Standard product. Every output cell is accumulated over the inner index in
// ascending order, so results are bit-reproducible.
Matrix matmul(const Matrix& a, const Matrix& b);

// a^T * b without materializing the transpose. Same ordering guarantee.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

// a * b^T. Same ordering guarantee.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

// Cell-wise a (op) b. `b` may be 1 x a.cols(), in which case it is repeated
// across every row of `a`.
Matrix elementwise(const Matrix& a, const Matrix& b, ElementOp op);

Matrix scale(const Matrix& m, double factor);

// Column sums as a 1 x cols row.
Matrix column_sums(const Matrix& m);

// Rows selected by index, in the given order.
Matrix gather_rows(const Matrix& m, std::span<const std::size_t> indices);

// Row-wise concatenation [a; b]. Column counts must agree.
Matrix vstack(const Matrix& a, const Matrix& b);

// Column-wise concatenation [a, b]. Row counts must agree.
Matrix hstack(const Matrix& a, const Matrix& b);

// ||a_i - b_i||^2 for every row i.
std::vector<double> row_squared_distances(const Matrix& a, const Matrix& b);

}  // namespace swad
