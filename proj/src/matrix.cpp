#include "swad/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "swad/error.hpp"

namespace swad {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_string());
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::row_vector(std::span<const double> values) {
  return Matrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + a.shape_string() + " by " +
                         b.shape_string());
  }
  const std::size_t n = a.rows(), inner = a.cols(), m = b.cols();
  Matrix c(n, m);
  // i-k-j order: the j loop vectorizes while each c(i, j) still sees k in
  // ascending order.
  for (std::size_t i = 0; i < n; ++i) {
    double* out = c.row(i).data();
    const double* arow = a.row(i).data();
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = arow[k];
      const double* brow = b.row(k).data();
      for (std::size_t j = 0; j < m; ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_tn: cannot multiply transpose of " + a.shape_string() +
                         " by " + b.shape_string());
  }
  const std::size_t n = a.rows(), p = a.cols(), q = b.cols();
  Matrix c(p, q);
  for (std::size_t r = 0; r < n; ++r) {
    const double* arow = a.row(r).data();
    const double* brow = b.row(r).data();
    for (std::size_t i = 0; i < p; ++i) {
      const double ari = arow[i];
      double* out = c.row(i).data();
      for (std::size_t j = 0; j < q; ++j) out[j] += ari * brow[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_nt: cannot multiply " + a.shape_string() +
                         " by transpose of " + b.shape_string());
  }
  return matmul(a, transpose(b));
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

Matrix elementwise(const Matrix& a, const Matrix& b, ElementOp op) {
  const bool same = a.rows() == b.rows() && a.cols() == b.cols();
  const bool broadcast = !same && b.rows() == 1 && b.cols() == a.cols();
  if (!same && !broadcast) {
    throw DimensionError("elementwise: shapes " + a.shape_string() + " and " +
                         b.shape_string() + " are not broadcastable");
  }
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto x = a.row(i);
    auto y = b.row(broadcast ? 0 : i);
    auto o = out.row(i);
    switch (op) {
      case ElementOp::kAdd:
        for (std::size_t j = 0; j < x.size(); ++j) o[j] = x[j] + y[j];
        break;
      case ElementOp::kSub:
        for (std::size_t j = 0; j < x.size(); ++j) o[j] = x[j] - y[j];
        break;
      case ElementOp::kMul:
        for (std::size_t j = 0; j < x.size(); ++j) o[j] = x[j] * y[j];
        break;
    }
  }
  return out;
}

Matrix scale(const Matrix& m, double factor) {
  Matrix out = m;
  for (double& v : out.data()) v *= factor;
  return out;
}

Matrix column_sums(const Matrix& m) {
  Matrix s(1, m.cols());
  auto out = s.row(0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[j] += r[j];
  }
  return s;
}

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), m.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= m.rows()) {
      throw DimensionError("gather_rows: index " + std::to_string(indices[i]) +
                           " out of range for " + m.shape_string());
    }
    auto src = m.row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.cols() != b.cols()) {
    throw DimensionError("vstack: " + a.shape_string() + " and " + b.shape_string());
  }
  std::vector<double> data(a.data().begin(), a.data().end());
  data.insert(data.end(), b.data().begin(), b.data().end());
  return Matrix(a.rows() + b.rows(), a.cols(), std::move(data));
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("hstack: " + a.shape_string() + " and " + b.shape_string());
  }
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto o = out.row(i);
    std::copy(a.row(i).begin(), a.row(i).end(), o.begin());
    std::copy(b.row(i).begin(), b.row(i).end(), o.begin() + a.cols());
  }
  return out;
}

std::vector<double> row_squared_distances(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("row_squared_distances: " + a.shape_string() + " vs " +
                         b.shape_string());
  }
  std::vector<double> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto x = a.row(i);
    auto y = b.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - y[j];
      s += d * d;
    }
    out[i] = s;
  }
  return out;
}

}  // namespace swad
