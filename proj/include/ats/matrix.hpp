#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "ats/errors.hpp"

namespace ats {

/// Dense row-major matrix of doubles. Vectors are plain std::vector<double>.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool same_shape(const Matrix& o) const noexcept {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  std::span<double> row_span(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row_span(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  void fill(double v);
  bool all_finite() const noexcept;

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

using Vec = std::vector<double>;

// Shape-checked matrix ops. All throw ShapeMismatch instead of reading out of bounds.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix tanh_of(const Matrix& a);
Matrix sigmoid_of(const Matrix& a);
Vec row_of(const Matrix& m, std::size_t r);
Vec col_of(const Matrix& m, std::size_t c);

// Vector kernels used by the recurrent layers.
Vec matvec(const Matrix& m, const Vec& x);    // m(r x c) * x(c) -> r
Vec matvec_t(const Matrix& m, const Vec& x);  // m(r x c)^T * x(r) -> c
void add_outer(Matrix& acc, const Vec& r, const Vec& c);  // acc += r c^T
void axpy(Vec& y, double a, const Vec& x);                // y += a * x
Vec vadd(const Vec& a, const Vec& b);
Vec vmul(const Vec& a, const Vec& b);
Vec concat(const Vec& a, const Vec& b);
Vec concat(const Vec& a, const Vec& b, const Vec& c);
Vec slice(const Vec& v, std::size_t begin, std::size_t end);

}  // namespace ats
