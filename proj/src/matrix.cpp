#include "ats/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ats {
namespace {

[[noreturn]] void shape_error(const char* op, std::size_t ar, std::size_t ac,
                              std::size_t br, std::size_t bc) {
  throw ShapeMismatch(std::string(op) + ": incompatible shapes (" + std::to_string(ar) +
                      "x" + std::to_string(ac) + ") vs (" + std::to_string(br) + "x" +
                      std::to_string(bc) + ")");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != m.cols_) {
      shape_error("from_rows", m.rows_, m.cols_, 1, row.size());
    }
    std::copy(row.begin(), row.end(), m.data_.begin() + r * m.cols_);
    ++r;
  }
  return m;
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    shape_error("matmul", a.rows(), a.cols(), b.rows(), b.cols());
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_error("add", a.rows(), a.cols(), b.rows(), b.cols());
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_error("hadamard", a.rows(), a.cols(), b.rows(), b.cols());
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= b.data()[i];
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

Matrix tanh_of(const Matrix& a) {
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::tanh(out.data()[i]);
  return out;
}

Matrix sigmoid_of(const Matrix& a) {
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] = 1.0 / (1.0 + std::exp(-out.data()[i]));
  }
  return out;
}

Vec row_of(const Matrix& m, std::size_t r) {
  if (r >= m.rows()) shape_error("row_of", m.rows(), m.cols(), r, 0);
  auto s = m.row_span(r);
  return Vec(s.begin(), s.end());
}

Vec col_of(const Matrix& m, std::size_t c) {
  if (c >= m.cols()) shape_error("col_of", m.rows(), m.cols(), 0, c);
  Vec out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, c);
  return out;
}

Vec matvec(const Matrix& m, const Vec& x) {
  if (m.cols() != x.size()) shape_error("matvec", m.rows(), m.cols(), x.size(), 1);
  Vec out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = m.data() + i * m.cols();
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += row[j] * x[j];
    out[i] = acc;
  }
  return out;
}

Vec matvec_t(const Matrix& m, const Vec& x) {
  if (m.rows() != x.size()) shape_error("matvec_t", m.rows(), m.cols(), x.size(), 1);
  Vec out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = m.data() + i * m.cols();
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += row[j] * xi;
  }
  return out;
}

void add_outer(Matrix& acc, const Vec& r, const Vec& c) {
  if (acc.rows() != r.size() || acc.cols() != c.size()) {
    shape_error("add_outer", acc.rows(), acc.cols(), r.size(), c.size());
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ri = r[i];
    if (ri == 0.0) continue;
    double* row = acc.data() + i * acc.cols();
    for (std::size_t j = 0; j < c.size(); ++j) row[j] += ri * c[j];
  }
}

void axpy(Vec& y, double a, const Vec& x) {
  if (y.size() != x.size()) shape_error("axpy", y.size(), 1, x.size(), 1);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

Vec vadd(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) shape_error("vadd", a.size(), 1, b.size(), 1);
  Vec out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Vec vmul(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) shape_error("vmul", a.size(), 1, b.size(), 1);
  Vec out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out[i] *= b[i];
  return out;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Vec concat(const Vec& a, const Vec& b, const Vec& c) {
  Vec out;
  out.reserve(a.size() + b.size() + c.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

Vec slice(const Vec& v, std::size_t begin, std::size_t end) {
  if (begin > end || end > v.size()) shape_error("slice", v.size(), 1, begin, end);
  return Vec(v.begin() + begin, v.begin() + end);
}

}  // namespace ats
