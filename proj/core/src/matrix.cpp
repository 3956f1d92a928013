// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "qcap/error.hpp"

namespace qcap {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

double Matrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Matrix::asymmetry() const {
  if (rows_ != cols_) throw ValidationError("asymmetry: matrix is not square");
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw ValidationError("matrix addition: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matrix product: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      auto bl = b.row(l);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += ail * bl[j];
    }
  }
  return c;
}

Matrix gram_columns(const Matrix& a) {
  const std::size_t d = a.cols();
  Matrix g(d, d);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto v = a.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      const double vi = v[i];
      if (vi == 0.0) continue;
      auto gi = g.row(i);
      for (std::size_t j = i; j < d; ++j) gi[j] += vi * v[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

Matrix gram_rows(const Matrix& a) {
  const std::size_t k = a.rows();
  Matrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    auto ri = a.row(i);
    for (std::size_t j = i; j < k; ++j) {
      auto rj = a.row(j);
      double s = 0.0;
      for (std::size_t l = 0; l < a.cols(); ++l) s += ri[l] * rj[l];
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

double quadratic_form(std::span<const double> x, const Matrix& m,
                      std::span<const double> y) {
  if (m.rows() != x.size() || m.cols() != y.size())
    throw ValidationError("quadratic_form: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto mi = m.row(i);
    double inner = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) inner += mi[j] * y[j];
    s += x[i] * inner;
  }
  return s;
}

}  // namespace qcap
