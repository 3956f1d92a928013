// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qcap {

// Dense row-major matrix of doubles. Small on purpose: the largest matrices
// handled here are a few hundred rows wide.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double trace() const;
  double max_abs() const;
  double frobenius_norm() const;
  // max_{ij} |A_ij - A_ji|; zero for exactly symmetric matrices.
  double asymmetry() const;

  Matrix transpose() const;
  Matrix& operator*=(double s);
  Matrix& operator+=(const Matrix& other);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

// A^T A for a k x d matrix, returned as d x d. Symmetric by construction:
// only the upper triangle is accumulated and then mirrored.
Matrix gram_columns(const Matrix& a);

// A A^T for a k x d matrix, returned as k x k (mirrored like gram_columns).
Matrix gram_rows(const Matrix& a);

// x^T M y
double quadratic_form(std::span<const double> x, const Matrix& m,
                      std::span<const double> y);

}  // namespace qcap
