// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "qcap/error.hpp"
#include "qcap/matrix.hpp"
#include "qcap/rng.hpp"
#include "qcap/spectra.hpp"

namespace qcap {
namespace {

Matrix random_psd(std::size_t d, std::size_t k, std::uint64_t seed) {
  RngStream rng(seed, 0);
  Matrix a(k, d);
  for (double& v : a.data()) v = rng.normal();
  return gram_columns(a);
}

TEST(Eigen, Diagonal) {
  const std::vector<double> diag{3.0, 1.0, 2.0};
  const auto e = eigen_sym(Matrix::diagonal(diag));
  EXPECT_EQ(e.values, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(Eigen, TwoByTwo) {
  Matrix m(2, 2);
  m(0, 0) = m(1, 1) = 2.0;
  m(0, 1) = m(1, 0) = 1.0;
  const auto e = eigen_sym(m);
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 3.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(e.vectors(0, 0) * e.vectors(1, 0), -0.5, 1e-14);
}

TEST(Eigen, ReconstructsRandomPsd) {
  const std::size_t d = 40;
  const Matrix m = random_psd(d, 60, 1);
  const auto e = eigen_sym(m);
  EXPECT_LE(e.sweeps, 30);
  Matrix rec(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < d; ++l) s += e.vectors(i, l) * e.values[l] * e.vectors(j, l);
      rec(i, j) = s;
    }
  double err = 0.0;
  for (std::size_t i = 0; i < d * d; ++i) err = std::max(err, std::abs(rec.data()[i] - m.data()[i]));
  EXPECT_LT(err, 1e-10 * m.max_abs());
  // Orthonormal eigenvectors.
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += e.vectors(i, a) * e.vectors(i, b);
      EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-12);
    }
}

TEST(Eigen, SumEqualsTraceAndSorted) {
  for (std::uint64_t seed = 2; seed < 6; ++seed) {
    const Matrix m = random_psd(17, 9, seed);
    const auto v = eigenvalues_sym(m);
    EXPECT_NEAR(std::accumulate(v.begin(), v.end(), 0.0), m.trace(), 1e-10 * m.trace());
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  }
}

TEST(Eigen, RejectsNonSymmetric) {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(eigen_sym(m), ValidationError);
  EXPECT_THROW(eigen_sym(Matrix(2, 3)), ValidationError);
}

TEST(Eigen, EmptyAndScalar) {
  EXPECT_TRUE(eigenvalues_sym(Matrix()).empty());
  const std::vector<double> one{7.0};
  EXPECT_EQ(eigenvalues_sym(Matrix::diagonal(one)), std::vector<double>{7.0});
}

TEST(SpectrumStats, RankAndCondition) {
  const auto s = spectrum_stats({0.0, 1e-14, 0.5, 2.0});
  EXPECT_EQ(s.numeric_rank, 2u);
  EXPECT_TRUE(s.condition_infinite);
  EXPECT_TRUE(std::isinf(s.condition_number));
  EXPECT_DOUBLE_EQ(s.near_zero_fraction, 0.5);
  const auto full = spectrum_stats({1.0, 2.0, 3.0});
  EXPECT_EQ(full.numeric_rank, 3u);
  EXPECT_FALSE(full.condition_infinite);
  EXPECT_DOUBLE_EQ(full.near_zero_fraction, 0.0);
  EXPECT_DOUBLE_EQ(full.condition_number, 3.0);
}

TEST(SpectrumStats, RejectsNegativeEigenvalues) {
  EXPECT_THROW(spectrum_stats({-0.1, 1.0}), InvariantError);
  EXPECT_NO_THROW(spectrum_stats({-1e-12, 1.0}));
}

TEST(Histogram, AllZeros) {
  const std::vector<std::vector<double>> spectra{{0.0, 0.0}, {0.0, 0.0}};
  const auto h = spectrum_histogram(spectra, 50, true);
  ASSERT_EQ(h.main.bins.size(), 1u);
  EXPECT_EQ(h.main.bins[0].lo, 0.0);
  EXPECT_EQ(h.main.bins[0].hi, 0.0);
  EXPECT_EQ(h.main.bins[0].count, 4u);
  EXPECT_DOUBLE_EQ(h.main.max_bin_fraction(), 1.0);
}

TEST(Histogram, ZerosAndOneLargeValue) {
  std::vector<double> s(99, 0.0);
  s.push_back(100.0);
  const std::vector<std::vector<double>> spectra{s};
  const auto h = spectrum_histogram(spectra, 50, true);
  ASSERT_EQ(h.main.bins.size(), 50u);
  EXPECT_EQ(h.main.total(), 100u);
  EXPECT_EQ(h.main.bins.front().count, 99u);
  EXPECT_EQ(h.main.bins.back().count, 1u);
  EXPECT_DOUBLE_EQ(h.main.bins.front().hi, 2.0);
  EXPECT_DOUBLE_EQ(h.main.max_bin_fraction(), 0.99);
  ASSERT_TRUE(h.first_bin_zoom.has_value());
  EXPECT_EQ(h.first_bin_zoom->total(), 99u);
}

TEST(Histogram, ConservesCountsAcrossSpectra) {
  std::vector<std::vector<double>> spectra;
  RngStream rng(7, 0);
  for (int i = 0; i < 5; ++i) {
    std::vector<double> s(8);
    for (double& v : s) v = rng.uniform(0, 3);
    spectra.push_back(s);
  }
  const auto h = spectrum_histogram(spectra, 10, false);
  EXPECT_EQ(h.main.total(), 40u);
  EXPECT_FALSE(h.first_bin_zoom.has_value());
  for (std::size_t i = 1; i < h.main.bins.size(); ++i)
    EXPECT_DOUBLE_EQ(h.main.bins[i].lo, h.main.bins[i - 1].hi);
}

}  // namespace
}  // namespace qcap
