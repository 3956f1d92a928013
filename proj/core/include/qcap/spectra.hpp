// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qcap/matrix.hpp"

namespace qcap {

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column i belongs to values[i]; empty if not requested
  int sweeps = 0;
};

// Cyclic Jacobi eigensolver for real symmetric matrices. Iterates until the
// off-diagonal Frobenius mass drops below 1e-12 * ||M||_F. Throws
// ValidationError for non-symmetric input (beyond 1e-10 * max(1, ||M||_max))
// and InvariantError if it has not converged after 30 sweeps (d <= 120) or
// 60 sweeps (larger d).
EigenDecomposition eigen_sym(const Matrix& m, bool want_vectors = true);

inline std::vector<double> eigenvalues_sym(const Matrix& m) {
  return eigen_sym(m, false).values;
}

inline constexpr double kDefaultRankEps = 1e-10;

struct SpectrumStats {
  std::vector<double> eigenvalues;  // ascending
  double rank_eps = kDefaultRankEps;
  std::size_t numeric_rank = 0;     // count(lambda > rank_eps * lambda_max)
  double condition_number = 0.0;    // lambda_max / smallest lambda above threshold
  bool condition_infinite = false;  // numeric_rank < d
  double near_zero_fraction = 0.0;  // (d - numeric_rank) / d
};

// Throws InvariantError for eigenvalues below -1e-9 * lambda_max.
SpectrumStats spectrum_stats(std::vector<double> eigenvalues, double rank_eps = kDefaultRankEps);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

struct Histogram {
  std::vector<HistogramBin> bins;
  std::size_t total() const;
  // Largest single-bin share of the mass.
  double max_bin_fraction() const;
};

struct SpectrumHistogram {
  Histogram main;
  std::optional<Histogram> first_bin_zoom;
};

// Pools every eigenvalue of every spectrum and bins them uniformly over
// [0, lambda_max]. Tiny negative eigenvalues land in the first bin. If every
// eigenvalue is zero the result is a single bin [0, 0] holding all of them.
// With zoom_first_bin, the first bin's contents are re-binned over its own
// range.
SpectrumHistogram spectrum_histogram(std::span<const std::vector<double>> spectra, int bins,
                                     bool zoom_first_bin);

}  // namespace qcap
