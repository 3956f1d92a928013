// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qcap {

// kappa = gamma * n / (2 pi ln n)
double kappa(double gamma, double n);

// Effective dimension from the eigenvalues of a normalised Fisher ensemble
// (one ascending or unordered list per parameter sample).
double effective_dimension(std::span<const std::vector<double>> spectra, double gamma, double n);

// Upper envelope d log(1 + kappa) / log(kappa), reached when every F is I.
double effdim_envelope(std::size_t d, double gamma, double n);

struct EffDimResult {
  double gamma = 1.0;
  std::size_t d = 0;
  std::vector<double> n_grid;
  std::vector<double> kappas;
  std::vector<double> values;
  std::vector<double> normalised;
};

// n_grid must be strictly ascending.
EffDimResult effdim_curve(std::span<const std::vector<double>> spectra, std::size_t d,
                          double gamma, std::span<const double> n_grid);

// `points` values spaced evenly in log10 between lo and hi, inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);
std::vector<double> default_n_grid();

struct BoundInputs {
  double d_eff = 0.0;
  double gamma = 1.0;
  double n = 0.0;
  double alpha = 1.0;
  double M = 0.0;  // M1^alpha * M2
  double B = 1.0;
  double c = 1.0;
};

struct BoundResult {
  double log_kappa = 0.0;  // log of gamma n^(1/alpha) / (2 pi log n^(1/alpha))
  double log_rhs = 0.0;
  double rhs = 0.0;        // exp(log_rhs); may underflow to 0
  double deviation = 0.0;  // 4 M sqrt(2 pi log n / (gamma n))
};

// Throws ValidationError for invalid inputs (non-positive values, alpha or
// gamma outside (0, 1], n <= 1) and NumericalError for alpha < 0.05.
BoundResult generalisation_bound_rhs(const BoundInputs& in);

}  // namespace qcap
