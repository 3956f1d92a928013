// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "qcap/matrix.hpp"
#include "qcap/model.hpp"
#include "qcap/rng.hpp"

namespace qcap {

// Draws one input x from the prior p(x).
using InputSampler = std::function<std::vector<double>(RngStream&)>;

// Standard-normal prior mapped into the model's input domain.
InputSampler gaussian_prior(const StatisticalModel& model);

// Empirical Fisher kept in factored form: F = R^T R with R holding one
// scaled score vector g_j / sqrt(k_used) per row. Cheap to store when k < d.
struct FisherFactor {
  Matrix rows;  // k_used x d
  std::size_t k = 0;
  std::size_t clamp_events = 0;
  std::vector<double> theta;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::size_t dim() const { return rows.cols(); }
  Matrix to_matrix() const { return gram_columns(rows); }
  double trace() const;
  // Ascending eigenvalues of F (length d). Uses the k x k Gram matrix and
  // pads with zeros when that is smaller than d x d.
  std::vector<double> eigenvalues() const;
};

struct FisherEstimate {
  Matrix matrix;  // d x d, symmetric PSD
  std::size_t k = 0;
  std::size_t clamp_events = 0;
  std::vector<double> theta;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::size_t dim() const { return matrix.rows(); }
};

// Draws (x_j, y_j) with x_j from the prior and y_j from the model's own
// conditional p(y | x_j; theta), and stacks the scores
// g_j = d/dtheta log p(y_j | x_j; theta). Samples whose probability hit the
// floor are skipped and counted; more than 10% skipped throws NumericalError.
FisherFactor sample_fisher_factor(const StatisticalModel& model, std::span<const double> theta,
                                  std::size_t k, const InputSampler& prior, RngStream& rng);

// (1/k) sum_j g_j g_j^T
FisherEstimate estimate_fisher(const StatisticalModel& model, std::span<const double> theta,
                               std::size_t k, const InputSampler& prior, RngStream& rng);

struct FisherEnsemble {
  std::vector<FisherEstimate> estimates;
  std::size_t d = 0;
  double trace_mean = 0.0;
  // 1 for a raw ensemble; d / trace_mean of the raw ensemble once normalised.
  double scale = 1.0;
  bool normalised = false;
};

struct EnsembleConfig {
  std::size_t theta_samples = 100;
  std::size_t k = 100;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

// theta_i ~ U[-1,1]^d from stream (seed, kThetaSample, i); the inputs of
// sample i come from stream (seed, kFisherInputs, i).
FisherEnsemble build_ensemble(const StatisticalModel& model, const EnsembleConfig& config);
std::vector<FisherFactor> build_factor_ensemble(const StatisticalModel& model,
                                                const EnsembleConfig& config);
// As build_factor_ensemble, with caller-supplied parameter points.
std::vector<FisherFactor> build_factor_ensemble(const StatisticalModel& model,
                                                std::span<const std::vector<double>> thetas,
                                                std::size_t k, std::uint64_t seed,
                                                unsigned jobs);

FisherEnsemble make_ensemble(std::vector<FisherEstimate> estimates);

// Scales every matrix by d / trace_mean so the mean trace becomes d. Throws
// NumericalError when trace_mean is zero.
FisherEnsemble normalise_ensemble(FisherEnsemble ensemble);

// Eigenvalues of each matrix of the ensemble (ascending).
std::vector<std::vector<double>> ensemble_spectra(const FisherEnsemble& ensemble,
                                                  unsigned jobs = 1);
// Eigenvalues of the normalised ensemble built from factors.
std::vector<std::vector<double>> normalised_factor_spectra(
    std::span<const FisherFactor> factors, unsigned jobs = 1);

// theta^T F theta
double fisher_rao_norm(std::span<const double> theta, const Matrix& fisher);

struct TraceDiagnosticRow {
  int n_qubits = 0;
  std::size_t d = 0;
  double mean_trace_over_d = 0.0;
  double std_trace_over_d = 0.0;
  std::size_t samples = 0;
};

struct TraceDiagnostic {
  std::vector<TraceDiagnosticRow> rows;
  // Slope of log(mean tr(F)/d) against qubit count, with its standard error
  // propagated from the per-row sampling error.
  double decay_rate = 0.0;
  double decay_rate_stderr = 0.0;
  bool degenerate = false;     // some mean trace is zero; no fit
  bool barren_flag = false;    // decay_rate + 2 * stderr < 0
};

using ModelFactory = std::function<std::unique_ptr<StatisticalModel>(int n_qubits)>;

// Mean of tr(F)/d over config.theta_samples parameter draws (at least 10)
// for each qubit count in the grid.
TraceDiagnostic trace_diagnostic(std::span<const int> qubit_grid, const ModelFactory& factory,
                                 const EnsembleConfig& config);
// Fit used by trace_diagnostic; `traces_over_d[i]` holds the per-sample
// values of rows[i].
TraceDiagnostic fit_trace_decay(std::span<const int> qubit_grid,
                                std::span<const std::size_t> dims,
                                std::span<const std::vector<double>> traces_over_d);

}  // namespace qcap
