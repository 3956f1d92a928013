// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qcap/data.hpp"
#include "qcap/mlp.hpp"
#include "qcap/model.hpp"

namespace qcap {

struct AdamConfig {
  double lr = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t t = 0;

  explicit AdamState(std::size_t d = 0) : m(d, 0.0), v(d, 0.0) {}
};

// One bias-corrected ADAM update in place. Throws NumericalError on a
// non-finite gradient, leaving theta and state untouched.
void adam_step(std::span<double> theta, std::span<const double> grad, AdamState& state,
               const AdamConfig& config);

struct TrainConfig {
  double lr = 0.1;
  std::size_t iters = 100;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Stop once the loss reaches this value; disabled when negative.
  double loss_target = -1.0;
  // Samples for the Fisher estimate behind the final Fisher-Rao norm; 0 skips it.
  std::size_t fisher_k = 100;
  unsigned jobs = 1;

  AdamConfig adam() const { return {lr, beta1, beta2, eps}; }
  void validate() const;
};

struct TrainRecord {
  std::size_t trial = 0;
  std::vector<double> loss_trace;  // iters + 1 entries unless stopped early
  double final_loss = 0.0;
  std::vector<double> final_theta;
  double fisher_rao_norm = 0.0;
  double wall_seconds = 0.0;
  bool aborted = false;
  bool converged = false;
};

// Full-batch cross-entropy training from theta_0 ~ U[-1,1]^d drawn from
// stream (seed, kTrainInit, trial).
TrainRecord train_model(const StatisticalModel& model, const Dataset& ds,
                        const TrainConfig& config, std::size_t trial = 0);
// As above from a given starting point.
TrainRecord train_from(const StatisticalModel& model, const Dataset& ds,
                       const TrainConfig& config, std::vector<double> theta0,
                       std::size_t trial = 0);

std::vector<TrainRecord> run_trials(const StatisticalModel& model, const Dataset& ds,
                                    const TrainConfig& config);

struct TrialSummary {
  std::size_t trials = 0;
  std::size_t aborted = 0;
  double mean_final_loss = 0.0;
  double std_final_loss = 0.0;
  double mean_fisher_rao = 0.0;
  double std_fisher_rao = 0.0;
  std::vector<double> mean_loss_trace;
};

// Aborted trials are counted and excluded from the statistics.
TrialSummary summarise(std::span<const TrainRecord> records);

struct ConfusionConfig {
  std::vector<double> fractions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::size_t runs = 10;
  std::size_t n = 1000;
  std::size_t n_features = 6;
  double spread = 1.0;
  std::vector<int> hidden{110};
  Activation activation = Activation::kTanh;
  double lr = 0.1;
  double loss_target = 1e-3;
  std::size_t max_iters = 5000;
  std::size_t local_samples = 100;
  double radius = 0.05;
  std::size_t k = 100;
  double gamma = 1.0;
  double effdim_n = 0.0;  // 0 means the dataset size
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  MlpTopology topology() const;
  void validate() const;
};

struct ConfusionRow {
  double fraction = 0.0;
  std::size_t randomised = 0;
  std::size_t runs = 0;
  std::size_t converged = 0;
  std::vector<double> effdims;       // converged runs only
  std::vector<std::size_t> iterations;
  double mean_effdim = 0.0;
  double std_effdim = 0.0;
  double mean_normalised = 0.0;
  double std_normalised = 0.0;
};

struct ConfusionResult {
  std::size_t d = 0;
  std::uint64_t dataset_hash = 0;
  std::vector<ConfusionRow> rows;
  double spearman = 0.0;  // fraction vs mean effdim, NaN if undefined
};

// Points drawn uniformly from the l-infinity ball of `radius` around centre.
std::vector<std::vector<double>> local_ensemble(std::span<const double> centre, double radius,
                                                std::size_t samples, std::uint64_t seed,
                                                std::uint64_t index);

ConfusionResult confusion_experiment(const ConfusionConfig& config);

}  // namespace qcap
