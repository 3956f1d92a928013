// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qcap/data.hpp"
#include "qcap/rng.hpp"

namespace qcap {

// Probabilities below this are clamped before dividing or taking logs.
inline constexpr double kProbFloor = 1e-12;

// d/dtheta log p(y | x; theta), plus the probability it was divided by.
struct GradLogProb {
  std::vector<double> grad;
  double prob = 0.0;
  bool clamped = false;
};

// Mean cross-entropy over a dataset and its parameter gradient.
struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;
  std::size_t clamped = 0;
};

// A parameterised conditional distribution p(y | x; theta) over a finite set
// of classes. Implementations are immutable; theta is passed per call so one
// model object can be shared between threads.
class StatisticalModel {
 public:
  virtual ~StatisticalModel() = default;

  virtual std::size_t param_count() const = 0;
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t num_classes() const = 0;
  virtual std::string describe() const = 0;

  virtual std::vector<double> probabilities(std::span<const double> theta,
                                            std::span<const double> x) const = 0;
  virtual GradLogProb grad_log_prob(std::span<const double> theta, std::span<const double> x,
                                    int y) const = 0;

  // Maps a standard-normal prior draw into the model's input domain.
  virtual std::vector<double> prior_input(std::span<const double> gaussian) const {
    return {gaussian.begin(), gaussian.end()};
  }

  // -(1/n) sum_i log p(y_i | x_i; theta) and its gradient.
  virtual LossGradient cross_entropy(std::span<const double> theta, const Dataset& ds) const;

 protected:
  void check_theta(std::span<const double> theta) const;
  void check_input(std::span<const double> x) const;
};

// theta ~ U[-1, 1]^d
std::vector<double> uniform_parameters(std::size_t d, RngStream& rng);

// Draws a class from a probability vector.
int sample_class(std::span<const double> probs, RngStream& rng);

}  // namespace qcap
