// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/model.hpp"

#include <algorithm>
#include <cmath>

#include "qcap/error.hpp"

namespace qcap {

void StatisticalModel::check_theta(std::span<const double> theta) const {
  if (theta.size() != param_count())
    throw ValidationError(describe() + ": expected " + std::to_string(param_count()) +
                          " parameters, got " + std::to_string(theta.size()));
}

void StatisticalModel::check_input(std::span<const double> x) const {
  if (x.size() != input_dim())
    throw ValidationError(describe() + ": expected input of length " +
                          std::to_string(input_dim()) + ", got " + std::to_string(x.size()));
}

LossGradient StatisticalModel::cross_entropy(std::span<const double> theta,
                                             const Dataset& ds) const {
  check_theta(theta);
  if (ds.n_features != input_dim()) throw ValidationError("dataset feature count mismatch");
  if (ds.size() == 0) throw ValidationError("cross_entropy: empty dataset");
  LossGradient out;
  out.grad.assign(param_count(), 0.0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto g = grad_log_prob(theta, ds.row(i), ds.labels[i]);
    out.loss -= std::log(std::max(g.prob, kProbFloor));
    if (g.clamped) ++out.clamped;
    for (std::size_t j = 0; j < g.grad.size(); ++j) out.grad[j] -= g.grad[j];
  }
  const double inv_n = 1.0 / static_cast<double>(ds.size());
  out.loss *= inv_n;
  for (double& v : out.grad) v *= inv_n;
  return out;
}

std::vector<double> uniform_parameters(std::size_t d, RngStream& rng) {
  std::vector<double> theta(d);
  for (double& v : theta) v = rng.uniform(-1.0, 1.0);
  return theta;
}

int sample_class(std::span<const double> probs, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    acc += probs[c];
    if (u < acc) return static_cast<int>(c);
  }
  // u landed in the rounding gap above the cumulative sum.
  for (std::size_t c = probs.size(); c-- > 0;)
    if (probs[c] > 0.0) return static_cast<int>(c);
  return 0;
}

}  // namespace qcap
