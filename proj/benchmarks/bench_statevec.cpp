// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "qcap/qmodel.hpp"
#include "qcap/rng.hpp"

namespace {

using namespace qcap;

void BM_QnnProbabilities(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const QuantumNeuralNetwork m(QnnSpec::qnn(s, 9));
  RngStream rng(1, 0);
  const auto theta = uniform_parameters(m.param_count(), rng);
  std::vector<double> x(static_cast<std::size_t>(s));
  for (double& v : x) v = rng.uniform(-1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(m.probabilities(theta, x));
}
BENCHMARK(BM_QnnProbabilities)->DenseRange(4, 10, 2);

void BM_QnnGradient(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const auto method = state.range(1) ? GradientMethod::kParameterShift : GradientMethod::kAdjoint;
  const QuantumNeuralNetwork m(QnnSpec::qnn(s, 9), method);
  RngStream rng(2, 0);
  const auto theta = uniform_parameters(m.param_count(), rng);
  std::vector<double> x(static_cast<std::size_t>(s));
  for (double& v : x) v = rng.uniform(-1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(m.grad_log_prob(theta, x, 0));
}
BENCHMARK(BM_QnnGradient)->ArgsProduct({{4, 8}, {0, 1}});

}  // namespace
