// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "qcap/data.hpp"
#include "qcap/mlp.hpp"
#include "qcap/rng.hpp"

namespace {

using namespace qcap;

void BM_MlpGradient(benchmark::State& state) {
  const Mlp m(MlpTopology{{6, 110, 2}, false});
  RngStream rng(6, 0);
  const auto theta = uniform_parameters(m.param_count(), rng);
  std::vector<double> x(6);
  for (double& v : x) v = rng.uniform(-1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(m.grad_log_prob(theta, x, 1));
}
BENCHMARK(BM_MlpGradient);

void BM_MlpCrossEntropy(benchmark::State& state) {
  const Mlp m(MlpTopology{{6, 110, 2}, false});
  const auto ds = make_blobs(static_cast<std::size_t>(state.range(0)), 6, 1.0, 7);
  RngStream rng(7, 0);
  const auto theta = uniform_parameters(m.param_count(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(m.cross_entropy(theta, ds));
}
BENCHMARK(BM_MlpCrossEntropy)->Arg(100)->Arg(1000);

}  // namespace
