// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "qcap/effdim.hpp"
#include "qcap/fisher.hpp"
#include "qcap/qmodel.hpp"
#include "qcap/spectra.hpp"

namespace {

using namespace qcap;

void BM_FisherFactor(benchmark::State& state) {
  const QuantumNeuralNetwork m(QnnSpec::qnn(4, 9));
  RngStream trng(3, 0);
  const auto theta = uniform_parameters(m.param_count(), trng);
  const auto prior = gaussian_prior(m);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    RngStream rng(3, 1);
    benchmark::DoNotOptimize(sample_fisher_factor(m, theta, k, prior, rng));
  }
}
BENCHMARK(BM_FisherFactor)->Arg(10)->Arg(100);

void BM_EigenSym(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  RngStream rng(4, 0);
  Matrix a(d, d);
  for (double& v : a.data()) v = rng.normal();
  const Matrix m = gram_columns(a);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_sym(m));
}
BENCHMARK(BM_EigenSym)->Arg(40)->Arg(100);

void BM_EffectiveDimension(benchmark::State& state) {
  RngStream rng(5, 0);
  std::vector<std::vector<double>> spectra(100, std::vector<double>(40));
  for (auto& s : spectra)
    for (double& v : s) v = rng.uniform(0, 2);
  const auto grid = default_n_grid();
  for (auto _ : state) benchmark::DoNotOptimize(effdim_curve(spectra, 40, 1.0, grid));
}
BENCHMARK(BM_EffectiveDimension);

}  // namespace
