// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/fisher.hpp"

#include <algorithm>
#include <cmath>

#include "qcap/data.hpp"
#include "qcap/error.hpp"
#include "qcap/parallel.hpp"
#include "qcap/spectra.hpp"
#include "qcap/stats.hpp"

namespace qcap {

InputSampler gaussian_prior(const StatisticalModel& model) {
  const std::size_t s_in = model.input_dim();
  return [&model, s_in](RngStream& rng) {
    return model.prior_input(gaussian_prior_sample(s_in, rng));
  };
}

double FisherFactor::trace() const {
  double t = 0.0;
  for (double v : rows.data()) t += v * v;
  return t;
}

std::vector<double> FisherFactor::eigenvalues() const {
  const std::size_t d = dim();
  std::vector<double> ev;
  if (rows.rows() < d) {
    ev = eigenvalues_sym(gram_rows(rows));
    ev.insert(ev.begin(), d - ev.size(), 0.0);
  } else {
    ev = eigenvalues_sym(gram_columns(rows));
  }
  return ev;
}

FisherFactor sample_fisher_factor(const StatisticalModel& model, std::span<const double> theta,
                                  std::size_t k, const InputSampler& prior, RngStream& rng) {
  if (k < 1) throw ValidationError("Fisher estimate needs k >= 1");
  const std::size_t d = model.param_count();
  if (theta.size() != d) throw ValidationError("Fisher estimate: parameter length mismatch");
  std::vector<std::vector<double>> scores;
  scores.reserve(k);
  FisherFactor out;
  for (std::size_t j = 0; j < k; ++j) {
    const auto x = prior(rng);
    const auto probs = model.probabilities(theta, x);
    const int y = sample_class(probs, rng);
    auto g = model.grad_log_prob(theta, x, y);
    bool finite = true;
    for (double v : g.grad) finite = finite && std::isfinite(v);
    if (g.clamped || !finite) {
      ++out.clamp_events;
      continue;
    }
    scores.push_back(std::move(g.grad));
  }
  if (10 * out.clamp_events > k)
    throw NumericalError("Fisher estimate: " + std::to_string(out.clamp_events) + " of " +
                         std::to_string(k) + " samples hit the probability floor");
  const double w = 1.0 / std::sqrt(static_cast<double>(scores.size()));
  out.rows = Matrix(scores.size(), d);
  for (std::size_t j = 0; j < scores.size(); ++j)
    for (std::size_t i = 0; i < d; ++i) out.rows(j, i) = w * scores[j][i];
  out.k = k;
  out.theta.assign(theta.begin(), theta.end());
  out.seed = rng.seed();
  out.stream = rng.stream();
  return out;
}

FisherEstimate estimate_fisher(const StatisticalModel& model, std::span<const double> theta,
                               std::size_t k, const InputSampler& prior, RngStream& rng) {
  auto factor = sample_fisher_factor(model, theta, k, prior, rng);
  FisherEstimate est;
  est.matrix = factor.to_matrix();
  est.k = factor.k;
  est.clamp_events = factor.clamp_events;
  est.theta = std::move(factor.theta);
  est.seed = factor.seed;
  est.stream = factor.stream;
  return est;
}

std::vector<FisherFactor> build_factor_ensemble(const StatisticalModel& model,
                                                std::span<const std::vector<double>> thetas,
                                                std::size_t k, std::uint64_t seed,
                                                unsigned jobs) {
  const auto prior = gaussian_prior(model);
  std::vector<FisherFactor> out(thetas.size());
  parallel_for(thetas.size(), jobs, [&](std::size_t i) {
    RngStream rng(seed, stream_id(StreamPurpose::kFisherInputs, i));
    out[i] = sample_fisher_factor(model, thetas[i], k, prior, rng);
  });
  return out;
}

std::vector<FisherFactor> build_factor_ensemble(const StatisticalModel& model,
                                                const EnsembleConfig& config) {
  if (config.theta_samples < 1) throw ValidationError("ensemble needs at least one theta sample");
  std::vector<std::vector<double>> thetas(config.theta_samples);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    RngStream rng(config.seed, stream_id(StreamPurpose::kThetaSample, i));
    thetas[i] = uniform_parameters(model.param_count(), rng);
  }
  return build_factor_ensemble(model, thetas, config.k, config.seed, config.jobs);
}

FisherEnsemble make_ensemble(std::vector<FisherEstimate> estimates) {
  if (estimates.empty()) throw ValidationError("empty Fisher ensemble");
  FisherEnsemble ens;
  ens.d = estimates.front().dim();
  double total = 0.0;
  for (const auto& e : estimates) {
    if (e.dim() != ens.d) throw ValidationError("Fisher ensemble: mixed dimensions");
    total += e.matrix.trace();
  }
  ens.trace_mean = total / static_cast<double>(estimates.size());
  ens.estimates = std::move(estimates);
  return ens;
}

FisherEnsemble build_ensemble(const StatisticalModel& model, const EnsembleConfig& config) {
  auto factors = build_factor_ensemble(model, config);
  std::vector<FisherEstimate> estimates(factors.size());
  parallel_for(factors.size(), config.jobs, [&](std::size_t i) {
    auto& f = factors[i];
    estimates[i] = FisherEstimate{f.to_matrix(), f.k, f.clamp_events, std::move(f.theta), f.seed,
                                  f.stream};
  });
  return make_ensemble(std::move(estimates));
}

FisherEnsemble normalise_ensemble(FisherEnsemble ens) {
  if (ens.estimates.empty()) throw ValidationError("empty Fisher ensemble");
  if (!(ens.trace_mean > 0.0))
    throw NumericalError(
        "Fisher ensemble is fully degenerate (mean trace 0); effective dimension is undefined");
  const double s = static_cast<double>(ens.d) / ens.trace_mean;
  double total = 0.0;
  for (auto& e : ens.estimates) {
    e.matrix *= s;
    total += e.matrix.trace();
  }
  ens.trace_mean = total / static_cast<double>(ens.estimates.size());
  ens.scale *= s;
  ens.normalised = true;
  return ens;
}

std::vector<std::vector<double>> ensemble_spectra(const FisherEnsemble& ens, unsigned jobs) {
  std::vector<std::vector<double>> out(ens.estimates.size());
  parallel_for(out.size(), jobs,
               [&](std::size_t i) { out[i] = eigenvalues_sym(ens.estimates[i].matrix); });
  return out;
}

std::vector<std::vector<double>> normalised_factor_spectra(std::span<const FisherFactor> factors,
                                                           unsigned jobs) {
  if (factors.empty()) throw ValidationError("empty Fisher ensemble");
  double total = 0.0;
  for (const auto& f : factors) total += f.trace();
  const double trace_mean = total / static_cast<double>(factors.size());
  if (!(trace_mean > 0.0))
    throw NumericalError(
        "Fisher ensemble is fully degenerate (mean trace 0); effective dimension is undefined");
  const double s = static_cast<double>(factors.front().dim()) / trace_mean;
  std::vector<std::vector<double>> out(factors.size());
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    out[i] = factors[i].eigenvalues();
    for (double& v : out[i]) v *= s;
  });
  return out;
}

double fisher_rao_norm(std::span<const double> theta, const Matrix& fisher) {
  return quadratic_form(theta, fisher, theta);
}

TraceDiagnostic fit_trace_decay(std::span<const int> qubit_grid, std::span<const std::size_t> dims,
                                std::span<const std::vector<double>> traces_over_d) {
  if (qubit_grid.empty()) throw ValidationError("trace diagnostic: empty qubit grid");
  if (dims.size() != qubit_grid.size() || traces_over_d.size() != qubit_grid.size())
    throw ValidationError("trace diagnostic: grid/data length mismatch");
  TraceDiagnostic out;
  std::vector<double> xs, ys, se;
  for (std::size_t i = 0; i < qubit_grid.size(); ++i) {
    TraceDiagnosticRow row;
    row.n_qubits = qubit_grid[i];
    row.d = dims[i];
    row.samples = traces_over_d[i].size();
    row.mean_trace_over_d = mean(traces_over_d[i]);
    row.std_trace_over_d = stddev(traces_over_d[i]);
    out.rows.push_back(row);
    if (!(row.mean_trace_over_d > 0.0)) out.degenerate = true;
  }
  if (out.degenerate || out.rows.size() < 2) {
    out.decay_rate = out.degenerate ? std::nan("") : 0.0;
    out.decay_rate_stderr = out.degenerate ? std::nan("") : 0.0;
    return out;
  }
  for (const auto& r : out.rows) {
    xs.push_back(r.n_qubits);
    ys.push_back(std::log(r.mean_trace_over_d));
    se.push_back(r.samples > 0 ? r.std_trace_over_d /
                                     (r.mean_trace_over_d * std::sqrt(static_cast<double>(r.samples)))
                               : 0.0);
  }
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxx = 0.0;
  for (double x : xs) sxx += (x - mx) * (x - mx);
  if (sxx == 0.0) throw ValidationError("trace diagnostic: qubit grid needs distinct values");
  double slope = 0.0, var = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double w = (xs[i] - mx) / sxx;
    slope += w * (ys[i] - my);
    var += w * w * se[i] * se[i];
  }
  out.decay_rate = slope;
  out.decay_rate_stderr = std::sqrt(var);
  out.barren_flag = slope + 2.0 * out.decay_rate_stderr < 0.0;
  return out;
}

TraceDiagnostic trace_diagnostic(std::span<const int> qubit_grid, const ModelFactory& factory,
                                 const EnsembleConfig& config) {
  if (qubit_grid.empty()) throw ValidationError("trace diagnostic: empty qubit grid");
  if (config.theta_samples < 10)
    throw ValidationError("trace diagnostic needs at least 10 theta samples per qubit count");
  std::vector<std::size_t> dims;
  std::vector<std::vector<double>> values;
  for (int s : qubit_grid) {
    const auto model = factory(s);
    const auto factors = build_factor_ensemble(*model, config);
    std::vector<double> v;
    for (const auto& f : factors) v.push_back(f.trace() / static_cast<double>(f.dim()));
    dims.push_back(model->param_count());
    values.push_back(std::move(v));
  }
  return fit_trace_decay(qubit_grid, dims, values);
}

}  // namespace qcap
