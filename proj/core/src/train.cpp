// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/train.hpp"

#include <chrono>
#include <sstream>
#include <cmath>
#include <string>

#include "qcap/effdim.hpp"
#include "qcap/error.hpp"
#include "qcap/fisher.hpp"
#include "qcap/parallel.hpp"
#include "qcap/rng.hpp"
#include "qcap/stats.hpp"

namespace qcap {

void adam_step(std::span<double> theta, std::span<const double> grad, AdamState& state,
               const AdamConfig& c) {
  const std::size_t d = theta.size();
  if (grad.size() != d || state.m.size() != d || state.v.size() != d)
    throw ValidationError("adam_step: dimension mismatch");
  for (double g : grad)
    if (!std::isfinite(g)) throw NumericalError("non-finite gradient");
  ++state.t;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < d; ++i) {
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * grad[i];
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    theta[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
  }
}

void TrainConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ValidationError("learning rate must be positive");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw ValidationError("ADAM betas must lie in [0, 1)");
  if (!(eps > 0.0)) throw ValidationError("ADAM epsilon must be positive");
}

TrainRecord train_from(const StatisticalModel& model, const Dataset& ds, const TrainConfig& config,
                       std::vector<double> theta, std::size_t trial) {
  config.validate();
  ds.validate();
  if (ds.size() == 0) throw ValidationError("cannot train on an empty dataset");
  if (ds.n_features != model.input_dim())
    throw ValidationError("dataset has " + std::to_string(ds.n_features) +
                          " features but the model expects " + std::to_string(model.input_dim()));
  if (ds.n_classes != model.num_classes())
    throw ValidationError("dataset class count does not match the model");
  const auto start = std::chrono::steady_clock::now();
  TrainRecord rec;
  rec.trial = trial;
  AdamState state(theta.size());
  const AdamConfig adam = config.adam();
  for (std::size_t it = 0;; ++it) {
    const auto lg = model.cross_entropy(theta, ds);
    rec.loss_trace.push_back(lg.loss);
    if (config.loss_target >= 0.0 && lg.loss <= config.loss_target) {
      rec.converged = true;
      break;
    }
    if (it == config.iters) break;
    try {
      adam_step(theta, lg.grad, state, adam);
    } catch (const NumericalError&) {
      rec.aborted = true;
      break;
    }
  }
  rec.final_loss = rec.loss_trace.back();
  if (!std::isfinite(rec.final_loss)) rec.aborted = true;
  if (config.fisher_k > 0 && !rec.aborted) {
    RngStream rng(config.seed, stream_id(StreamPurpose::kFisherInputs, trial));
    const auto f = sample_fisher_factor(model, theta, config.fisher_k, gaussian_prior(model), rng);
    double norm = 0.0;
    for (std::size_t j = 0; j < f.rows.rows(); ++j) {
      double dot = 0.0;
      for (std::size_t i = 0; i < theta.size(); ++i) dot += f.rows(j, i) * theta[i];
      norm += dot * dot;
    }
    rec.fisher_rao_norm = norm;
  }
  rec.final_theta = std::move(theta);
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

TrainRecord train_model(const StatisticalModel& model, const Dataset& ds,
                        const TrainConfig& config, std::size_t trial) {
  RngStream rng(config.seed, stream_id(StreamPurpose::kTrainInit, trial));
  return train_from(model, ds, config, uniform_parameters(model.param_count(), rng), trial);
}

std::vector<TrainRecord> run_trials(const StatisticalModel& model, const Dataset& ds,
                                    const TrainConfig& config) {
  config.validate();
  std::vector<TrainRecord> out(config.trials);
  parallel_for(config.trials, config.jobs,
               [&](std::size_t t) { out[t] = train_model(model, ds, config, t); });
  return out;
}

TrialSummary summarise(std::span<const TrainRecord> records) {
  TrialSummary s;
  s.trials = records.size();
  std::vector<double> losses, norms;
  std::size_t trace_len = 0;
  for (const auto& r : records) {
    if (r.aborted) {
      ++s.aborted;
      continue;
    }
    losses.push_back(r.final_loss);
    norms.push_back(r.fisher_rao_norm);
    trace_len = trace_len == 0 ? r.loss_trace.size() : std::min(trace_len, r.loss_trace.size());
  }
  if (losses.empty()) return s;
  s.mean_final_loss = mean(losses);
  s.std_final_loss = losses.size() > 1 ? stddev(losses) : 0.0;
  s.mean_fisher_rao = mean(norms);
  s.std_fisher_rao = norms.size() > 1 ? stddev(norms) : 0.0;
  s.mean_loss_trace.assign(trace_len, 0.0);
  for (const auto& r : records) {
    if (r.aborted) continue;
    for (std::size_t i = 0; i < trace_len; ++i) s.mean_loss_trace[i] += r.loss_trace[i];
  }
  for (double& v : s.mean_loss_trace) v /= static_cast<double>(losses.size());
  return s;
}

MlpTopology ConfusionConfig::topology() const {
  MlpTopology t;
  t.layer_sizes.push_back(static_cast<int>(n_features));
  t.layer_sizes.insert(t.layer_sizes.end(), hidden.begin(), hidden.end());
  t.layer_sizes.push_back(2);
  t.activation = activation;
  return t;
}

void ConfusionConfig::validate() const {
  if (fractions.empty()) throw ValidationError("randomisation grid is empty");
  for (double f : fractions)
    if (!(f >= 0.0 && f <= 1.0)) {
      std::ostringstream os;
      os << "randomisation fraction " << f << " outside [0, 1]";
      throw ValidationError(os.str());
    }
  if (runs < 1) throw ValidationError("runs must be >= 1");
  if (n < 2) throw ValidationError("confusion dataset needs n >= 2");
  if (n_features < 1) throw ValidationError("confusion dataset needs at least one feature");
  if (!(lr > 0.0)) throw ValidationError("learning rate must be positive");
  if (local_samples < 1 || k < 1) throw ValidationError("local ensemble sizes must be >= 1");
  if (!(radius >= 0.0)) throw ValidationError("local ensemble radius must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in (0, 1]");
  topology().validate();
}

std::vector<std::vector<double>> local_ensemble(std::span<const double> centre, double radius,
                                                std::size_t samples, std::uint64_t seed,
                                                std::uint64_t index) {
  RngStream rng(seed, stream_id(StreamPurpose::kLocalEnsemble, index));
  std::vector<std::vector<double>> out(samples, std::vector<double>(centre.size()));
  for (auto& t : out)
    for (std::size_t i = 0; i < centre.size(); ++i) t[i] = centre[i] + rng.uniform(-radius, radius);
  return out;
}

ConfusionResult confusion_experiment(const ConfusionConfig& config) {
  config.validate();
  const Dataset clean = make_blobs(config.n, config.n_features, config.spread, config.seed);
  const Mlp model(config.topology());
  const double n_eff = config.effdim_n > 0.0 ? config.effdim_n : static_cast<double>(clean.size());

  TrainConfig tc;
  tc.lr = config.lr;
  tc.iters = config.max_iters;
  tc.trials = config.runs;
  tc.seed = config.seed;
  tc.loss_target = config.loss_target;
  tc.fisher_k = 0;

  const std::size_t n_frac = config.fractions.size();
  struct Cell {
    bool converged = false;
    double effdim = 0.0;
    std::size_t iterations = 0;
  };
  std::vector<Cell> cells(n_frac * config.runs);
  parallel_for(cells.size(), config.jobs, [&](std::size_t c) {
    const std::size_t fi = c / config.runs;
    const std::size_t run = c % config.runs;
    const std::uint64_t cell_id = fi * config.runs + run;
    RngStream label_rng(config.seed, stream_id(StreamPurpose::kLabelNoise, cell_id));
    const Dataset ds = randomise_labels(clean, config.fractions[fi], label_rng.next_u64());
    const auto rec = train_model(model, ds, tc, run);
    cells[c].iterations = rec.loss_trace.size() - 1;
    if (!rec.converged || rec.aborted) return;
    const auto thetas =
        local_ensemble(rec.final_theta, config.radius, config.local_samples, config.seed, cell_id);
    RngStream seed_rng(config.seed, stream_id(StreamPurpose::kRepeat, cell_id));
    const auto factors = build_factor_ensemble(model, thetas, config.k, seed_rng.next_u64(), 1);
    const auto spectra = normalised_factor_spectra(factors);
    cells[c].effdim = effective_dimension(spectra, config.gamma, n_eff);
    cells[c].converged = true;
  });

  ConfusionResult out;
  out.d = model.param_count();
  out.dataset_hash = dataset_hash(clean);
  std::vector<double> xs, ys;
  for (std::size_t fi = 0; fi < n_frac; ++fi) {
    ConfusionRow row;
    row.fraction = config.fractions[fi];
    row.randomised = randomised_count(clean.size(), row.fraction);
    row.runs = config.runs;
    for (std::size_t run = 0; run < config.runs; ++run) {
      const auto& cell = cells[fi * config.runs + run];
      row.iterations.push_back(cell.iterations);
      if (!cell.converged) continue;
      ++row.converged;
      row.effdims.push_back(cell.effdim);
    }
    if (!row.effdims.empty()) {
      row.mean_effdim = mean(row.effdims);
      row.std_effdim = row.effdims.size() > 1 ? stddev(row.effdims) : 0.0;
      row.mean_normalised = row.mean_effdim / static_cast<double>(out.d);
      row.std_normalised = row.std_effdim / static_cast<double>(out.d);
      xs.push_back(row.fraction);
      ys.push_back(row.mean_effdim);
    }
    out.rows.push_back(std::move(row));
  }
  out.spearman = xs.size() >= 2 ? spearman(xs, ys) : std::nan("");
  return out;
}

}  // namespace qcap
