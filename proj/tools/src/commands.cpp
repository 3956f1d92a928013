// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qcap/comparator.hpp"
#include "qcap/data.hpp"
#include "qcap/effdim.hpp"
#include "qcap/error.hpp"
#include "qcap/io.hpp"
#include "qcap/mlp.hpp"
#include "qcap/spectra.hpp"
#include "qcap/stats.hpp"
#include "qcap/statevec.hpp"
#include "qcap/train.hpp"

namespace qcap::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kFormat = "qcap/1";

std::vector<OptionSpec> with_common(std::vector<OptionSpec> opts) {
  opts.push_back({"seed", "0", "master RNG seed"});
  opts.push_back({"grad", "adjoint", "quantum gradient route: adjoint or shift"});
  return opts;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Values that may be NaN or infinite go to JSON as null.
Json jnum(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

GradientMethod parse_grad(const std::string& s) {
  if (s == "adjoint") return GradientMethod::kAdjoint;
  if (s == "shift") return GradientMethod::kParameterShift;
  throw ValidationError("--grad: expected 'adjoint' or 'shift', got '" + s + "'");
}

int positive_int(const Params& p, const std::string& key) {
  const auto v = p.integer(key);
  if (v < 1 || v > 1 << 20) throw ValidationError("--" + key + " must be a positive integer");
  return static_cast<int>(v);
}

std::size_t positive_count(const Params& p, const std::string& key) {
  const auto v = p.count(key);
  if (v < 1) throw ValidationError("--" + key + " must be >= 1");
  return static_cast<std::size_t>(v);
}

double checked_gamma(const Params& p) {
  const double g = p.real("gamma");
  if (!(g > 0.0 && g <= 1.0)) throw ValidationError("--gamma must lie in (0, 1], got " + p.raw("gamma"));
  return g;
}

std::uint64_t derived_seed(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index) {
  return RngStream(seed, stream_id(purpose, index)).next_u64();
}

class Writer {
 public:
  Writer(const RunContext& ctx, std::string command, const Params& params)
      : ctx_(ctx), command_(std::move(command)), params_(params),
        hash_(config_hash(command_, params)) {
    std::error_code ec;
    fs::create_directories(ctx_.out_dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + ctx_.out_dir.string());
  }

  const std::string& hash() const { return hash_; }

  fs::path path(const std::string& suffix) const {
    return ctx_.out_dir / (command_ + "-" + hash_ + suffix);
  }

  // CSV text must not include the header comment line.
  void csv(const std::string& suffix, const std::string& body) {
    write(suffix, "# config_hash=" + hash_ + "\n" + body);
  }

  void json(const std::string& suffix, Json j) {
    Json out;
    out["config_hash"] = hash_;
    out["command"] = command_;
    for (auto& [k, v] : j.items()) out[k] = v;
    write(suffix, out.dump(2) + "\n");
  }

  void text(const std::string& suffix, const std::string& body) {
    write(suffix, "# config_hash=" + hash_ + "\n" + body);
  }

  void add(const fs::path& p) { result_.files.push_back(p); }

  RunResult finish() {
    Json m;
    m["format"] = kFormat;
    m["command"] = command_;
    m["config_hash"] = hash_;
    Json cfg = Json::object();
    for (const auto& [k, v] : params_.values()) cfg[k] = v;
    m["config"] = cfg;
    write("-manifest.json", m.dump(2) + "\n");
    result_.config_hash = hash_;
    return result_;
  }

  std::ostream* console() const { return ctx_.console; }

 private:
  void write(const std::string& suffix, const std::string& content) {
    const auto p = path(suffix);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + p.string());
    out << content;
    if (!out) throw ValidationError("write failed for " + p.string());
    result_.files.push_back(p);
  }

  const RunContext& ctx_;
  std::string command_;
  const Params& params_;
  std::string hash_;
  RunResult result_;
};

EnsembleConfig ensemble_config(const Params& p, const RunContext& ctx) {
  EnsembleConfig c;
  c.theta_samples = positive_count(p, "samples");
  c.k = positive_count(p, "k");
  c.seed = p.count("seed");
  c.jobs = ctx.jobs;
  return c;
}

BuiltModel model_from(const Params& p, const EnsembleConfig& cfg) {
  return build_model(p.str("model"), positive_int(p, "qubits"),
                     static_cast<std::size_t>(positive_count(p, "d")), parse_grad(p.str("grad")),
                     cfg);
}

void say(const Writer& w, const std::string& line) {
  if (w.console()) *w.console() << line << '\n';
}

// --- spectrum -------------------------------------------------------------

RunResult cmd_spectrum(const Params& p, const RunContext& ctx) {
  const auto cfg = ensemble_config(p, ctx);
  const int bins = positive_int(p, "bins");
  const bool zoom = p.flag("zoom");
  const auto built = model_from(p, cfg);
  Writer w(ctx, "spectrum", p);

  auto factors = build_factor_ensemble(*built.model, cfg);
  const auto spectra = normalised_factor_spectra(factors, ctx.jobs);
  std::vector<double> ranks, near_zero, conds;
  std::size_t infinite = 0;
  double trace_total = 0.0;
  std::size_t clamps = 0;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const auto st = spectrum_stats(spectra[i]);
    ranks.push_back(static_cast<double>(st.numeric_rank));
    near_zero.push_back(st.near_zero_fraction);
    if (st.condition_infinite)
      ++infinite;
    else
      conds.push_back(st.condition_number);
    trace_total += factors[i].trace();
    clamps += factors[i].clamp_events;
  }
  const auto hist = spectrum_histogram(spectra, bins, zoom);
  auto hist_csv = [](const Histogram& h) {
    std::string s = "bin_lo,bin_hi,count\n";
    for (const auto& b : h.bins) s += num(b.lo) + "," + num(b.hi) + "," + std::to_string(b.count) + "\n";
    return s;
  };
  w.csv("-hist.csv", hist_csv(hist.main));
  if (hist.first_bin_zoom) w.csv("-zoom.csv", hist_csv(*hist.first_bin_zoom));

  Json j;
  j["model"] = built.description;
  j["d"] = built.model->param_count();
  j["samples"] = cfg.theta_samples;
  j["k"] = cfg.k;
  j["bins"] = bins;
  j["normalised"] = true;
  j["raw_trace_mean"] = trace_total / static_cast<double>(factors.size());
  j["clamp_events"] = clamps;
  j["rank_eps"] = kDefaultRankEps;
  j["mean_numeric_rank"] = mean(ranks);
  j["mean_near_zero_fraction"] = mean(near_zero);
  j["infinite_condition_count"] = infinite;
  j["mean_finite_condition_number"] = conds.empty() ? Json(nullptr) : jnum(mean(conds));
  j["max_bin_fraction"] = hist.main.max_bin_fraction();
  Json per = Json::array();
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const auto st = spectrum_stats(spectra[i]);
    per.push_back({{"numeric_rank", st.numeric_rank},
                   {"near_zero_fraction", st.near_zero_fraction},
                   {"condition_number", st.condition_infinite ? Json(nullptr)
                                                              : jnum(st.condition_number)}});
  }
  j["per_sample"] = per;
  w.json("-stats.json", j);

  if (p.flag("save-ensemble")) {
    std::vector<FisherEstimate> est;
    for (auto& f : factors)
      est.push_back({f.to_matrix(), f.k, f.clamp_events, std::move(f.theta), f.seed, f.stream});
    const auto base = w.path("-ensemble");
    save_ensemble(base, make_ensemble(std::move(est)), built.description);
    w.add(fs::path(base.string() + ".json"));
    w.add(fs::path(base.string() + ".csv"));
  }
  say(w, built.description + ": mean rank " + num(mean(ranks)) + ", near-zero fraction " +
             num(mean(near_zero)) + ", max bin " + num(hist.main.max_bin_fraction()));
  return w.finish();
}

// --- effdim ---------------------------------------------------------------

RunResult cmd_effdim(const Params& p, const RunContext& ctx) {
  const double gamma = checked_gamma(p);
  const auto grid = log_grid(p.real("n-min"), p.real("n-max"), positive_count(p, "n-points"));
  const auto cfg = ensemble_config(p, ctx);
  std::vector<std::vector<double>> spectra;
  std::string description;
  std::size_t d = 0;
  if (p.str("model") == "identity-fisher") {
    d = positive_count(p, "d");
    spectra.assign(cfg.theta_samples, std::vector<double>(d, 1.0));
    description = "identity-fisher";
  } else {
    const auto built = model_from(p, cfg);
    const auto factors = build_factor_ensemble(*built.model, cfg);
    spectra = normalised_factor_spectra(factors, ctx.jobs);
    d = built.model->param_count();
    description = built.description;
  }
  Writer w(ctx, "effdim", p);
  const auto r = effdim_curve(spectra, d, gamma, grid);
  std::string body = "n,kappa,effdim,effdim_normalised\n";
  for (std::size_t i = 0; i < r.n_grid.size(); ++i)
    body += num(r.n_grid[i]) + "," + num(r.kappas[i]) + "," + num(r.values[i]) + "," +
            num(r.normalised[i]) + "\n";
  w.csv(".csv", body);
  Json j;
  j["model"] = description;
  j["d"] = d;
  j["gamma"] = gamma;
  j["samples"] = cfg.theta_samples;
  j["k"] = cfg.k;
  j["final_normalised"] = r.normalised.back();
  w.json(".json", j);
  say(w, description + ": normalised effective dimension " + num(r.normalised.front()) + " at n=" +
             num(r.n_grid.front()) + ", " + num(r.normalised.back()) + " at n=" +
             num(r.n_grid.back()));
  return w.finish();
}

// --- train ----------------------------------------------------------------

Dataset load_named_dataset(const Params& p, int s_in) {
  const auto& name = p.str("dataset");
  if (name == "iris2") return normalize_features(load_iris_binary());
  if (name == "blobs")
    return normalize_features(make_blobs(positive_count(p, "blobs-n"),
                                         static_cast<std::size_t>(s_in), p.real("blobs-spread"),
                                         p.count("seed")));
  throw ValidationError("unknown dataset '" + name + "'; available datasets: iris2, blobs");
}

RunResult cmd_train(const Params& p, const RunContext& ctx) {
  TrainConfig tc;
  tc.lr = p.real("lr");
  tc.iters = static_cast<std::size_t>(p.count("iters"));
  tc.trials = positive_count(p, "trials");
  tc.seed = p.count("seed");
  tc.fisher_k = static_cast<std::size_t>(p.count("fisher-k"));
  tc.jobs = ctx.jobs;
  tc.validate();
  const int s_in = positive_int(p, "qubits");
  const Dataset ds = load_named_dataset(p, s_in);
  EnsembleConfig sel;
  sel.seed = tc.seed;
  sel.jobs = ctx.jobs;
  const auto built = model_from(p, sel);
  Writer w(ctx, "train", p);
  const auto records = run_trials(*built.model, ds, tc);
  const auto s = summarise(records);

  std::string body = "trial,iter,loss\n";
  for (const auto& r : records)
    for (std::size_t i = 0; i < r.loss_trace.size(); ++i)
      body += std::to_string(r.trial) + "," + std::to_string(i) + "," + num(r.loss_trace[i]) + "\n";
  w.csv("-trace.csv", body);

  Json j;
  j["model"] = built.description;
  j["dataset"] = p.str("dataset");
  j["dataset_hash"] = hex64(dataset_hash(ds));
  j["d"] = built.model->param_count();
  j["trials"] = s.trials;
  j["aborted"] = s.aborted;
  j["iters"] = tc.iters;
  j["lr"] = tc.lr;
  j["mean_final_loss"] = s.mean_final_loss;
  j["std_final_loss"] = s.std_final_loss;
  j["mean_final_loss_x100"] = 100.0 * s.mean_final_loss;
  j["mean_fisher_rao_norm"] = s.mean_fisher_rao;
  j["std_fisher_rao_norm"] = s.std_fisher_rao;
  j["fisher_k"] = tc.fisher_k;
  j["mean_loss_trace"] = s.mean_loss_trace;
  Json per = Json::array();
  for (const auto& r : records)
    per.push_back({{"trial", r.trial},
                   {"final_loss", jnum(r.final_loss)},
                   {"fisher_rao_norm", jnum(r.fisher_rao_norm)},
                   {"aborted", r.aborted}});
  j["per_trial"] = per;
  w.json("-summary.json", j);
  say(w, built.description + ": mean final loss " + num(s.mean_final_loss) +
             ", mean Fisher-Rao norm " + num(s.mean_fisher_rao) + " over " +
             std::to_string(s.trials - s.aborted) + " trials");
  return w.finish();
}

// --- sensitivity ----------------------------------------------------------

RunResult cmd_sensitivity(const Params& p, const RunContext& ctx) {
  const double gamma = checked_gamma(p);
  const double n = p.real("n");
  const auto grid = p.integers("grid");
  if (grid.empty()) throw ValidationError("--grid must list at least one sample count");
  for (int g : grid)
    if (g < 1) throw ValidationError("--grid entries must be >= 1");
  const std::size_t repeats = positive_count(p, "repeats");
  const std::uint64_t seed = p.count("seed");
  EnsembleConfig sel;
  sel.seed = seed;
  sel.jobs = ctx.jobs;
  const auto built = model_from(p, sel);
  const std::size_t d = built.model->param_count();
  Writer w(ctx, "sensitivity", p);
  std::string body = "samples,repeats,mean_normalised,std_normalised\n";
  Json rows = Json::array();
  for (int g : grid) {
    std::vector<double> vals;
    for (std::size_t r = 0; r < repeats; ++r) {
      EnsembleConfig cfg;
      cfg.theta_samples = static_cast<std::size_t>(g);
      cfg.k = static_cast<std::size_t>(g);
      cfg.seed = derived_seed(seed, StreamPurpose::kRepeat, r);
      cfg.jobs = ctx.jobs;
      const auto spectra =
          normalised_factor_spectra(build_factor_ensemble(*built.model, cfg), ctx.jobs);
      vals.push_back(effective_dimension(spectra, gamma, n) / static_cast<double>(d));
    }
    const double sd = vals.size() > 1 ? stddev(vals) : 0.0;
    body += std::to_string(g) + "," + std::to_string(repeats) + "," + num(mean(vals)) + "," +
            num(sd) + "\n";
    rows.push_back({{"samples", g}, {"mean_normalised", mean(vals)}, {"std_normalised", sd},
                    {"values", vals}});
  }
  w.csv(".csv", body);
  Json j;
  j["model"] = built.description;
  j["d"] = d;
  j["gamma"] = gamma;
  j["n"] = n;
  j["rows"] = rows;
  w.json(".json", j);
  say(w, built.description + ": sensitivity table over " + std::to_string(grid.size()) +
             " grid points");
  return w.finish();
}

// --- confusion ------------------------------------------------------------

RunResult cmd_confusion(const Params& p, const RunContext& ctx) {
  ConfusionConfig c;
  c.fractions = p.reals("fractions");
  c.runs = positive_count(p, "runs");
  c.n = positive_count(p, "n");
  c.n_features = positive_count(p, "features");
  c.spread = p.real("spread");
  c.hidden = p.integers("hidden");
  c.activation = parse_activation(p.str("activation"));
  c.lr = p.real("lr");
  c.loss_target = p.real("loss-target");
  c.max_iters = static_cast<std::size_t>(p.count("max-iters"));
  c.local_samples = positive_count(p, "local-samples");
  c.radius = p.real("radius");
  c.k = positive_count(p, "k");
  c.gamma = checked_gamma(p);
  c.effdim_n = p.real("effdim-n");
  c.seed = p.count("seed");
  c.jobs = ctx.jobs;
  c.validate();
  Writer w(ctx, "confusion", p);
  const auto r = confusion_experiment(c);
  std::string body =
      "fraction,randomised,runs,converged,mean_effdim,std_effdim,mean_normalised,std_normalised\n";
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    body += num(row.fraction) + "," + std::to_string(row.randomised) + "," +
            std::to_string(row.runs) + "," + std::to_string(row.converged) + "," +
            num(row.mean_effdim) + "," + num(row.std_effdim) + "," + num(row.mean_normalised) +
            "," + num(row.std_normalised) + "\n";
    rows.push_back({{"fraction", row.fraction},
                    {"randomised", row.randomised},
                    {"converged", row.converged},
                    {"non_converged", row.runs - row.converged},
                    {"effdims", row.effdims},
                    {"iterations", row.iterations}});
  }
  w.csv(".csv", body);
  Json j;
  j["topology"] = c.topology().to_string();
  j["d"] = r.d;
  j["dataset_hash"] = hex64(r.dataset_hash);
  j["local_ensemble_radius"] = c.radius;
  j["local_samples"] = c.local_samples;
  j["k"] = c.k;
  j["gamma"] = c.gamma;
  j["effdim_n"] = c.effdim_n > 0.0 ? c.effdim_n : static_cast<double>(c.n);
  j["loss_target"] = c.loss_target;
  j["max_iters"] = c.max_iters;
  j["spearman"] = jnum(r.spearman);
  j["rows"] = rows;
  w.json(".json", j);
  say(w, "confusion: Spearman correlation of mean effective dimension with randomisation " +
             num(r.spearman));
  return w.finish();
}

// --- barren ---------------------------------------------------------------

RunResult cmd_barren(const Params& p, const RunContext& ctx) {
  const auto grid = p.integers("qubits");
  if (grid.empty()) throw ValidationError("--qubits must list at least one qubit count");
  const int depth = positive_int(p, "var-depth");
  const auto cfg = ensemble_config(p, ctx);
  const auto grad = parse_grad(p.str("grad"));
  const auto spec = p.str("model");
  // Validate the whole grid before running anything.
  std::string description;
  for (int s : grid) description = build_quantum(spec, s, depth, grad).description;
  Writer w(ctx, "barren", p);
  const auto r = trace_diagnostic(
      grid, [&](int s) { return build_quantum(spec, s, depth, grad).model; }, cfg);
  std::string body = "n_qubits,d,mean_trace_over_d,std_trace_over_d,samples\n";
  for (const auto& row : r.rows)
    body += std::to_string(row.n_qubits) + "," + std::to_string(row.d) + "," +
            num(row.mean_trace_over_d) + "," + num(row.std_trace_over_d) + "," +
            std::to_string(row.samples) + "\n";
  w.csv(".csv", body);
  Json j;
  j["model"] = spec;
  j["var_depth"] = depth;
  j["samples"] = cfg.theta_samples;
  j["k"] = cfg.k;
  j["decay_rate"] = jnum(r.decay_rate);
  j["decay_rate_stderr"] = jnum(r.decay_rate_stderr);
  j["degenerate"] = r.degenerate;
  j["barren_flag"] = r.barren_flag;
  w.json(".json", j);
  say(w, spec + ": trace decay rate " + num(r.decay_rate) + " +- " + num(r.decay_rate_stderr) +
             (r.barren_flag ? " (barren)" : ""));
  return w.finish();
}

// --- circuit --------------------------------------------------------------

RunResult cmd_circuit(const Params& p, const RunContext& ctx) {
  const int s = positive_int(p, "qubits");
  const int depth = positive_int(p, "var-depth");
  const auto built = build_quantum(p.str("model"), s, depth, parse_grad(p.str("grad")));
  const auto& qnn = static_cast<const QuantumNeuralNetwork&>(*built.model);
  auto x = p.reals("x");
  auto theta = p.reals("theta");
  if (x.empty()) x.assign(static_cast<std::size_t>(s), 0.0);
  if (theta.empty()) theta.assign(qnn.param_count(), 0.0);
  if (x.size() != static_cast<std::size_t>(s))
    throw ValidationError("--x needs " + std::to_string(s) + " values");
  if (theta.size() != qnn.param_count())
    throw ValidationError("--theta needs " + std::to_string(qnn.param_count()) + " values");
  auto gates = build_feature_circuit(qnn.spec(), x);
  const auto var = build_var_circuit(qnn.spec(), theta);
  gates.insert(gates.end(), var.begin(), var.end());
  Writer w(ctx, "circuit", p);
  const auto dump = dump_circuit(gates);
  w.text(".txt", dump);
  const auto pr = qnn.parity(theta, x);
  Json j;
  j["model"] = built.description;
  j["gates"] = gates.size();
  j["p_even"] = pr.even;
  j["p_odd"] = pr.odd;
  w.json(".json", j);
  if (w.console()) *w.console() << dump;
  return w.finish();
}

// --- bound ----------------------------------------------------------------

RunResult cmd_bound(const Params& p, const RunContext& ctx) {
  for (const char* key : {"d-eff", "gamma", "n", "M"})
    if (p.raw(key).empty()) throw ValidationError(std::string("--") + key + " is required");
  BoundInputs in;
  in.d_eff = p.real("d-eff");
  in.gamma = checked_gamma(p);
  in.n = p.real("n");
  in.alpha = p.real("alpha");
  in.M = p.real("M");
  in.B = p.real("B");
  if (!p.raw("c").empty()) {
    in.c = p.real("c");
  } else if (!p.raw("d").empty()) {
    in.c = 2.0 * std::sqrt(static_cast<double>(positive_count(p, "d")));
  } else {
    throw ValidationError("--c is required (or --d to use c = 2 sqrt(d))");
  }
  const auto r = generalisation_bound_rhs(in);
  Writer w(ctx, "bound", p);
  Json j;
  j["d_eff"] = in.d_eff;
  j["gamma"] = in.gamma;
  j["n"] = in.n;
  j["alpha"] = in.alpha;
  j["M"] = in.M;
  j["B"] = in.B;
  j["c"] = in.c;
  j["log_kappa"] = r.log_kappa;
  j["log_rhs"] = r.log_rhs;
  j["rhs"] = r.rhs;
  j["deviation"] = r.deviation;
  w.json(".json", j);
  say(w, "log RHS " + num(r.log_rhs) + ", deviation threshold " + num(r.deviation));
  return w.finish();
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"spectrum",
       "Fisher eigenvalue histogram and spectrum statistics",
       with_common({{"model", "qnn", "qnn, easy-qnn, qnn-linear, classical or a topology"},
                    {"qubits", "4", "input size (qubit count for quantum models)"},
                    {"d", "40", "trainable parameter count"},
                    {"samples", "100", "parameter samples"},
                    {"k", "100", "input samples per Fisher estimate"},
                    {"bins", "50", "histogram bins"},
                    {"zoom", "true", "also bin the contents of the first bin"},
                    {"save-ensemble", "false", "write the Fisher ensemble (JSON + CSV)"}})},
      {"effdim",
       "effective dimension curve over a log-spaced n grid",
       with_common({{"model", "qnn", "model spec, or identity-fisher"},
                    {"qubits", "4", "input size"},
                    {"d", "40", "trainable parameter count"},
                    {"samples", "100", "parameter samples"},
                    {"k", "100", "input samples per Fisher estimate"},
                    {"gamma", "1", "gamma in (0, 1]"},
                    {"n-min", "100", "smallest n"},
                    {"n-max", "1e12", "largest n"},
                    {"n-points", "30", "grid points"}})},
      {"train",
       "ADAM training trials with loss traces and Fisher-Rao norms",
       with_common({{"model", "qnn", "model spec"},
                    {"dataset", "iris2", "iris2 or blobs"},
                    {"qubits", "4", "input size"},
                    {"d", "8", "trainable parameter count"},
                    {"trials", "100", "independent trials"},
                    {"iters", "100", "ADAM iterations"},
                    {"lr", "0.1", "learning rate"},
                    {"fisher-k", "100", "input samples for the final Fisher estimate (0 skips)"},
                    {"blobs-n", "100", "points for the blobs dataset"},
                    {"blobs-spread", "1", "cluster standard deviation for the blobs dataset"}})},
      {"sensitivity",
       "normalised effective dimension against sample counts",
       with_common({{"model", "classical", "model spec"},
                    {"qubits", "4", "input size"},
                    {"d", "40", "trainable parameter count"},
                    {"grid", "10,20,40,70,100", "parameter and data sample counts"},
                    {"repeats", "10", "independent repeats per grid point"},
                    {"gamma", "1", "gamma in (0, 1]"},
                    {"n", "1e6", "number of data points n"}})},
      {"confusion",
       "effective dimension after training on partly randomised labels",
       with_common({{"fractions", "0,0.1,0.2,0.3,0.4,0.5", "label randomisation fractions"},
                    {"runs", "10", "training runs per fraction"},
                    {"n", "1000", "dataset size"},
                    {"features", "6", "input features"},
                    {"spread", "1", "cluster standard deviation"},
                    {"hidden", "110", "hidden layer widths"},
                    {"activation", "tanh", "hidden activation: relu, leaky_relu, tanh, sigmoid"},
                    {"lr", "0.1", "learning rate"},
                    {"loss-target", "0.001", "training loss treated as converged"},
                    {"max-iters", "5000", "iteration cap"},
                    {"local-samples", "100", "parameter draws around the trained point"},
                    {"radius", "0.05", "l-infinity radius of the local draws"},
                    {"k", "100", "input samples per Fisher estimate"},
                    {"gamma", "1", "gamma in (0, 1]"},
                    {"effdim-n", "0", "n for the effective dimension (0: dataset size)"}})},
      {"barren",
       "mean Fisher trace per parameter across qubit counts",
       with_common({{"model", "easy-qnn", "qnn, easy-qnn or qnn-linear"},
                    {"qubits", "4,6,8,10", "qubit counts"},
                    {"var-depth", "9", "variational depth D"},
                    {"samples", "100", "parameter samples per qubit count"},
                    {"k", "100", "input samples per Fisher estimate"}})},
      {"circuit",
       "dump the gate list of a quantum model",
       with_common({{"model", "qnn", "qnn, easy-qnn or qnn-linear"},
                    {"qubits", "4", "qubit count"},
                    {"var-depth", "1", "variational depth D"},
                    {"x", "", "input values (default zeros)"},
                    {"theta", "", "parameters (default zeros)"}})},
      {"bound",
       "generalisation bound right-hand side in log space",
       with_common({{"d-eff", "", "effective dimension"},
                    {"gamma", "", "gamma in (0, 1]"},
                    {"n", "", "number of data points"},
                    {"alpha", "1", "Hoelder exponent in (0, 1]"},
                    {"M", "", "combined continuity constant"},
                    {"B", "1", "loss range"},
                    {"c", "", "dimensional constant"},
                    {"d", "", "parameter count, sets c = 2 sqrt(d) when --c is absent"}})},
  };
  return specs;
}

const CommandSpec& find_command(const std::string& name) {
  for (const auto& s : command_specs())
    if (s.name == name) return s;
  throw ValidationError("unknown command '" + name + "'");
}

Params resolve_params(const CommandSpec& spec, const std::map<std::string, std::string>& file,
                      const std::map<std::string, std::string>& flags) {
  Params p;
  for (const auto& o : spec.options) p.set(o.key, o.default_value);
  for (const auto* src : {&file, &flags}) {
    for (const auto& [k, v] : *src) {
      if (!p.has(k)) throw ValidationError("unknown option '" + k + "' for " + spec.name);
      p.set(k, v);
    }
  }
  return p;
}

std::string config_hash(const std::string& command, const Params& params) {
  return hex64(fnv1a(std::string(kFormat) + "\n" + command + "\n" + params.canonical()));
}

RunResult run_command(const std::string& command, const Params& params, const RunContext& ctx) {
  if (command == "spectrum") return cmd_spectrum(params, ctx);
  if (command == "effdim") return cmd_effdim(params, ctx);
  if (command == "train") return cmd_train(params, ctx);
  if (command == "sensitivity") return cmd_sensitivity(params, ctx);
  if (command == "confusion") return cmd_confusion(params, ctx);
  if (command == "barren") return cmd_barren(params, ctx);
  if (command == "circuit") return cmd_circuit(params, ctx);
  if (command == "bound") return cmd_bound(params, ctx);
  throw ValidationError("unknown command '" + command + "'");
}

RunResult run_manifest(const fs::path& manifest, const RunContext& ctx) {
  std::ifstream in(manifest);
  if (!in) throw ValidationError("cannot read manifest " + manifest.string());
  Json m;
  try {
    m = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest " + manifest.string() + ": " + e.what());
  }
  std::map<std::string, std::string> values;
  std::string command;
  try {
    if (m.at("format").get<std::string>() != kFormat)
      throw ValidationError("manifest format '" + m.at("format").get<std::string>() +
                            "' is not supported");
    command = m.at("command").get<std::string>();
    for (const auto& [k, v] : m.at("config").items()) values[k] = v.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest " + manifest.string() + ": " + e.what());
  }
  const auto& spec = find_command(command);
  return run_command(command, resolve_params(spec, {}, values), ctx);
}

BuiltModel build_quantum(const std::string& spec, int n_qubits, int var_depth,
                         GradientMethod grad) {
  QnnSpec q;
  if (spec == "qnn")
    q = QnnSpec::qnn(n_qubits, var_depth);
  else if (spec == "easy-qnn")
    q = QnnSpec::easy(n_qubits, var_depth);
  else if (spec == "qnn-linear")
    q = QnnSpec::qnn_linear(n_qubits, var_depth);
  else
    throw ValidationError("'" + spec + "' is not a quantum model; expected qnn, easy-qnn or qnn-linear");
  q.validate();
  BuiltModel b;
  b.model = std::make_unique<QuantumNeuralNetwork>(q, grad);
  b.description = q.describe();
  return b;
}

BuiltModel build_model(const std::string& spec, int s_in, std::size_t d, GradientMethod grad,
                       const EnsembleConfig& selection) {
  if (spec == "qnn" || spec == "easy-qnn" || spec == "qnn-linear") {
    const auto s = static_cast<std::size_t>(s_in);
    if (d % s != 0 || d < 2 * s)
      throw ValidationError("quantum models need d = (D + 1) * qubits with D >= 1; d=" +
                            std::to_string(d) + " does not fit " + std::to_string(s_in) +
                            " qubits");
    return build_quantum(spec, s_in, static_cast<int>(d / s) - 1, grad);
  }
  if (spec == "classical") {
    const auto sel = select_classical(d, s_in, 2, selection);
    BuiltModel b;
    b.model = std::make_unique<Mlp>(sel.best);
    b.description = "classical[" + sel.best.to_string() + "]";
    return b;
  }
  MlpTopology t;
  try {
    t = MlpTopology::parse(spec);
  } catch (const ValidationError& e) {
    throw ValidationError("invalid model spec '" + spec + "': " + e.what() +
                          " (expected qnn, easy-qnn, qnn-linear, classical or a topology such "
                          "as 4-6-2-2:tanh)");
  }
  if (t.s_in() != s_in)
    throw ValidationError("topology '" + spec + "' has input size " + std::to_string(t.s_in()) +
                          " but --qubits is " + std::to_string(s_in));
  if (t.s_out() != 2) throw ValidationError("topology '" + spec + "' must end in 2 outputs");
  if (t.param_count() != d)
    throw ValidationError("topology '" + spec + "' has " + std::to_string(t.param_count()) +
                          " parameters but --d is " + std::to_string(d));
  BuiltModel b;
  b.model = std::make_unique<Mlp>(t);
  b.description = "mlp[" + t.to_string() + "]";
  return b;
}

}  // namespace qcap::cli
