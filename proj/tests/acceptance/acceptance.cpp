// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one "criterion N: PASS|FAIL ..." line per check
// and exits non-zero if any selected check fails.
//
//   qcap_acceptance [--only N]

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qcap/comparator.hpp"
#include "qcap/data.hpp"
#include "qcap/effdim.hpp"
#include "qcap/fisher.hpp"
#include "qcap/mlp.hpp"
#include "qcap/qmodel.hpp"
#include "qcap/spectra.hpp"
#include "qcap/stats.hpp"
#include "qcap/train.hpp"

#ifndef QCAP_CLI_PATH
#define QCAP_CLI_PATH "qcap"
#endif

namespace {

using namespace qcap;
namespace fs = std::filesystem;

constexpr std::size_t kD = 40;
constexpr int kSin = 4;
constexpr unsigned kJobs = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::unique_ptr<StatisticalModel> quantum(const QnnSpec& s) {
  return std::make_unique<QuantumNeuralNetwork>(s);
}

// Classical comparator: the highest-rank network with exactly d parameters.
MlpTopology comparator(std::size_t d, const EnsembleConfig& cfg) {
  return select_classical(d, kSin, 2, cfg).best;
}

// ---------------------------------------------------------------------------

double max_fd_error(const StatisticalModel& m, std::vector<double> theta,
                    std::span<const double> x, int y) {
  const auto g = m.grad_log_prob(theta, x, y);
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double orig = theta[j];
    theta[j] = orig + h;
    const double up = std::log(m.probabilities(theta, x)[static_cast<std::size_t>(y)]);
    theta[j] = orig - h;
    const double dn = std::log(m.probabilities(theta, x)[static_cast<std::size_t>(y)]);
    theta[j] = orig;
    worst = std::max(worst, std::abs(g.grad[j] - (up - dn) / (2 * h)));
  }
  return worst;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng(101, 0);
  double worst_q = 0.0, worst_c = 0.0;
  int nq = 0, nc = 0;
  for (int c = 0; c < 60; ++c) {
    const int s = 2 + static_cast<int>(rng.below(4));
    const int depth = 1 + static_cast<int>(rng.below(3));
    const QnnSpec spec = c % 3 == 0   ? QnnSpec::qnn(s, depth)
                         : c % 3 == 1 ? QnnSpec::easy(s, depth)
                                      : QnnSpec::qnn_linear(s, depth);
    const QuantumNeuralNetwork m(spec, GradientMethod::kParameterShift);
    const auto theta = uniform_parameters(m.param_count(), rng);
    std::vector<double> x(static_cast<std::size_t>(s));
    for (double& v : x) v = rng.uniform(-1, 1);
    const int y = static_cast<int>(rng.below(2));
    if (m.grad_log_prob(theta, x, y).clamped) continue;
    worst_q = std::max(worst_q, max_fd_error(m, theta, x, y));
    ++nq;
  }
  const Activation acts[] = {Activation::kRelu, Activation::kLeakyRelu, Activation::kTanh,
                             Activation::kSigmoid};
  for (int c = 0; c < 60; ++c) {
    std::vector<int> layers{2 + static_cast<int>(rng.below(4))};
    const int hidden = 1 + static_cast<int>(rng.below(3));
    for (int h = 0; h < hidden; ++h) layers.push_back(1 + static_cast<int>(rng.below(6)));
    layers.push_back(2 + static_cast<int>(rng.below(2)));
    const Mlp m(MlpTopology{layers, rng.below(2) == 1, acts[c % 4]});
    const auto theta = uniform_parameters(m.param_count(), rng);
    std::vector<double> x(static_cast<std::size_t>(layers.front()));
    for (double& v : x) v = rng.uniform(-2, 2);
    const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(layers.back())));
    worst_c = std::max(worst_c, max_fd_error(m, theta, x, y));
    ++nc;
  }
  const double secs = elapsed(t0);
  const bool pass = nq >= 50 && nc >= 50 && worst_q <= 1e-6 && worst_c <= 1e-6 && secs < 60;
  return {pass, "shift cases=" + std::to_string(nq) + " max_err=" + fmt(worst_q) +
                    "; backprop cases=" + std::to_string(nc) + " max_err=" + fmt(worst_c) +
                    "; " + fmt(secs, 3) + "s"};
}

// ---------------------------------------------------------------------------

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  EnsembleConfig cfg;
  cfg.theta_samples = 100;
  cfg.k = 100;
  cfg.seed = 202;
  cfg.jobs = kJobs;
  const auto classical = comparator(kD, cfg);
  std::vector<std::pair<std::string, std::unique_ptr<StatisticalModel>>> models;
  models.emplace_back("qnn", quantum(QnnSpec::qnn(4, 9)));
  models.emplace_back("easy", quantum(QnnSpec::easy(4, 9)));
  models.emplace_back("classical " + classical.to_string(), std::make_unique<Mlp>(classical));
  bool pass = true;
  std::string detail;
  for (const auto& [name, model] : models) {
    const auto ens = build_ensemble(*model, cfg);
    double asym = 0.0, worst_neg = 0.0;
    for (const auto& e : ens.estimates) {
      asym = std::max(asym, e.matrix.asymmetry());
      const auto ev = eigenvalues_sym(e.matrix);
      if (ev.back() > 0) worst_neg = std::min(worst_neg, ev.front() / ev.back());
    }
    const auto norm = normalise_ensemble(ens);
    double tr = 0.0;
    for (const auto& e : norm.estimates) tr += e.matrix.trace();
    tr /= static_cast<double>(norm.estimates.size());
    const double tr_err = std::abs(tr - static_cast<double>(kD)) / static_cast<double>(kD);
    const bool ok = ens.estimates.size() == 100 && asym <= 1e-12 && worst_neg >= -1e-9 &&
                    tr_err <= 1e-9;
    pass = pass && ok;
    detail += name + ": asym=" + fmt(asym) + " min_rel_eig=" + fmt(worst_neg) +
              " trace_err=" + fmt(tr_err) + "; ";
  }
  const double secs = elapsed(t0);
  pass = pass && secs < 180;
  return {pass, detail + fmt(secs, 3) + "s"};
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
  double worst = 0.0;
  for (std::size_t d : {2u, 8u, 40u}) {
    const std::vector<std::vector<double>> ident(5, std::vector<double>(d, 1.0));
    for (double n : {1e3, 1e6, 1e9}) {
      const double k = kappa(1.0, n);
      const double expect = static_cast<double>(d) * std::log1p(k) / std::log(k);
      worst = std::max(worst, std::abs(effective_dimension(ident, 1.0, n) - expect));
    }
  }
  // Constant ensembles of rank-r projectors.
  double worst_rank = 0.0;
  std::string normalised_note;
  for (std::size_t d : {8u, 40u}) {
    for (std::size_t r : {std::size_t{1}, d / 4, d / 2, d - 1}) {
      std::vector<double> s(d, 0.0);
      std::fill(s.end() - static_cast<std::ptrdiff_t>(r), s.end(), 1.0);
      const std::vector<std::vector<double>> spectra(3, s);
      const double v = effective_dimension(spectra, 1.0, 1e12);
      worst_rank = std::max(worst_rank, std::abs(v - static_cast<double>(r)) / static_cast<double>(r));
    }
  }
  {
    // Same ensembles rescaled to mean trace d (reported, not asserted).
    std::vector<double> s(40, 0.0);
    std::fill(s.end() - 4, s.end(), 10.0);
    const std::vector<std::vector<double>> spectra(3, s);
    normalised_note = " (trace-normalised r=4,d=40 gives " +
                      fmt(effective_dimension(spectra, 1.0, 1e12)) + ")";
  }
  const bool pass = worst <= 1e-9 && worst_rank <= 0.02;
  return {pass, "identity max_abs_err=" + fmt(worst) + "; rank-r max_rel_err=" +
                    fmt(worst_rank) + normalised_note};
}

// ---------------------------------------------------------------------------

struct FamilySpectra {
  std::string name;
  std::vector<std::vector<double>> raw;         // unnormalised eigenvalues
  std::vector<std::vector<double>> normalised;  // eigenvalues of the normalised ensemble
};

FamilySpectra family_spectra(const std::string& name, const StatisticalModel& m,
                             const EnsembleConfig& cfg) {
  const auto factors = build_factor_ensemble(m, cfg);
  FamilySpectra out{name, {}, normalised_factor_spectra(factors, cfg.jobs)};
  for (const auto& f : factors) out.raw.push_back(f.eigenvalues());
  return out;
}

double near_zero_fraction(const std::vector<std::vector<double>>& spectra) {
  double total = 0.0;
  for (const auto& s : spectra) total += spectrum_stats(s).near_zero_fraction;
  return total / static_cast<double>(spectra.size());
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  EnsembleConfig cfg;
  cfg.theta_samples = 100;
  cfg.k = 100;
  cfg.seed = 404;
  cfg.jobs = kJobs;
  const auto topo = comparator(kD, cfg);
  const Mlp classical(topo);
  const QuantumNeuralNetwork qnn(QnnSpec::qnn(4, 9));
  const auto c = family_spectra("classical", classical, cfg);
  const auto q = family_spectra("qnn", qnn, cfg);
  const double nz_c = near_zero_fraction(c.raw);
  const double nz_q = near_zero_fraction(q.raw);
  const auto hist = spectrum_histogram(q.normalised, 50, false);
  const double max_bin = hist.main.max_bin_fraction();
  const bool pass = nz_c > 0.5 && nz_q < nz_c && max_bin <= 0.6;
  return {pass, "classical " + topo.to_string() + " near_zero=" + fmt(nz_c) +
                    "; qnn near_zero=" + fmt(nz_q) + " max_bin=" + fmt(max_bin) + "; " +
                    fmt(elapsed(t0), 3) + "s"};
}

// ---------------------------------------------------------------------------

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> grid;
  for (double n : default_n_grid())
    if (n >= 1e6 * (1 - 1e-12)) grid.push_back(n);
  std::map<std::string, std::vector<double>> mean;
  std::string topo_names;
  for (std::uint64_t rep = 0; rep < 3; ++rep) {
    EnsembleConfig cfg;
    cfg.theta_samples = 100;
    cfg.k = 100;
    cfg.seed = 500 + rep;
    cfg.jobs = kJobs;
    const auto topo = comparator(kD, cfg);
    topo_names += (rep ? "," : "") + topo.to_string();
    const Mlp classical(topo);
    const QuantumNeuralNetwork qnn(QnnSpec::qnn(4, 9));
    const QuantumNeuralNetwork easy(QnnSpec::easy(4, 9));
    for (const auto& f : {family_spectra("qnn", qnn, cfg), family_spectra("easy", easy, cfg),
                          family_spectra("classical", classical, cfg)}) {
      const auto r = effdim_curve(f.normalised, kD, 1.0, grid);
      auto& acc = mean[f.name];
      acc.resize(grid.size(), 0.0);
      for (std::size_t i = 0; i < grid.size(); ++i) acc[i] += r.normalised[i] / 3.0;
    }
  }
  bool order = true;
  for (std::size_t i = 0; i < grid.size(); ++i)
    order = order && mean["qnn"][i] > mean["easy"][i] && mean["easy"][i] > mean["classical"][i];
  const double secs = elapsed(t0);
  std::string detail = "comparators " + topo_names + "; ";
  for (const char* name : {"qnn", "easy", "classical"})
    detail += std::string(name) + "=[" + fmt(mean[name].front(), 3) + ".." +
              fmt(mean[name].back(), 3) + "] ";
  return {order && secs < 900, detail + "over " + std::to_string(grid.size()) +
                                   " n-points; " + fmt(secs, 3) + "s"};
}

// ---------------------------------------------------------------------------

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto ds = normalize_features(load_iris_binary());
  TrainConfig tc;
  tc.lr = 0.1;
  tc.iters = 100;
  tc.trials = 20;
  tc.fisher_k = 100;
  tc.seed = 606;
  tc.jobs = kJobs;
  EnsembleConfig sel;
  sel.theta_samples = 100;
  sel.k = 100;
  sel.seed = tc.seed;
  sel.jobs = kJobs;
  const auto topo = comparator(8, sel);
  const QuantumNeuralNetwork qnn(QnnSpec::qnn(4, 1));
  const QuantumNeuralNetwork easy(QnnSpec::easy(4, 1));
  const Mlp classical(topo);
  const auto sq = summarise(run_trials(qnn, ds, tc));
  const auto se = summarise(run_trials(easy, ds, tc));
  const auto sc = summarise(run_trials(classical, ds, tc));
  const bool loss_order = sq.mean_final_loss < sc.mean_final_loss &&
                          sc.mean_final_loss < se.mean_final_loss;
  const bool fr_order = sq.mean_fisher_rao > se.mean_fisher_rao &&
                        se.mean_fisher_rao > sc.mean_fisher_rao;
  const double ratio = sq.mean_fisher_rao / sc.mean_fisher_rao;
  const double secs = elapsed(t0);
  const bool pass = loss_order && fr_order && ratio >= 1.5 && secs < 1200;
  return {pass, "loss qnn=" + fmt(sq.mean_final_loss) + " classical=" +
                    fmt(sc.mean_final_loss) + " easy=" + fmt(se.mean_final_loss) +
                    "; fisher_rao qnn=" + fmt(sq.mean_fisher_rao) + " easy=" +
                    fmt(se.mean_fisher_rao) + " classical=" + fmt(sc.mean_fisher_rao) +
                    " ratio=" + fmt(ratio, 3) + "; comparator " + topo.to_string() + "; " +
                    fmt(secs, 3) + "s"};
}

// ---------------------------------------------------------------------------

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  ConfusionConfig cfg;
  cfg.seed = 707;
  cfg.jobs = kJobs;
  const auto r = confusion_experiment(cfg);
  std::string detail = "mean effdim by fraction:";
  for (const auto& row : r.rows)
    detail += " " + fmt(row.fraction, 2) + "->" + fmt(row.mean_effdim) + " (" +
              std::to_string(row.converged) + "/" + std::to_string(row.runs) + ")";
  // The trend is over the whole grid, so every fraction needs a mean.
  bool all_defined = true;
  for (const auto& row : r.rows) all_defined = all_defined && row.converged > 0;
  const double secs = elapsed(t0);
  const bool pass = all_defined && std::isfinite(r.spearman) && r.spearman > 0.8 && secs < 1800;
  return {pass, detail + "; spearman=" + fmt(r.spearman) +
                    (all_defined ? "" : "; some fractions have no converged run") + "; " +
                    fmt(secs, 3) + "s"};
}

// ---------------------------------------------------------------------------

Outcome criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> grid{4, 5, 6, 7, 8, 9, 10};
  EnsembleConfig cfg;
  cfg.theta_samples = 100;
  cfg.k = 100;
  cfg.seed = 808;
  cfg.jobs = kJobs;
  const auto easy = trace_diagnostic(
      grid, [](int s) { return quantum(QnnSpec::easy(s, 9)); }, cfg);
  const auto qnn = trace_diagnostic(
      grid, [](int s) { return quantum(QnnSpec::qnn(s, 9)); }, cfg);
  bool decreasing = true;
  for (std::size_t i = 1; i < easy.rows.size(); ++i)
    decreasing = decreasing && easy.rows[i].mean_trace_over_d < easy.rows[i - 1].mean_trace_over_d;
  double lo = qnn.rows[0].mean_trace_over_d, hi = lo;
  for (const auto& r : qnn.rows) {
    lo = std::min(lo, r.mean_trace_over_d);
    hi = std::max(hi, r.mean_trace_over_d);
  }
  const double variation = (hi - lo) / hi;
  const double secs = elapsed(t0);
  std::string detail = "easy:";
  for (const auto& r : easy.rows) detail += " " + fmt(r.mean_trace_over_d, 3);
  detail += "; qnn:";
  for (const auto& r : qnn.rows) detail += " " + fmt(r.mean_trace_over_d, 3);
  const bool pass = decreasing && variation < 0.5 && secs < 1200;
  return {pass, detail + "; qnn relative variation=" + fmt(variation, 3) + "; " +
                    fmt(secs, 3) + "s"};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + QCAP_CLI_PATH + "\" " + args + " > /dev/null";
  return std::system(cmd.c_str());
}

Outcome criterion9() {
  const std::vector<std::pair<std::string, std::string>> runs{
      {"spectrum", "--qubits 4 --d 8 --samples 5 --k 10 --save-ensemble true"},
      {"effdim", "--model easy-qnn --qubits 4 --d 8 --samples 5 --k 10 --n-points 6"},
      {"effdim", "--model classical --qubits 4 --d 8 --samples 4 --k 10"},
      {"train", "--trials 2 --iters 5 --fisher-k 10"},
      {"train", "--model 4-1-1-1-2:tanh --dataset blobs --blobs-n 30 --trials 2 --iters 5"},
      {"sensitivity", "--model qnn --qubits 3 --d 6 --grid 2,4 --repeats 2"},
      {"confusion", "--fractions 0,0.5 --runs 1 --n 30 --features 2 --hidden 3 "
                    "--loss-target 0.4 --max-iters 100 --local-samples 3 --k 5"},
      {"barren", "--qubits 2,3,4 --var-depth 2 --samples 10 --k 5"},
      {"circuit", "--model qnn --qubits 3 --x 0.1,0.2,0.3"},
      {"bound", "--d-eff 5 --gamma 1 --n 10000 --M 0.2 --d 8"},
  };
  const auto root = fs::temp_directory_path() / "qcap_acceptance_determinism";
  fs::remove_all(root);
  bool pass = true;
  std::size_t compared = 0;
  std::string failures;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto a = root / (std::to_string(i) + "a");
    const auto b = root / (std::to_string(i) + "b");
    fs::create_directories(a);
    fs::create_directories(b);
    const auto& [cmd, args] = runs[i];
    if (run_cli(cmd + " " + args + " --out \"" + a.string() + "\"") != 0) {
      pass = false;
      failures += " " + cmd + "(run failed)";
      continue;
    }
    fs::path manifest;
    for (const auto& e : fs::directory_iterator(a))
      if (e.path().filename().string().ends_with("-manifest.json")) manifest = e.path();
    if (manifest.empty() ||
        run_cli("run --manifest \"" + manifest.string() + "\" --jobs 2 --out \"" + b.string() +
                "\"") != 0) {
      pass = false;
      failures += " " + cmd + "(replay failed)";
      continue;
    }
    for (const auto& e : fs::directory_iterator(a)) {
      const auto other = b / e.path().filename();
      ++compared;
      if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
        pass = false;
        failures += " " + e.path().filename().string();
      }
    }
  }
  fs::remove_all(root);
  return {pass, std::to_string(runs.size()) + " runs, " + std::to_string(compared) +
                    " files compared" + (failures.empty() ? "" : "; mismatches:" + failures)};
}

// ---------------------------------------------------------------------------

Outcome criterion10() {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big pi = boost::math::constants::pi<Big>();
  RngStream rng(1010, 0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    BoundInputs in;
    in.d_eff = rng.uniform(0.0, 100.0);
    in.gamma = rng.uniform(0.05, 1.0);
    in.n = std::pow(10.0, rng.uniform(2.0, 12.0));
    in.alpha = rng.uniform(0.05, 1.0);
    in.M = rng.uniform(0.0, 1.0);
    in.B = rng.uniform(0.2, 5.0);
    in.c = rng.uniform(0.1, 20.0);
    const auto r = generalisation_bound_rhs(in);
    const Big n = in.n, g = in.gamma, a = in.alpha, M = in.M, B = in.B;
    const Big na = boost::multiprecision::pow(n, 1 / a);
    const Big kap = g * na / (2 * pi * boost::multiprecision::log(na));
    const Big ref = boost::multiprecision::log(Big(in.c)) +
                    Big(in.d_eff) / 2 * boost::multiprecision::log(kap) -
                    16 * M * M * pi * boost::multiprecision::log(n) / (B * B * g);
    const double rd = static_cast<double>(ref);
    worst = std::max(worst, std::abs(r.log_rhs - rd) / std::max(std::abs(rd), 1e-300));
  }
  return {worst <= 1e-10, "20 tuples, max relative error=" + fmt(worst)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: qcap_acceptance [--only N]\n";
      return 2;
    }
  }
  const std::vector<std::function<Outcome()>> checks{
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  if (only < 0 || only > static_cast<int>(checks.size())) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = checks[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
