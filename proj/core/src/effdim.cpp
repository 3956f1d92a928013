// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/effdim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qcap/error.hpp"
#include "qcap/stats.hpp"

namespace qcap {
namespace {

std::string fmt_n(double n) {
  std::ostringstream os;
  os.precision(17);
  os << n;
  return os.str();
}

double checked_log_kappa(double gamma, double n) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in (0, 1]");
  if (!(n > 1.0)) throw ValidationError("effective dimension undefined for n = " + fmt_n(n) +
                                        " (need n > 1)");
  const double k = kappa(gamma, n);
  if (!(k > 0.0) || !std::isfinite(k))
    throw NumericalError("kappa is not positive for n = " + fmt_n(n));
  const double lk = std::log(k);
  if (std::abs(lk) < 1e-12)
    throw NumericalError("log kappa vanishes for n = " + fmt_n(n) + "; effective dimension diverges");
  return lk;
}

}  // namespace

double kappa(double gamma, double n) {
  return gamma * n / (2.0 * std::numbers::pi * std::log(n));
}

double effective_dimension(std::span<const std::vector<double>> spectra, double gamma, double n) {
  if (spectra.empty()) throw ValidationError("effective dimension needs at least one sample");
  const double lk = checked_log_kappa(gamma, n);
  const double k = std::exp(lk);
  std::vector<double> half_logdets;
  half_logdets.reserve(spectra.size());
  for (const auto& ev : spectra) {
    double s = 0.0;
    for (double l : ev) s += std::log1p(k * std::max(l, 0.0));
    half_logdets.push_back(0.5 * s);
  }
  const double log_mean = log_sum_exp(half_logdets) - std::log(static_cast<double>(spectra.size()));
  return 2.0 * log_mean / lk;
}

double effdim_envelope(std::size_t d, double gamma, double n) {
  const double lk = checked_log_kappa(gamma, n);
  return static_cast<double>(d) * std::log1p(std::exp(lk)) / lk;
}

EffDimResult effdim_curve(std::span<const std::vector<double>> spectra, std::size_t d,
                          double gamma, std::span<const double> n_grid) {
  if (n_grid.empty()) throw ValidationError("empty n grid");
  if (d == 0) throw ValidationError("effective dimension needs d >= 1");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (!(n_grid[i] > n_grid[i - 1])) throw ValidationError("n grid must be strictly ascending");
  EffDimResult r;
  r.gamma = gamma;
  r.d = d;
  r.n_grid.assign(n_grid.begin(), n_grid.end());
  for (double n : n_grid) {
    const double v = effective_dimension(spectra, gamma, n);
    r.kappas.push_back(kappa(gamma, n));
    r.values.push_back(v);
    r.normalised.push_back(v / static_cast<double>(d));
  }
  return r;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0 && hi >= lo)) throw ValidationError("log grid needs 0 < lo <= hi");
  if (points == 0) throw ValidationError("log grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> g(points);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_n_grid() { return log_grid(1e2, 1e12, 30); }

BoundResult generalisation_bound_rhs(const BoundInputs& in) {
  if (!(in.gamma > 0.0 && in.gamma <= 1.0)) throw ValidationError("gamma must lie in (0, 1]");
  if (!(in.alpha > 0.0 && in.alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
  if (!(in.n > 1.0)) throw ValidationError("bound needs n > 1");
  if (!(in.d_eff >= 0.0) || !(in.M >= 0.0) || !(in.B > 0.0) || !(in.c > 0.0))
    throw ValidationError("bound inputs must be positive");
  if (in.alpha < 0.05)
    throw NumericalError("n^(1/alpha) overflows for alpha < 0.05");
  const double two_pi = 2.0 * std::numbers::pi;
  const double log_n = std::log(in.n);
  const double log_n_alpha = log_n / in.alpha;  // log of n^(1/alpha)
  BoundResult r;
  r.log_kappa = std::log(in.gamma) + log_n_alpha - std::log(two_pi) - std::log(log_n_alpha);
  r.log_rhs = std::log(in.c) + 0.5 * in.d_eff * r.log_kappa -
              16.0 * in.M * in.M * std::numbers::pi * log_n / (in.B * in.B * in.gamma);
  r.rhs = std::exp(r.log_rhs);
  r.deviation = 4.0 * in.M * std::sqrt(two_pi * log_n / (in.gamma * in.n));
  return r;
}

}  // namespace qcap
