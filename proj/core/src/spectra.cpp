// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qcap/error.hpp"

namespace qcap {
namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

Histogram bin_values(std::span<const double> values, double lo, double hi, int bins) {
  Histogram h;
  if (hi <= lo) {
    h.bins.push_back({lo, hi, values.size()});
    return h;
  }
  const double width = (hi - lo) / bins;
  h.bins.resize(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    h.bins[b].lo = lo + b * width;
    h.bins[b].hi = b + 1 == bins ? hi : lo + (b + 1) * width;
  }
  for (double v : values) {
    auto b = static_cast<long>(std::floor((v - lo) / width));
    b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
    ++h.bins[static_cast<std::size_t>(b)].count;
  }
  return h;
}

}  // namespace

EigenDecomposition eigen_sym(const Matrix& m, bool want_vectors) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw ValidationError("eigen_sym: matrix is not square");
  if (m.asymmetry() > 1e-10 * std::max(1.0, m.max_abs()))
    throw ValidationError("eigen_sym: matrix is not symmetric");

  Matrix a = m;
  // Exact symmetrisation so the rotations below can update both triangles.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));

  EigenDecomposition out;
  Matrix v = want_vectors ? Matrix::identity(n) : Matrix();
  const double tol = 1e-12 * a.frobenius_norm();
  const int max_sweeps = n <= 120 ? 30 : 60;

  int sweep = 0;
  while (off_diagonal_norm(a) > tol) {
    if (sweep == max_sweeps)
      throw InvariantError("eigen_sym: Jacobi did not converge in " + std::to_string(max_sweeps) +
                           " sweeps (n = " + std::to_string(n) + ")");
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        // Skip rotations that would not change the diagonal in floating point.
        if (sweep > 3 && std::abs(app) + 1e3 * std::abs(apq) == std::abs(app) &&
            std::abs(aqq) + 1e3 * std::abs(apq) == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p), arq = a(r, q);
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          a(r, p) = a(p, r) = new_rp;
          a(r, q) = a(q, r) = new_rq;
        }
        if (want_vectors) {
          for (std::size_t r = 0; r < n; ++r) {
            const double vrp = v(r, p), vrq = v(r, q);
            v(r, p) = vrp - s * (vrq + tau * vrp);
            v(r, q) = vrq + s * (vrp - tau * vrq);
          }
        }
      }
    }
  }
  out.sweeps = sweep;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(order[i], order[i]);
  if (want_vectors) {
    out.vectors = Matrix(n, n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

SpectrumStats spectrum_stats(std::vector<double> eigenvalues, double rank_eps) {
  SpectrumStats st;
  st.rank_eps = rank_eps;
  std::sort(eigenvalues.begin(), eigenvalues.end());
  const std::size_t d = eigenvalues.size();
  const double lmax = d ? eigenvalues.back() : 0.0;
  if (d && eigenvalues.front() < -1e-9 * std::max(lmax, 0.0))
    throw InvariantError("spectrum has a negative eigenvalue " +
                         std::to_string(eigenvalues.front()) + " (lambda_max " +
                         std::to_string(lmax) + ")");
  const double threshold = rank_eps * lmax;
  double lmin_above = std::numeric_limits<double>::infinity();
  for (double l : eigenvalues) {
    if (lmax > 0.0 && l > threshold) {
      ++st.numeric_rank;
      lmin_above = std::min(lmin_above, l);
    }
  }
  st.condition_infinite = st.numeric_rank < d;
  st.condition_number = st.numeric_rank ? lmax / lmin_above : std::numeric_limits<double>::infinity();
  if (st.condition_infinite) st.condition_number = std::numeric_limits<double>::infinity();
  st.near_zero_fraction = d ? static_cast<double>(d - st.numeric_rank) / static_cast<double>(d) : 0.0;
  st.eigenvalues = std::move(eigenvalues);
  return st;
}

std::size_t Histogram::total() const {
  std::size_t t = 0;
  for (const auto& b : bins) t += b.count;
  return t;
}

double Histogram::max_bin_fraction() const {
  const std::size_t t = total();
  if (t == 0) return 0.0;
  std::size_t m = 0;
  for (const auto& b : bins) m = std::max(m, b.count);
  return static_cast<double>(m) / static_cast<double>(t);
}

SpectrumHistogram spectrum_histogram(std::span<const std::vector<double>> spectra, int bins,
                                     bool zoom_first_bin) {
  if (bins < 1) throw ValidationError("spectrum_histogram: need at least one bin");
  std::vector<double> pooled;
  for (const auto& s : spectra) pooled.insert(pooled.end(), s.begin(), s.end());
  double lmax = 0.0;
  for (double v : pooled) lmax = std::max(lmax, v);
  SpectrumHistogram out;
  out.main = bin_values(pooled, 0.0, lmax, bins);
  if (zoom_first_bin && lmax > 0.0) {
    const double hi = out.main.bins.front().hi;
    std::vector<double> first;
    for (double v : pooled)
      if (v < hi || (bins == 1)) first.push_back(v);
    out.first_bin_zoom = bin_values(first, 0.0, hi, bins);
  }
  return out;
}

}  // namespace qcap
