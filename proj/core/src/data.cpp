// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/data.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qcap/error.hpp"

namespace qcap {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffu;
    h *= kFnvPrime;
  }
}

constexpr double kBlobCenter = 1.5;

}  // namespace

void Dataset::validate() const {
  if (n_features == 0) throw ValidationError("dataset: zero features");
  if (n_classes < 2) throw ValidationError("dataset: need at least two classes");
  if (features.size() != labels.size() * n_features)
    throw ValidationError("dataset: feature table does not match label count");
  for (double v : features)
    if (!std::isfinite(v)) throw ValidationError("dataset: non-finite feature value");
  for (int y : labels)
    if (y < 0 || static_cast<std::size_t>(y) >= n_classes)
      throw ValidationError("dataset: label " + std::to_string(y) + " out of range");
  if (!normalization.empty() && normalization.size() != n_features)
    throw ValidationError("dataset: normalization record has wrong length");
}

Dataset make_blobs(std::size_t n, std::size_t n_features, double spread, std::uint64_t seed) {
  if (n < 2) throw ValidationError("make_blobs: need at least 2 points");
  if (n_features == 0) throw ValidationError("make_blobs: need at least 1 feature");
  if (!(spread >= 0.0)) throw ValidationError("make_blobs: spread must be >= 0");
  RngStream rng(seed, stream_id(StreamPurpose::kDataset, 0));
  Dataset ds;
  ds.n_features = n_features;
  ds.n_classes = 2;
  ds.features.resize(n * n_features);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    ds.labels[i] = label;
    for (std::size_t f = 0; f < n_features; ++f) {
      const double center = f == 0 ? (label == 0 ? -kBlobCenter : kBlobCenter) : 0.0;
      ds.features[i * n_features + f] = center + spread * rng.normal();
    }
  }
  return ds;
}

std::vector<double> normalize_point(std::span<const double> x,
                                    std::span<const FeatureRange> ranges) {
  if (x.size() != ranges.size()) throw ValidationError("normalize_point: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t f = 0; f < x.size(); ++f) {
    const double width = ranges[f].max - ranges[f].min;
    out[f] = width > 0.0 ? 2.0 * (x[f] - ranges[f].min) / width - 1.0 : 0.0;
  }
  return out;
}

std::vector<double> denormalize_point(std::span<const double> x,
                                      std::span<const FeatureRange> ranges) {
  if (x.size() != ranges.size()) throw ValidationError("denormalize_point: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t f = 0; f < x.size(); ++f) {
    const double width = ranges[f].max - ranges[f].min;
    out[f] = ranges[f].min + (x[f] + 1.0) * 0.5 * width;
  }
  return out;
}

Dataset normalize_features(const Dataset& ds) {
  ds.validate();
  if (!ds.normalization.empty()) throw ValidationError("dataset is already normalized");
  std::vector<FeatureRange> ranges(ds.n_features,
                                   FeatureRange{HUGE_VAL, -HUGE_VAL});
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto r = ds.row(i);
    for (std::size_t f = 0; f < ds.n_features; ++f) {
      ranges[f].min = std::min(ranges[f].min, r[f]);
      ranges[f].max = std::max(ranges[f].max, r[f]);
    }
  }
  Dataset out = ds;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto mapped = normalize_point(ds.row(i), ranges);
    std::copy(mapped.begin(), mapped.end(), out.features.begin() + i * ds.n_features);
  }
  out.normalization = std::move(ranges);
  return out;
}

std::size_t randomised_count(std::size_t n, double fraction) {
  // The epsilon keeps e.g. 0.3 * 1000 from flooring to 299.
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

Dataset randomise_labels(const Dataset& ds, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw ValidationError("randomise_labels: fraction must lie in [0, 1]");
  Dataset out = ds;
  const std::size_t n = ds.size();
  const std::size_t m = randomised_count(n, fraction);
  if (m == 0) return out;
  RngStream rng(seed, stream_id(StreamPurpose::kLabelNoise, 0));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(idx[i], idx[j]);
    out.labels[idx[i]] = static_cast<int>(rng.below(ds.n_classes));
  }
  return out;
}

std::vector<double> gaussian_prior_sample(std::size_t s_in, RngStream& rng) {
  std::vector<double> x(s_in);
  for (double& v : x) v = rng.normal();
  return x;
}

std::vector<double> gaussian_to_feature_domain(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], -3.0, 3.0) / 3.0;
  return out;
}

std::uint64_t dataset_hash(const Dataset& ds) {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, ds.n_features);
  fnv_mix(h, ds.n_classes);
  fnv_mix(h, ds.size());
  for (double v : ds.features) fnv_mix(h, std::bit_cast<std::uint64_t>(v));
  for (int y : ds.labels) fnv_mix(h, static_cast<std::uint64_t>(y));
  return h;
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& ds) {
  ds.validate();
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out.precision(17);
  for (std::size_t f = 0; f < ds.n_features; ++f) out << 'x' << f << ',';
  out << "label\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.row(i)) out << v << ',';
    out << ds.labels[i] << '\n';
  }
  if (!ds.normalization.empty()) {
    nlohmann::json j;
    j["features"] = nlohmann::json::array();
    for (const auto& r : ds.normalization) j["features"].push_back({{"min", r.min}, {"max", r.max}});
    std::ofstream side(path.string() + ".norm.json");
    side << j.dump(2) << '\n';
  }
}

Dataset read_dataset_csv(const std::filesystem::path& path, std::size_t n_classes) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty file");
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 2) throw ValidationError(path.string() + ": need features and a label column");
  Dataset ds;
  ds.n_features = columns - 1;
  ds.n_classes = n_classes;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        if (col + 1 < columns) {
          ds.features.push_back(std::stod(cell));
        } else if (col + 1 == columns) {
          ds.labels.push_back(std::stoi(cell));
        }
      } catch (const std::exception&) {
        throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                              ": cannot parse '" + cell + "'");
      }
      ++col;
    }
    if (col != columns)
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(columns) + " columns");
  }
  const std::filesystem::path side = path.string() + ".norm.json";
  if (std::filesystem::exists(side)) {
    std::ifstream sin(side);
    const auto j = nlohmann::json::parse(sin);
    for (const auto& r : j.at("features"))
      ds.normalization.push_back({r.at("min").get<double>(), r.at("max").get<double>()});
  }
  ds.validate();
  return ds;
}

}  // namespace qcap
