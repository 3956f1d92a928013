// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "qcap/rng.hpp"

namespace qcap {

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;
  friend bool operator==(const FeatureRange&, const FeatureRange&) = default;
};

// Labelled classification data, features stored row-major (n x n_features).
// `normalization` is non-empty exactly when the features have been mapped to
// [-1, 1] and records the per-feature range used for that map.
struct Dataset {
  std::size_t n_features = 0;
  std::size_t n_classes = 2;
  std::vector<double> features;
  std::vector<int> labels;
  std::vector<FeatureRange> normalization;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * n_features, n_features};
  }

  // Throws ValidationError on shape mismatch, non-finite values or labels
  // outside [0, n_classes).
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Setosa (label 0) and versicolor (label 1) rows of the Iris data, raw units,
// original order. The embedded table is checksum-pinned; a mismatch throws
// InvariantError.
Dataset load_iris_binary();

// Two isotropic Gaussian clusters centred at -/+1.5 along the first axis.
// Labels alternate 0,1,0,... so class counts differ by at most one.
Dataset make_blobs(std::size_t n, std::size_t n_features, double spread, std::uint64_t seed);

// Per-feature min-max map onto [-1, 1]. Constant features map to 0.
Dataset normalize_features(const Dataset& ds);
std::vector<double> normalize_point(std::span<const double> x, std::span<const FeatureRange> ranges);
std::vector<double> denormalize_point(std::span<const double> x, std::span<const FeatureRange> ranges);

// Resamples the labels of floor(fraction * n) distinct points uniformly over
// the classes (a resampled label may equal the original one).
Dataset randomise_labels(const Dataset& ds, double fraction, std::uint64_t seed);

// Number of indices randomise_labels touches.
std::size_t randomised_count(std::size_t n, double fraction);

// i.i.d. standard normal vector.
std::vector<double> gaussian_prior_sample(std::size_t s_in, RngStream& rng);

// Maps a Gaussian prior sample into the [-1, 1] feature domain expected by
// the quantum feature maps: clip to [-3, 3], then divide by 3.
std::vector<double> gaussian_to_feature_domain(std::span<const double> x);

// FNV-1a over the feature bit patterns, labels and shape.
std::uint64_t dataset_hash(const Dataset& ds);

// CSV: header row "x0,...,x{s-1},label", one sample per line. When the
// dataset carries a normalization record it is written to `<path>.norm.json`.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& ds);
Dataset read_dataset_csv(const std::filesystem::path& path, std::size_t n_classes = 2);

}  // namespace qcap
