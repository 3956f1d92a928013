// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace qcap {

double mean(std::span<const double> v);
// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double stddev(std::span<const double> v);

// Average ranks (1-based), ties share the mean rank.
std::vector<double> ranks(std::span<const double> v);
// Spearman rank correlation: Pearson correlation of the average ranks.
double spearman(std::span<const double> a, std::span<const double> b);
double pearson(std::span<const double> a, std::span<const double> b);

// log(sum_i exp(v_i)), stable for large magnitudes; -inf for empty input.
double log_sum_exp(std::span<const double> v);

}  // namespace qcap
