// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "qcap/fisher.hpp"
#include "qcap/mlp.hpp"

namespace qcap {

struct ComparatorCandidate {
  MlpTopology topology;
  double mean_rank = 0.0;
};

struct ComparatorSelection {
  MlpTopology best;
  double best_rank = 0.0;
  std::vector<ComparatorCandidate> candidates;
};

// Picks the classical network with the highest average Fisher rank among
// every topology with exactly d parameters, over all activations and with
// and without bias. Ties go to the earlier candidate. Throws
// ValidationError if no topology fits d.
ComparatorSelection select_classical(std::size_t d, int s_in, int s_out,
                                     const EnsembleConfig& config, int max_layers = 3,
                                     int max_width = 256);

}  // namespace qcap
