// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/comparator.hpp"

#include <string>

#include "qcap/error.hpp"
#include "qcap/rng.hpp"
#include "qcap/spectra.hpp"

namespace qcap {

ComparatorSelection select_classical(std::size_t d, int s_in, int s_out,
                                     const EnsembleConfig& config, int max_layers,
                                     int max_width) {
  ComparatorSelection out;
  EnsembleConfig sel = config;
  sel.seed = RngStream(config.seed, stream_id(StreamPurpose::kSelection, 0)).next_u64();
  bool found = false;
  for (auto act : {Activation::kRelu, Activation::kLeakyRelu, Activation::kTanh,
                   Activation::kSigmoid}) {
    for (auto& t : enumerate_topologies(d, s_in, s_out, max_layers, max_width, act)) {
      const Mlp model(t);
      const auto factors = build_factor_ensemble(model, sel);
      double rank = 0.0;
      for (const auto& f : factors) rank += spectrum_stats(f.eigenvalues()).numeric_rank;
      rank /= static_cast<double>(factors.size());
      if (!found || rank > out.best_rank) {
        out.best = t;
        out.best_rank = rank;
        found = true;
      }
      out.candidates.push_back({std::move(t), rank});
    }
  }
  if (!found)
    throw ValidationError("no classical topology has exactly " + std::to_string(d) +
                          " parameters for s_in=" + std::to_string(s_in) +
                          ", s_out=" + std::to_string(s_out));
  return out;
}

}  // namespace qcap
