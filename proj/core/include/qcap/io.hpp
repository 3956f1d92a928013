// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "qcap/fisher.hpp"

namespace qcap {

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

// Writes `<base>.json` (d, k, seeds, model description, thetas, trace mean)
// and `<base>.csv` with columns sample,row,c0..c{d-1}. Doubles are written
// with 17 significant digits so a round trip is exact.
void save_ensemble(const std::filesystem::path& base, const FisherEnsemble& ensemble,
                   std::string_view model_spec);

struct LoadedEnsemble {
  FisherEnsemble ensemble;
  std::string model_spec;
};

LoadedEnsemble load_ensemble(const std::filesystem::path& base);

}  // namespace qcap
