// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace qcap {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3"). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Purposes used to carve independent streams out of one master seed.
enum class StreamPurpose : std::uint64_t {
  kThetaSample = 1,
  kFisherInputs = 2,
  kTrainInit = 3,
  kLabelNoise = 4,
  kDataset = 5,
  kSelection = 6,
  kLocalEnsemble = 7,
  kRepeat = 8,
};

// Stream index for (purpose, index); distinct for index < 2^40.
constexpr std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t index) {
  return (static_cast<std::uint64_t>(purpose) << 40) ^ index;
}

// Counter-based random stream. The key is the master seed and the upper half
// of the counter is the stream index, so (seed, stream) fixes the sequence on
// every platform. Streams are cheap values; copy one per job.
class RngStream {
 public:
  static constexpr std::string_view kAlgorithm = "philox4x32-10";

  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n) without modulo bias. n must be > 0.
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller (portable, unlike std::normal_distribution).
  double normal();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  std::optional<double> spare_normal_;
};

}  // namespace qcap
