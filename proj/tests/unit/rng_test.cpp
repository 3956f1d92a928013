// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qcap/data.hpp"
#include "qcap/rng.hpp"

namespace qcap {
namespace {

using Block = std::array<std::uint32_t, 4>;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswerZero) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerAllOnes) {
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, SameSeedAndStreamRepeat) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u32(), b.next_u32());
}

TEST(RngStream, StreamsAndSeedsDiffer) {
  RngStream a(42, 7), b(42, 8), c(43, 7);
  int same_b = 0, same_c = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    same_b += x == b.next_u64();
    same_c += x == c.next_u64();
  }
  EXPECT_EQ(same_b, 0);
  EXPECT_EQ(same_c, 0);
}

TEST(RngStream, FirstWordsComeFromCounterZero) {
  RngStream r(0, 0);
  const auto block = philox4x32_10({0, 0, 0, 0}, {0, 0});
  for (auto w : block) EXPECT_EQ(r.next_u32(), w);
}

TEST(RngStream, UniformInUnitInterval) {
  RngStream r(1, 2);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1 - 1e-3);
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(RngStream, BelowCoversRange) {
  RngStream r(3, 4);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.below(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(RngStream, StreamIdSeparatesPurposes) {
  EXPECT_NE(stream_id(StreamPurpose::kThetaSample, 0), stream_id(StreamPurpose::kFisherInputs, 0));
  EXPECT_EQ(stream_id(StreamPurpose::kThetaSample, 5),
            (std::uint64_t{1} << 40) ^ std::uint64_t{5});
}

TEST(GaussianPrior, MomentsMatchStandardNormal) {
  RngStream r(2026, 1);
  const int n = 100000;
  const std::size_t s = 3;
  std::vector<double> sum(s, 0.0), sq(s, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto x = gaussian_prior_sample(s, r);
    for (std::size_t j = 0; j < s; ++j) {
      sum[j] += x[j];
      sq[j] += x[j] * x[j];
    }
  }
  for (std::size_t j = 0; j < s; ++j) {
    const double m = sum[j] / n;
    EXPECT_NEAR(m, 0.0, 0.02);
    EXPECT_NEAR(sq[j] / n - m * m, 1.0, 0.05);
  }
}

TEST(GaussianPrior, Deterministic) {
  RngStream a(9, 9), b(9, 9);
  EXPECT_EQ(gaussian_prior_sample(4, a), gaussian_prior_sample(4, b));
}

TEST(GaussianPrior, FeatureDomainClipsAndScales) {
  const std::vector<double> x{-5.0, -3.0, 0.3, 3.0, 7.0};
  const auto y = gaussian_to_feature_domain(x);
  EXPECT_DOUBLE_EQ(y[0], -1.0);
  EXPECT_DOUBLE_EQ(y[1], -1.0);
  EXPECT_DOUBLE_EQ(y[2], 0.1);
  EXPECT_DOUBLE_EQ(y[3], 1.0);
  EXPECT_DOUBLE_EQ(y[4], 1.0);
}

}  // namespace
}  // namespace qcap
