// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "qcap/data.hpp"
#include "qcap/error.hpp"
#include "qcap/mlp.hpp"
#include "qcap/qmodel.hpp"
#include "qcap/train.hpp"

namespace qcap {
namespace {

Dataset iris_normalised() { return normalize_features(load_iris_binary()); }

TEST(Adam, ZeroGradientLeavesThetaAlone) {
  std::vector<double> theta{0.5, -0.5};
  const std::vector<double> g{0.0, 0.0};
  AdamState s(2);
  for (int i = 0; i < 5; ++i) adam_step(theta, g, s, AdamConfig{});
  EXPECT_EQ(theta, (std::vector<double>{0.5, -0.5}));
  EXPECT_EQ(s.t, 5u);
}

TEST(Adam, FirstStepIsLearningRateTimesSign) {
  std::vector<double> theta{0.0, 0.0, 0.0};
  const std::vector<double> g{3.0, -0.2, 1e-3};
  AdamState s(3);
  AdamConfig c;
  c.lr = 0.05;
  adam_step(theta, g, s, c);
  EXPECT_NEAR(theta[0], -0.05, 1e-9);
  EXPECT_NEAR(theta[1], 0.05, 1e-8);
  EXPECT_NEAR(theta[2], -0.05, 1e-6);
}

TEST(Adam, StepsStayBoundedByLearningRate) {
  RngStream rng(1, 0);
  std::vector<double> theta(4, 0.0);
  AdamState s(4);
  AdamConfig c;
  c.lr = 0.01;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> g(4);
    for (double& v : g) v = rng.normal();
    const auto before = theta;
    adam_step(theta, g, s, c);
    // |mhat| / sqrt(vhat) <= (1 - b1) / sqrt(1 - b2) for any gradient history.
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_LE(std::abs(theta[j] - before[j]), c.lr * (0.1 / std::sqrt(0.001)) + 1e-12);
  }
}

TEST(Adam, NonFiniteGradientThrows) {
  std::vector<double> theta{0.0};
  const std::vector<double> g{std::nan("")};
  AdamState s(1);
  EXPECT_THROW(adam_step(theta, g, s, AdamConfig{}), NumericalError);
}

TEST(Train, LossDecreasesOnSingleExample) {
  const Mlp mlp(MlpTopology{{2, 3, 2}, true, Activation::kTanh});
  Dataset ds;
  ds.n_features = 2;
  ds.features = {0.5, -0.3};
  ds.labels = {1};
  TrainConfig cfg;
  cfg.lr = 0.01;
  cfg.iters = 10;
  cfg.fisher_k = 0;
  const auto rec = train_model(mlp, ds, cfg);
  ASSERT_EQ(rec.loss_trace.size(), 11u);
  for (std::size_t i = 1; i < rec.loss_trace.size(); ++i)
    EXPECT_LT(rec.loss_trace[i], rec.loss_trace[i - 1]);
}

TEST(Train, DeterministicPerSeedAndTrial) {
  const QuantumNeuralNetwork qnn(QnnSpec::qnn(4, 1));
  const auto ds = iris_normalised();
  TrainConfig cfg;
  cfg.iters = 3;
  cfg.fisher_k = 10;
  cfg.seed = 4;
  const auto a = train_model(qnn, ds, cfg, 2);
  const auto b = train_model(qnn, ds, cfg, 2);
  EXPECT_EQ(a.loss_trace, b.loss_trace);
  EXPECT_EQ(a.final_theta, b.final_theta);
  EXPECT_EQ(a.fisher_rao_norm, b.fisher_rao_norm);
  const auto c = train_model(qnn, ds, cfg, 3);
  EXPECT_NE(a.final_theta, c.final_theta);
}

TEST(Train, InitialLossIsNearLogTwo) {
  const QuantumNeuralNetwork easy(QnnSpec::easy(4, 1));
  const auto ds = iris_normalised();
  TrainConfig cfg;
  cfg.iters = 0;
  cfg.fisher_k = 0;
  const auto rec = train_model(easy, ds, cfg);
  ASSERT_EQ(rec.loss_trace.size(), 1u);
  EXPECT_NEAR(rec.loss_trace[0], std::log(2.0), 0.5);
  EXPECT_EQ(rec.final_loss, rec.loss_trace[0]);
}

TEST(Train, IrisLossDropsForEasyModel) {
  const QuantumNeuralNetwork easy(QnnSpec::easy(4, 1));
  const auto ds = iris_normalised();
  TrainConfig cfg;
  cfg.iters = 30;
  cfg.fisher_k = 20;
  const auto rec = train_model(easy, ds, cfg);
  EXPECT_LT(rec.final_loss, rec.loss_trace.front());
  EXPECT_GE(rec.fisher_rao_norm, 0.0);
  EXPECT_FALSE(rec.aborted);
}

TEST(Train, ConvergenceStopsEarly) {
  const Mlp mlp(MlpTopology{{1, 2, 2}, true, Activation::kTanh});
  Dataset ds;
  ds.n_features = 1;
  ds.features = {-1.0, 1.0};
  ds.labels = {0, 1};
  TrainConfig cfg;
  cfg.iters = 2000;
  cfg.loss_target = 0.05;
  cfg.fisher_k = 0;
  const auto rec = train_model(mlp, ds, cfg);
  EXPECT_TRUE(rec.converged);
  EXPECT_LT(rec.loss_trace.size(), 2001u);
  EXPECT_LE(rec.final_loss, 0.05);
}

TEST(Train, Validation) {
  const QuantumNeuralNetwork qnn(QnnSpec::qnn(4, 1));
  TrainConfig cfg;
  cfg.lr = 0.0;
  EXPECT_THROW(train_model(qnn, iris_normalised(), cfg), ValidationError);
  cfg = TrainConfig{};
  const auto blobs = make_blobs(10, 3, 1.0, 0);
  EXPECT_THROW(train_model(qnn, blobs, cfg), ValidationError);
}

TEST(Summary, ExcludesAbortedTrials) {
  std::vector<TrainRecord> recs(3);
  recs[0].final_loss = 1.0;
  recs[0].loss_trace = {2.0, 1.0};
  recs[1].final_loss = 3.0;
  recs[1].loss_trace = {4.0, 3.0};
  recs[2].aborted = true;
  recs[2].final_loss = std::nan("");
  recs[2].loss_trace = {5.0};
  const auto s = summarise(recs);
  EXPECT_EQ(s.trials, 3u);
  EXPECT_EQ(s.aborted, 1u);
  EXPECT_DOUBLE_EQ(s.mean_final_loss, 2.0);
  ASSERT_EQ(s.mean_loss_trace.size(), 2u);
  EXPECT_DOUBLE_EQ(s.mean_loss_trace[0], 3.0);
}

TEST(LocalEnsemble, StaysWithinRadius) {
  const std::vector<double> c{0.1, -0.2, 0.3};
  const auto pts = local_ensemble(c, 0.05, 50, 9, 1);
  ASSERT_EQ(pts.size(), 50u);
  for (const auto& p : pts)
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(std::abs(p[i] - c[i]), 0.05);
  EXPECT_EQ(pts, local_ensemble(c, 0.05, 50, 9, 1));
  EXPECT_NE(pts, local_ensemble(c, 0.05, 50, 9, 2));
}

TEST(Confusion, SmallRunHasOneRowPerFraction) {
  ConfusionConfig cfg;
  cfg.fractions = {0.0, 0.5};
  cfg.runs = 2;
  cfg.n = 40;
  cfg.n_features = 2;
  cfg.hidden = {4};
  cfg.loss_target = 0.3;
  cfg.max_iters = 400;
  cfg.local_samples = 4;
  cfg.k = 10;
  const auto r = confusion_experiment(cfg);
  EXPECT_EQ(r.d, 16u);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[1].randomised, 20u);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.runs, 2u);
    EXPECT_EQ(row.iterations.size(), 2u);
    EXPECT_EQ(row.effdims.size(), row.converged);
    for (double e : row.effdims) {
      EXPECT_GE(e, 0.0);
      EXPECT_LE(e, 16.0 + 1e-9);
    }
  }
  EXPECT_GE(r.rows[0].converged, 1u);
  cfg.jobs = 2;
  const auto again = confusion_experiment(cfg);
  EXPECT_EQ(again.rows[0].effdims, r.rows[0].effdims);
}

TEST(Confusion, Validation) {
  ConfusionConfig cfg;
  cfg.fractions = {1.5};
  EXPECT_THROW(confusion_experiment(cfg), ValidationError);
  cfg = ConfusionConfig{};
  cfg.runs = 0;
  EXPECT_THROW(confusion_experiment(cfg), ValidationError);
}

}  // namespace
}  // namespace qcap
