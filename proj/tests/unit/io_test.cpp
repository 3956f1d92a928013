// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "params.hpp"
#include "qcap/error.hpp"
#include "qcap/fisher.hpp"
#include "qcap/io.hpp"
#include "qcap/qmodel.hpp"

namespace qcap {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("qcap_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(Hash, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(EnsembleIo, RoundTripIsExact) {
  const QuantumNeuralNetwork qnn(QnnSpec::qnn(3, 1));
  EnsembleConfig cfg;
  cfg.theta_samples = 3;
  cfg.k = 7;
  cfg.seed = 42;
  const auto ens = normalise_ensemble(build_ensemble(qnn, cfg));
  const auto dir = temp_dir("ens");
  save_ensemble(dir / "e", ens, qnn.describe());
  EXPECT_TRUE(fs::exists(dir / "e.json"));
  EXPECT_TRUE(fs::exists(dir / "e.csv"));
  const auto back = load_ensemble(dir / "e");
  EXPECT_EQ(back.model_spec, qnn.describe());
  EXPECT_EQ(back.ensemble.d, ens.d);
  EXPECT_EQ(back.ensemble.normalised, ens.normalised);
  EXPECT_EQ(back.ensemble.scale, ens.scale);
  EXPECT_EQ(back.ensemble.trace_mean, ens.trace_mean);
  ASSERT_EQ(back.ensemble.estimates.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.ensemble.estimates[i].matrix, ens.estimates[i].matrix);
    EXPECT_EQ(back.ensemble.estimates[i].theta, ens.estimates[i].theta);
    EXPECT_EQ(back.ensemble.estimates[i].k, ens.estimates[i].k);
  }
  fs::remove_all(dir);
}

TEST(EnsembleIo, MissingFilesThrow) {
  EXPECT_THROW(load_ensemble(fs::temp_directory_path() / "qcap_io_does_not_exist"),
               ValidationError);
}

TEST(ConfigFile, ParsesKeyValueLines) {
  const auto dir = temp_dir("cfg");
  {
    std::ofstream f(dir / "run.cfg");
    f << "# comment\n\nsamples = 20\n--gamma=0.5\n  model =  easy-qnn  \n";
  }
  const auto kv = cli::read_config_file(dir / "run.cfg");
  EXPECT_EQ(kv.at("samples"), "20");
  EXPECT_EQ(kv.at("gamma"), "0.5");
  EXPECT_EQ(kv.at("model"), "easy-qnn");
  EXPECT_EQ(kv.size(), 3u);
  {
    std::ofstream f(dir / "bad.cfg");
    f << "no equals sign here\n";
  }
  EXPECT_THROW(cli::read_config_file(dir / "bad.cfg"), ValidationError);
  EXPECT_THROW(cli::read_config_file(dir / "absent.cfg"), ValidationError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace qcap
