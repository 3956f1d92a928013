// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "params.hpp"
#include "qcap/fisher.hpp"
#include "qcap/model.hpp"
#include "qcap/qmodel.hpp"

namespace qcap::cli {

struct OptionSpec {
  std::string key;
  std::string default_value;
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
};

const std::vector<CommandSpec>& command_specs();
const CommandSpec& find_command(const std::string& name);

// Defaults, then the config file, then explicit flags. Unknown keys throw.
Params resolve_params(const CommandSpec& spec, const std::map<std::string, std::string>& file,
                      const std::map<std::string, std::string>& flags);

struct RunContext {
  std::filesystem::path out_dir = ".";
  unsigned jobs = 1;
  std::ostream* console = nullptr;  // human-readable progress and summaries
};

struct RunResult {
  std::string config_hash;
  std::vector<std::filesystem::path> files;
};

// Hash of the command name and resolved parameters.
std::string config_hash(const std::string& command, const Params& params);

RunResult run_command(const std::string& command, const Params& params, const RunContext& ctx);

// Re-runs the command recorded in a manifest written by run_command.
RunResult run_manifest(const std::filesystem::path& manifest, const RunContext& ctx);

struct BuiltModel {
  std::unique_ptr<StatisticalModel> model;
  std::string description;
};

// Model spec: qnn, easy-qnn, qnn-linear, classical (highest average Fisher
// rank at this d) or an MLP topology string such as 4-6-2-2:tanh.
BuiltModel build_model(const std::string& spec, int s_in, std::size_t d, GradientMethod grad,
                       const EnsembleConfig& selection);
BuiltModel build_quantum(const std::string& spec, int n_qubits, int var_depth,
                         GradientMethod grad);

}  // namespace qcap::cli
