// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qcap/error.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInvariant = 4;

std::string default_out_dir() {
  const char* env = std::getenv("QCAP_OUTPUT_DIR");
  return env && *env ? env : ".";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qcap::cli;
  CLI::App app{"qcap: Fisher spectra, effective dimension and training experiments"};
  app.require_subcommand(1);

  std::string config_file;
  std::string out_dir = default_out_dir();
  unsigned jobs = 1;
  auto add_runtime = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory (default: $QCAP_OUTPUT_DIR or .)");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));
  };

  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> flag_opts;
  std::map<std::string, std::string> storage;
  for (const auto& spec : command_specs()) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("--config", config_file, "flat key = value config file");
    add_runtime(sub);
    for (const auto& o : spec.options) {
      auto& slot = storage[spec.name + "/" + o.key];
      std::string help = o.help;
      if (!o.default_value.empty()) help += " [" + o.default_value + "]";
      auto* opt = sub->add_option("--" + o.key, slot, help);
      flag_opts[spec.name].emplace_back(o.key, opt);
    }
  }
  std::string manifest;
  auto* run = app.add_subcommand("run", "re-run a command from its manifest");
  run->add_option("--manifest", manifest, "manifest JSON written by an earlier run")->required();
  add_runtime(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.jobs = jobs;
  ctx.console = &std::cout;
  try {
    RunResult result;
    if (run->parsed()) {
      result = run_manifest(manifest, ctx);
    } else {
      for (const auto& spec : command_specs()) {
        auto* sub = app.get_subcommand(spec.name);
        if (!sub->parsed()) continue;
        std::map<std::string, std::string> flags;
        for (const auto& [key, opt] : flag_opts[spec.name])
          if (opt->count() > 0) flags[key] = storage[spec.name + "/" + key];
        std::map<std::string, std::string> file;
        if (!config_file.empty()) file = read_config_file(config_file);
        result = run_command(spec.name, resolve_params(spec, file, flags), ctx);
      }
    }
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
    return 0;
  } catch (const qcap::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const qcap::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const qcap::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
}
