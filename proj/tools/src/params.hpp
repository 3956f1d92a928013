// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qcap::cli {

// Resolved command parameters as text, keyed by option name (without the
// leading dashes). Ordered so hashing and manifests are stable.
class Params {
 public:
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string str(const std::string& key) const { return raw(key); }
  long long integer(const std::string& key) const;
  // Rejects negative values.
  std::uint64_t count(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;

  // "key=value\n" lines in key order.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> values_;
};

// Flat "key = value" text; blank lines and lines starting with '#' are
// ignored. Keys may be written with or without leading dashes.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

}  // namespace qcap::cli
