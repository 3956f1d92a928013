// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qcap/error.hpp"

namespace qcap::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  for (;;) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* what) {
  throw ValidationError("--" + key + ": '" + value + "' is not " + what);
}

double to_real(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    bad(key, v, "a finite number");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size()) bad(key, v, "an integer");
  return x;
}

}  // namespace

const std::string& Params::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvariantError("parameter '" + key + "' was never resolved");
  return it->second;
}

long long Params::integer(const std::string& key) const { return to_int(key, raw(key)); }

std::uint64_t Params::count(const std::string& key) const {
  const auto v = integer(key);
  if (v < 0) bad(key, raw(key), "a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

double Params::real(const std::string& key) const { return to_real(key, raw(key)); }

bool Params::flag(const std::string& key) const {
  const auto& v = raw(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(key, v, "a boolean");
}

std::vector<double> Params::reals(const std::string& key) const {
  std::vector<double> out;
  if (trim(raw(key)).empty()) return out;
  for (const auto& item : split(raw(key), ',')) out.push_back(to_real(key, item));
  return out;
}

std::vector<int> Params::integers(const std::string& key) const {
  std::vector<int> out;
  if (trim(raw(key)).empty()) return out;
  for (const auto& item : split(raw(key), ',')) {
    const auto v = to_int(key, item);
    if (v < -2147483647LL || v > 2147483647LL) bad(key, item, "a 32-bit integer");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string Params::canonical() const {
  std::string s;
  for (const auto& [k, v] : values_) s += k + "=" + v + "\n";
  return s;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected 'key = value'");
    auto key = trim(std::string_view(t).substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key.empty())
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    out[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

}  // namespace qcap::cli
