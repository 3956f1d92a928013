// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcap/error.hpp"

namespace qcap {
namespace {

std::filesystem::path with_ext(const std::filesystem::path& base, const char* ext) {
  auto p = base;
  p += ext;
  return p;
}

double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError("bad number '" + std::string(s) + "' in " + where);
  return v;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void save_ensemble(const std::filesystem::path& base, const FisherEnsemble& ens,
                   std::string_view model_spec) {
  nlohmann::ordered_json j;
  j["format"] = "qcap-fisher-ensemble/1";
  j["model"] = std::string(model_spec);
  j["d"] = ens.d;
  j["samples"] = ens.estimates.size();
  j["normalised"] = ens.normalised;
  j["scale"] = ens.scale;
  j["trace_mean"] = ens.trace_mean;
  auto& items = j["estimates"] = nlohmann::json::array();
  for (const auto& e : ens.estimates) {
    items.push_back({{"k", e.k},
                     {"clamp_events", e.clamp_events},
                     {"seed", e.seed},
                     {"stream", e.stream},
                     {"theta", e.theta}});
  }
  std::ofstream hj(with_ext(base, ".json"));
  if (!hj) throw ValidationError("cannot write " + with_ext(base, ".json").string());
  hj << j.dump(2) << '\n';

  std::ofstream csv(with_ext(base, ".csv"));
  if (!csv) throw ValidationError("cannot write " + with_ext(base, ".csv").string());
  csv << "sample,row";
  for (std::size_t c = 0; c < ens.d; ++c) csv << ",c" << c;
  csv << '\n';
  char buf[32];
  for (std::size_t s = 0; s < ens.estimates.size(); ++s) {
    const auto& m = ens.estimates[s].matrix;
    for (std::size_t r = 0; r < ens.d; ++r) {
      csv << s << ',' << r;
      for (std::size_t c = 0; c < ens.d; ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
        csv << ',' << buf;
      }
      csv << '\n';
    }
  }
}

LoadedEnsemble load_ensemble(const std::filesystem::path& base) {
  std::ifstream hj(with_ext(base, ".json"));
  if (!hj) throw ValidationError("cannot read " + with_ext(base, ".json").string());
  nlohmann::json j;
  try {
    hj >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("ensemble header: ") + e.what());
  }
  LoadedEnsemble out;
  auto& ens = out.ensemble;
  try {
    out.model_spec = j.at("model").get<std::string>();
    ens.d = j.at("d").get<std::size_t>();
    ens.normalised = j.at("normalised").get<bool>();
    ens.scale = j.at("scale").get<double>();
    ens.trace_mean = j.at("trace_mean").get<double>();
    for (const auto& item : j.at("estimates")) {
      FisherEstimate e;
      e.k = item.at("k").get<std::size_t>();
      e.clamp_events = item.at("clamp_events").get<std::size_t>();
      e.seed = item.at("seed").get<std::uint64_t>();
      e.stream = item.at("stream").get<std::uint64_t>();
      e.theta = item.at("theta").get<std::vector<double>>();
      e.matrix = Matrix(ens.d, ens.d);
      ens.estimates.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("ensemble header: ") + e.what());
  }

  const auto csv_path = with_ext(base, ".csv");
  std::ifstream csv(csv_path);
  if (!csv) throw ValidationError("cannot read " + csv_path.string());
  std::string line;
  std::getline(csv, line);
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != ens.d + 2) throw ValidationError("ensemble CSV: wrong column count");
    const auto s = static_cast<std::size_t>(parse_double(cells[0], csv_path.string()));
    const auto r = static_cast<std::size_t>(parse_double(cells[1], csv_path.string()));
    if (s >= ens.estimates.size() || r >= ens.d)
      throw ValidationError("ensemble CSV: index out of range");
    for (std::size_t c = 0; c < ens.d; ++c)
      ens.estimates[s].matrix(r, c) = parse_double(cells[c + 2], csv_path.string());
    ++rows;
  }
  if (rows != ens.d * ens.estimates.size())
    throw ValidationError("ensemble CSV: expected " + std::to_string(ens.d * ens.estimates.size()) +
                          " rows, found " + std::to_string(rows));
  return out;
}

}  // namespace qcap
