// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include "fockkit/ito.hpp"
#include "fockkit/random.hpp"

namespace fockkit {

struct ConfigError : std::invalid_argument {
  ConfigError(const std::string& field, const std::string& reason)
      : std::invalid_argument("config field '" + field + "': " + reason), field(field) {}
  std::string field;
};

extern const std::vector<std::string> kSuiteNames;

struct HarnessConfig {
  int n_points = 4;
  double horizon = 1.0;
  std::vector<double> times;           // empty: uniform grid over the horizon
  std::vector<double> weights;         // size 1: broadcast
  std::vector<int> multiplicities;     // size 1: broadcast
  int initial_dim = 2;
  std::uint64_t seed_base = 20260801;
  int seed_count = 100;
  std::vector<std::string> suites;     // empty: all
  std::string q_field = "projector";   // identity|zero|projector|scalar|random
  double q_scalar = 2.0;
  int q_rank = 1;
  double density = 0.35;
  double magnitude = 1.0;
  int integrand_pairs = 24;
  int max_degree = 3;
  std::map<std::string, double> tolerances;  // per-suite overrides
  std::string output;                  // optional file path
  std::string format = "json";         // json|csv|table
  int threads = 0;                     // 0: FOCKKIT_THREADS env or hardware

  double tolerance(const std::string& suite, double fallback) const;
  PointSpace make_space() const;
  QField make_qfield(const PointSpace& space, std::uint64_t seed) const;
  nlohmann::ordered_json echo() const;
};

HarnessConfig parse_config(const nlohmann::json& j);

struct SuiteResult {
  std::string name;
  std::vector<ItoReport> records;
  bool pass = true;
  double runtime_seconds = 0.0;
};

struct RunReport {
  nlohmann::ordered_json config_echo;
  std::vector<SuiteResult> suites;
  bool pass = true;
  double total_runtime_seconds = 0.0;
};

RunReport run(const HarnessConfig& cfg);

nlohmann::ordered_json report_to_json(const RunReport& r, bool include_runtime = true);
void emit(const RunReport& r, const std::string& format, std::ostream& os);
void emit_to_path(const RunReport& r, const std::string& format, const std::string& path);

}  // namespace fockkit
