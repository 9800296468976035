// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "fockkit/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fockkit: kernel-calculus verification harness"};
  app.require_subcommand(1);

  CLI::App* verify = app.add_subcommand("verify", "run verification suites against a config");
  std::string config_path, out_path, format;
  std::vector<std::string> suites;
  int seed_count = 0;
  verify->add_option("--config", config_path, "path to a JSON config")->required();
  verify->add_option("--suite", suites, "restrict to these suites (repeatable)");
  verify->add_option("--seed-count", seed_count, "override the number of seeds");
  verify->add_option("--out", out_path, "write the report here instead of the config's output");
  verify->add_option("--format", format, "report format: json, csv or table");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config: " << config_path << "\n";
      return 2;
    }
    nlohmann::json raw = nlohmann::json::parse(in);
    fockkit::HarnessConfig cfg = fockkit::parse_config(raw);
    if (!suites.empty()) {
      for (const auto& s : suites)
        if (std::find(fockkit::kSuiteNames.begin(), fockkit::kSuiteNames.end(), s) ==
            fockkit::kSuiteNames.end())
          throw fockkit::ConfigError("suites", "unknown suite '" + s + "'");
      cfg.suites = suites;
    }
    if (seed_count > 0) cfg.seed_count = seed_count;
    if (!format.empty()) cfg.format = format;
    if (!out_path.empty()) cfg.output = out_path;

    fockkit::RunReport report = fockkit::run(cfg);
    if (cfg.output.empty())
      fockkit::emit(report, cfg.format, std::cout);
    else
      fockkit::emit_to_path(report, cfg.format, cfg.output);
    if (!report.pass) std::cerr << "verification FAILED\n";
    return report.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
