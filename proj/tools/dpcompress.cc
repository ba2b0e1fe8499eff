// Copyright 2026 The dpcompress Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dpcompress: command line front end for the runner.
//
//   dpcompress run <config.json> [--output DIR]
//   dpcompress sweep <config.json> [--output DIR] [--threads N]
//   dpcompress privacy <config.json> [--target-epsilon X]
//   dpcompress validate-compressor <config.json> [--trials N]
//
// Exit status: 0 ok, 1 run failure, 2 config error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dpc/error.h"
#include "dpc/runner.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitConfigError = 2;

int ExitCodeFor(const dpc::Error& e) {
  switch (e.code()) {
    case dpc::ErrorCode::kConfigInvalid:
    case dpc::ErrorCode::kInvalidEdge:
    case dpc::ErrorCode::kDisconnectedGraph:
    case dpc::ErrorCode::kSpecDimensionMismatch:
    case dpc::ErrorCode::kDimensionMismatch:
    case dpc::ErrorCode::kInvalidMatrix:
      return kExitConfigError;
    default:
      return kExitRunFailure;
  }
}

std::optional<std::filesystem::path> OptionalPath(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private compressed decentralized optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DPCOMPRESS_VERSION);

  std::string config_path;
  std::string output;
  int threads = 0;
  int trials = 10000;
  std::optional<double> target_epsilon;

  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("config", config_path, "Run config JSON (or metadata.json)")
      ->required();
  run->add_option("--output,-o", output, "Output directory override");

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter");
  sweep->add_option("config", config_path, "Config JSON with a sweep block")
      ->required();
  sweep->add_option("--output,-o", output, "Output directory override");
  sweep->add_option("--threads,-j", threads, "Worker threads (0 = auto)");

  auto* privacy = app.add_subcommand("privacy", "Print the privacy budget");
  privacy->add_option("config", config_path, "Run config JSON")->required();
  privacy->add_option("--target-epsilon", target_epsilon,
                      "Report noise scales that achieve this budget");

  auto* validate = app.add_subcommand("validate-compressor",
                                      "Check the compressor contract");
  validate->add_option("config", config_path, "Run config JSON")->required();
  validate->add_option("--trials", trials, "Gaussian test vectors")
      ->check(CLI::Range(1000, 100000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  try {
    const dpc::RunConfig cfg = dpc::LoadRunConfig(config_path);

    if (run->parsed()) {
      const auto dir = dpc::ResolveOutputDir(cfg, OptionalPath(output));
      const dpc::RunArtifacts art = dpc::RunSingle(cfg, dir);
      std::cout << "trace: " << art.trace_csv.string() << "\n"
                << "metadata: " << art.metadata.string() << "\n"
                << "final accuracy: " << art.final_accuracy << "\n";
      if (!art.invariants.passed()) {
        std::cerr << "invariant check failed (identity residual "
                  << art.invariants.identity_residual_max << ")\n";
        return kExitRunFailure;
      }
      return kExitOk;
    }

    if (sweep->parsed()) {
      const auto dir = dpc::ResolveOutputDir(cfg, OptionalPath(output));
      const dpc::SweepResult res = dpc::RunSweep(cfg, dir, threads);
      std::cout << "summary: " << res.summary_csv.string() << "\n";
      for (const auto& row : res.summary) {
        std::cout << "  " << row.value << ": median " << row.median << " ("
                  << row.completed << " runs)\n";
      }
      if (!res.all_ok) {
        std::cerr << "one or more sweep cells failed; see failures.csv\n";
        return kExitRunFailure;
      }
      return kExitOk;
    }

    if (privacy->parsed()) {
      dpc::WritePrivacyTable(dpc::PrivacyReport(cfg, target_epsilon),
                             std::cout);
      return kExitOk;
    }

    if (validate->parsed()) {
      const auto rep = dpc::ValidateConfiguredCompressor(cfg, trials);
      std::printf("ratio %.6g bound %.6g %s\nr0 ratio %.6g r0 bound %.6g %s\n",
                  rep.empirical_ratio, rep.bound,
                  rep.passes ? "PASS" : "FAIL", rep.r0_ratio, rep.r0_bound,
                  rep.r0_passes ? "PASS" : "FAIL");
      return rep.passes && rep.r0_passes ? kExitOk : kExitRunFailure;
    }
  } catch (const dpc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRunFailure;
  }
  return kExitOk;
}
