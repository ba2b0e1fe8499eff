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

// Experiment driver: JSON run configs, single runs, sweeps, privacy reports
// and the compressor gatekeeper. Everything the CLI does lives here so it can
// be tested without spawning processes.

#ifndef DPC_RUNNER_H_
#define DPC_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dpc/compressors.h"
#include "dpc/metrics.h"
#include "dpc/noise.h"
#include "dpc/objectives.h"
#include "dpc/simulation.h"
#include "dpc/topology.h"

namespace dpc {

enum class SweepParameter { kQ, kS, kEta };
std::string_view SweepParameterName(SweepParameter p);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kQ;
  std::vector<double> values;
  int repeats = 1;
};

struct PrivacySettings {
  double box_radius = 2.0;
  int trials = 2000;
  double split = 0.5;  // share of a target epsilon given to the x-term
};

struct RunConfig {
  Algorithm algorithm = Algorithm::kPgtc;
  int n = 0;
  std::vector<Edge> edges;
  ObjectiveConfig objective;
  CompressorSpec compressor;
  NoiseSchedule noise_x;
  NoiseSchedule noise_second;  // "y" for pgtc, "v" for ppdc
  double eta = 0.0;
  double gamma = 0.0;
  double alpha_x = 0.0;
  double alpha_y = 0.0;  // pgtc only
  double omega = 0.0;    // ppdc only
  int64_t iterations = 0;
  uint64_t seed = 0;
  std::string outputs;
  double init_low = 0.0;
  double init_high = 1.0;
  std::optional<int64_t> reference_iterations;
  std::optional<SweepSpec> sweep;
  PrivacySettings privacy;
  int validation_trials = 2000;
};

// Throws Error(kConfigInvalid) whose field() is a dotted path such as
// "gains.omega" or "noise.x.q". Unknown keys are rejected.
RunConfig ParseRunConfig(std::string_view json_text);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Fully resolved config as JSON with sorted keys. Parsing it back yields the
// same config.
std::string CanonicalConfigJson(const RunConfig& cfg);
// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string ConfigHash(const RunConfig& cfg);

AlgorithmConfig ToAlgorithmConfig(const RunConfig& cfg);

// Everything a run needs, built deterministically from the config.
struct Experiment {
  Topology topology;
  std::vector<LocalObjective> objectives;
  Matrix x0;
  AlgorithmConfig algorithm;
  StreamFactory rng;
};
Experiment BuildExperiment(const RunConfig& cfg);

// Precedence: explicit override, then DPCOMPRESS_OUTPUT_ROOT joined with a
// relative cfg.outputs, then cfg.outputs itself.
std::filesystem::path ResolveOutputDir(
    const RunConfig& cfg, const std::optional<std::filesystem::path>& override);

struct InvariantSummary {
  double identity_residual_max = 0.0;
  double identity_tolerance = 1e-9;
  bool rows_contiguous = true;
  bool cum_bits_monotone = true;
  bool residual_nonincreasing = true;
  bool passed() const {
    return identity_residual_max <= identity_tolerance && rows_contiguous &&
           cum_bits_monotone && residual_nonincreasing;
  }
};
InvariantSummary CheckInvariants(const Trace& trace);

struct RunArtifacts {
  std::filesystem::path directory;
  std::filesystem::path trace_csv;
  std::filesystem::path metadata;
  std::filesystem::path config;
  std::vector<std::filesystem::path> charts;
  InvariantSummary invariants;
  double final_accuracy = 0.0;
};

// Runs the contraction gatekeeper, the algorithm and (if configured) the
// reference run, then writes trace.csv, config.json, metadata.json and charts.
RunArtifacts RunSingle(const RunConfig& cfg,
                       const std::filesystem::path& out_dir);

uint64_t ChildSeed(uint64_t master_seed, uint64_t value_index,
                   uint64_t repeat_index);
// Copy of cfg with the sweep parameter set to value and the seed replaced.
RunConfig SweepCellConfig(const RunConfig& cfg, double value, uint64_t seed);

struct SweepCell {
  size_t value_index = 0;
  size_t repeat_index = 0;
  double value = 0.0;
  uint64_t seed = 0;
  std::optional<double> accuracy;
  bool invariants_passed = false;
  std::string error;
};

struct SweepRow {
  double value = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  int completed = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<SweepRow> summary;
  std::filesystem::path summary_csv;
  bool all_ok = true;
};

// threads <= 0 picks the hardware concurrency.
SweepResult RunSweep(const RunConfig& cfg, const std::filesystem::path& out_dir,
                     int threads = 0);

double Median(std::vector<double> values);

struct PrivacyRow {
  Algorithm algorithm = Algorithm::kPgtc;
  int64_t K = 0;
  double q = 0.0;
  double s_x = 0.0;
  double s_second = 0.0;
  double M = 0.0;
  double box_radius = 0.0;
  std::optional<double> epsilon;  // nullopt: no privacy guarantee
  // Same budget evaluated in log space; finite even when epsilon overflows.
  std::optional<double> log10_epsilon;
  std::string label;  // "configured" or "target"
  std::string note;   // replaces the epsilon column when set
};

std::vector<PrivacyRow> PrivacyReport(const RunConfig& cfg,
                                      std::optional<double> target_epsilon);
void WritePrivacyTable(const std::vector<PrivacyRow>& rows, std::ostream& out);

ContractionReport ValidateConfiguredCompressor(const RunConfig& cfg,
                                               int trials);

}  // namespace dpc

#endif  // DPC_RUNNER_H_
