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

#include "dpc/runner.h"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "dpc/error.h"
#include "dpc/privacy.h"
#include "dpc/svg.h"
#include "json.hpp"

#ifndef DPCOMPRESS_VERSION
#define DPCOMPRESS_VERSION "unknown"
#endif

namespace dpc {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// run_id values for streams that sit outside the algorithm itself.
constexpr uint64_t kGatekeeperRunId = 1;
constexpr uint64_t kPrivacyRunId = 2;

std::string Join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

std::string TypeName(const json& j) { return j.type_name(); }

// Object reader that remembers which keys were consumed so leftovers can be
// reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw Error::ConfigInvalid(path_.empty() ? "$" : path_,
                                 "expected an object, got " + TypeName(j_));
    }
  }

  bool Has(const std::string& key) const { return j_.contains(key); }

  const json& Required(const std::string& key) {
    if (!j_.contains(key)) {
      throw Error::ConfigInvalid(Join(path_, key), "missing required key");
    }
    used_.insert(key);
    return j_.at(key);
  }

  double Number(const std::string& key) {
    const json& v = Required(key);
    if (!v.is_number()) {
      throw Error::ConfigInvalid(Join(path_, key),
                                 "expected a number, got " + TypeName(v));
    }
    return v.get<double>();
  }
  double Number(const std::string& key, double fallback) {
    return Has(key) ? Number(key) : fallback;
  }

  int64_t Integer(const std::string& key) {
    const json& v = Required(key);
    if (!v.is_number_integer()) {
      throw Error::ConfigInvalid(Join(path_, key),
                                 "expected an integer, got " + TypeName(v));
    }
    if (v.is_number_unsigned() &&
        v.get<uint64_t>() >
            static_cast<uint64_t>(std::numeric_limits<int64_t>::max())) {
      throw Error::ConfigInvalid(Join(path_, key), "integer out of range");
    }
    return v.get<int64_t>();
  }
  int64_t Integer(const std::string& key, int64_t fallback) {
    return Has(key) ? Integer(key) : fallback;
  }

  int Int(const std::string& key, int64_t lo, int64_t hi) {
    const int64_t v = Integer(key);
    if (v < lo || v > hi) {
      throw Error::ConfigInvalid(Join(path_, key),
                                 "must lie in [" + std::to_string(lo) + ", " +
                                     std::to_string(hi) + "]");
    }
    return static_cast<int>(v);
  }

  uint64_t Unsigned(const std::string& key) {
    const json& v = Required(key);
    if (!v.is_number_unsigned()) {
      throw Error::ConfigInvalid(
          Join(path_, key), "expected a non-negative integer, got " +
                                (v.is_number() ? std::string("negative or "
                                                             "fractional number")
                                               : TypeName(v)));
    }
    return v.get<uint64_t>();
  }

  bool Bool(const std::string& key, bool fallback) {
    if (!Has(key)) return fallback;
    const json& v = Required(key);
    if (!v.is_boolean()) {
      throw Error::ConfigInvalid(Join(path_, key),
                                 "expected a boolean, got " + TypeName(v));
    }
    return v.get<bool>();
  }

  std::string String(const std::string& key) {
    const json& v = Required(key);
    if (!v.is_string()) {
      throw Error::ConfigInvalid(Join(path_, key),
                                 "expected a string, got " + TypeName(v));
    }
    return v.get<std::string>();
  }

  ObjectReader Child(const std::string& key) {
    return ObjectReader(Required(key), Join(path_, key));
  }

  std::string Path(const std::string& key) const { return Join(path_, key); }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) {
        throw Error::ConfigInvalid(Join(path_, it.key()), "unknown key");
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Algorithm ParseAlgorithm(const std::string& s, const std::string& path) {
  if (s == "pgtc") return Algorithm::kPgtc;
  if (s == "ppdc") return Algorithm::kPpdc;
  throw Error::ConfigInvalid(path, "expected \"pgtc\" or \"ppdc\", got \"" +
                                       s + "\"");
}

ObjectiveKind ParseObjectiveKind(const std::string& s,
                                 const std::string& path) {
  for (auto k : {ObjectiveKind::kLogistic, ObjectiveKind::kSinCos,
                 ObjectiveKind::kQuadratic}) {
    if (s == ObjectiveKindName(k)) return k;
  }
  throw Error::ConfigInvalid(
      path, "expected \"logistic\", \"sincos\" or \"quadratic\", got \"" + s +
                "\"");
}

CompressorKind ParseCompressorKind(const std::string& s,
                                   const std::string& path) {
  for (auto k : {CompressorKind::kIdentity, CompressorKind::kTopK,
                 CompressorKind::kBBit, CompressorKind::kNormSign}) {
    if (s == CompressorKindName(k)) return k;
  }
  throw Error::ConfigInvalid(path, "unknown compressor kind \"" + s + "\"");
}

SweepParameter ParseSweepParameter(const std::string& s,
                                   const std::string& path) {
  for (auto p : {SweepParameter::kQ, SweepParameter::kS, SweepParameter::kEta}) {
    if (s == SweepParameterName(p)) return p;
  }
  throw Error::ConfigInvalid(path, "expected \"q\", \"s\" or \"eta\"");
}

NoiseSchedule ParseNoise(ObjectReader r, const std::string& path) {
  NoiseSchedule ns;
  ns.s = r.Number("s");
  ns.q = r.Number("q");
  ns.enabled = r.Bool("enabled", true);
  r.Finish();
  try {
    ns.Validate();
  } catch (const Error& e) {
    throw Error::ConfigInvalid(Join(path, e.field()), e.what());
  }
  return ns;
}

void CheckSweepValue(SweepParameter p, double v, const std::string& path) {
  switch (p) {
    case SweepParameter::kQ:
      if (!(v > 0.0 && v < 1.0)) {
        throw Error::ConfigInvalid(path, "q must lie in (0, 1)");
      }
      break;
    case SweepParameter::kS:
      if (!(v >= 0.0)) throw Error::ConfigInvalid(path, "s must be >= 0");
      break;
    case SweepParameter::kEta:
      if (!(v > 0.0)) throw Error::ConfigInvalid(path, "eta must be > 0");
      break;
  }
}

RunConfig ParseConfigObject(const json& root) {
  ObjectReader r(root, "");
  RunConfig cfg;
  cfg.algorithm = ParseAlgorithm(r.String("algorithm"), "algorithm");
  const bool pgtc = cfg.algorithm == Algorithm::kPgtc;

  {
    ObjectReader g = r.Child("graph");
    cfg.n = g.Int("n", 2, 1 << 20);
    const json& edges = g.Required("edges");
    if (!edges.is_array()) {
      throw Error::ConfigInvalid("graph.edges", "expected an array");
    }
    for (size_t i = 0; i < edges.size(); ++i) {
      const json& e = edges[i];
      const std::string p = "graph.edges[" + std::to_string(i) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        throw Error::ConfigInvalid(p, "expected a pair of integers");
      }
      cfg.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    g.Finish();
    try {
      Graph::Build(cfg.n, cfg.edges);
    } catch (const Error& e) {
      throw Error::ConfigInvalid("graph.edges", e.what());
    }
  }

  {
    ObjectReader o = r.Child("objective");
    cfg.objective.kind =
        ParseObjectiveKind(o.String("kind"), o.Path("kind"));
    cfg.objective.d = o.Int("d", 1, 1 << 20);
    if (cfg.objective.kind == ObjectiveKind::kLogistic) {
      cfg.objective.m = static_cast<int>(o.Integer("m", 200));
      cfg.objective.lambda = o.Number("lambda", 0.001);
      cfg.objective.alpha = o.Number("alpha", 1.0);
      if (cfg.objective.m < 1) {
        throw Error::ConfigInvalid("objective.m", "must be >= 1");
      }
      if (!(cfg.objective.lambda >= 0.0)) {
        throw Error::ConfigInvalid("objective.lambda", "must be >= 0");
      }
      if (!(cfg.objective.alpha > 0.0)) {
        throw Error::ConfigInvalid("objective.alpha", "must be > 0");
      }
    }
    o.Finish();
  }
  const int d = cfg.objective.d;

  {
    ObjectReader c = r.Child("compressor");
    const CompressorKind kind =
        ParseCompressorKind(c.String("kind"), c.Path("kind"));
    switch (kind) {
      case CompressorKind::kIdentity:
        cfg.compressor = CompressorSpec::Identity();
        break;
      case CompressorKind::kTopK: {
        const int64_t k = c.Integer("k");
        if (k < 1 || k > d) {
          throw Error(ErrorCode::kSpecDimensionMismatch,
                      "compressor.k: need 1 <= k <= d = " + std::to_string(d));
        }
        cfg.compressor = CompressorSpec::TopK(static_cast<int>(k), d);
        break;
      }
      case CompressorKind::kBBit:
        cfg.compressor = CompressorSpec::BBit(c.Int("b", 1, 32), d);
        break;
      case CompressorKind::kNormSign:
        cfg.compressor = CompressorSpec::NormSign(d);
        break;
    }
    cfg.compressor.r = c.Number("r", cfg.compressor.r);
    cfg.compressor.phi = c.Number("phi", cfg.compressor.phi);
    c.Finish();
    cfg.compressor.Validate(d);
  }

  {
    ObjectReader nz = r.Child("noise");
    cfg.noise_x = ParseNoise(nz.Child("x"), "noise.x");
    const std::string second = pgtc ? "y" : "v";
    cfg.noise_second = ParseNoise(nz.Child(second), "noise." + second);
    nz.Finish();
  }

  {
    ObjectReader g = r.Child("gains");
    cfg.eta = g.Number("eta");
    cfg.gamma = g.Number("gamma");
    cfg.alpha_x = g.Number("alpha_x");
    if (pgtc) {
      cfg.alpha_y = g.Number("alpha_y");
    } else {
      cfg.omega = g.Number("omega");
    }
    g.Finish();
  }

  cfg.iterations = r.Integer("iterations");
  if (cfg.iterations < 1) {
    throw Error::ConfigInvalid("iterations", "must be >= 1");
  }
  cfg.seed = r.Unsigned("seed");
  cfg.outputs = r.String("outputs");
  if (cfg.outputs.empty()) {
    throw Error::ConfigInvalid("outputs", "must be a non-empty path");
  }

  if (r.Has("init")) {
    ObjectReader in = r.Child("init");
    cfg.init_low = in.Number("low", 0.0);
    cfg.init_high = in.Number("high", 1.0);
    in.Finish();
    if (!(cfg.init_low < cfg.init_high)) {
      throw Error::ConfigInvalid("init", "need low < high");
    }
  }

  if (r.Has("reference")) {
    ObjectReader ref = r.Child("reference");
    cfg.reference_iterations = ref.Integer("iterations");
    ref.Finish();
    if (*cfg.reference_iterations < 10 * cfg.iterations) {
      throw Error::ConfigInvalid(
          "reference.iterations",
          "must be at least 10x iterations (" +
              std::to_string(10 * cfg.iterations) + ")");
    }
  }

  if (r.Has("sweep")) {
    ObjectReader sw = r.Child("sweep");
    SweepSpec spec;
    spec.parameter =
        ParseSweepParameter(sw.String("parameter"), "sweep.parameter");
    const json& values = sw.Required("values");
    if (!values.is_array() || values.empty()) {
      throw Error::ConfigInvalid("sweep.values", "expected a non-empty array");
    }
    for (size_t i = 0; i < values.size(); ++i) {
      const std::string p = "sweep.values[" + std::to_string(i) + "]";
      if (!values[i].is_number()) {
        throw Error::ConfigInvalid(p, "expected a number");
      }
      const double v = values[i].get<double>();
      CheckSweepValue(spec.parameter, v, p);
      spec.values.push_back(v);
    }
    const int64_t repeats = sw.Integer("repeats", 1);
    if (repeats < 1 || repeats > 100000) {
      throw Error::ConfigInvalid("sweep.repeats", "must lie in [1, 100000]");
    }
    spec.repeats = static_cast<int>(repeats);
    sw.Finish();
    cfg.sweep = std::move(spec);
  }

  if (r.Has("privacy")) {
    ObjectReader pv = r.Child("privacy");
    cfg.privacy.box_radius = pv.Number("box_radius", 2.0);
    cfg.privacy.trials = static_cast<int>(pv.Integer("trials", 2000));
    cfg.privacy.split = pv.Number("split", 0.5);
    pv.Finish();
    if (!(cfg.privacy.box_radius > 0.0)) {
      throw Error::ConfigInvalid("privacy.box_radius", "must be > 0");
    }
    if (cfg.privacy.trials < 1) {
      throw Error::ConfigInvalid("privacy.trials", "must be >= 1");
    }
    if (!(cfg.privacy.split > 0.0 && cfg.privacy.split < 1.0)) {
      throw Error::ConfigInvalid("privacy.split", "must lie in (0, 1)");
    }
  }

  if (r.Has("validation")) {
    ObjectReader v = r.Child("validation");
    cfg.validation_trials = static_cast<int>(v.Integer("trials", 2000));
    v.Finish();
    if (cfg.validation_trials < 1000) {
      throw Error::ConfigInvalid("validation.trials", "must be >= 1000");
    }
  }

  r.Finish();

  // Gains and schedules are checked by the algorithm's own validator so the
  // runner and library agree on what is legal.
  std::visit([d](const auto& c) { c.Validate(d); }, ToAlgorithmConfig(cfg));
  return cfg;
}

json NoiseJson(const NoiseSchedule& ns) {
  return json{{"s", ns.s}, {"q", ns.q}, {"enabled", ns.enabled}};
}

json ConfigToJson(const RunConfig& cfg) {
  const bool pgtc = cfg.algorithm == Algorithm::kPgtc;
  json j;
  j["algorithm"] = std::string(AlgorithmName(cfg.algorithm));
  json edges = json::array();
  for (const auto& [a, b] : cfg.edges) edges.push_back(json::array({a, b}));
  j["graph"] = json{{"n", cfg.n}, {"edges", edges}};

  json obj{{"kind", std::string(ObjectiveKindName(cfg.objective.kind))},
           {"d", cfg.objective.d}};
  if (cfg.objective.kind == ObjectiveKind::kLogistic) {
    obj["m"] = cfg.objective.m;
    obj["lambda"] = cfg.objective.lambda;
    obj["alpha"] = cfg.objective.alpha;
  }
  j["objective"] = obj;

  json comp{{"kind", std::string(CompressorKindName(cfg.compressor.kind))},
            {"r", cfg.compressor.r},
            {"phi", cfg.compressor.phi}};
  if (cfg.compressor.kind == CompressorKind::kTopK) comp["k"] = cfg.compressor.k;
  if (cfg.compressor.kind == CompressorKind::kBBit) comp["b"] = cfg.compressor.b;
  j["compressor"] = comp;

  j["noise"] = json{{"x", NoiseJson(cfg.noise_x)},
                    {pgtc ? "y" : "v", NoiseJson(cfg.noise_second)}};
  json gains{{"eta", cfg.eta}, {"gamma", cfg.gamma}, {"alpha_x", cfg.alpha_x}};
  if (pgtc) {
    gains["alpha_y"] = cfg.alpha_y;
  } else {
    gains["omega"] = cfg.omega;
  }
  j["gains"] = gains;
  j["iterations"] = cfg.iterations;
  j["seed"] = cfg.seed;
  j["outputs"] = cfg.outputs;
  j["init"] = json{{"low", cfg.init_low}, {"high", cfg.init_high}};
  if (cfg.reference_iterations) {
    j["reference"] = json{{"iterations", *cfg.reference_iterations}};
  }
  if (cfg.sweep) {
    j["sweep"] = json{
        {"parameter", std::string(SweepParameterName(cfg.sweep->parameter))},
        {"values", cfg.sweep->values},
        {"repeats", cfg.sweep->repeats}};
  }
  j["privacy"] = json{{"box_radius", cfg.privacy.box_radius},
                      {"trials", cfg.privacy.trials},
                      {"split", cfg.privacy.split}};
  j["validation"] = json{{"trials", cfg.validation_trials}};
  return j;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create " + dir.string() + ": " + ec.message());
  }
}

// Stores NaN/inf as null; json cannot carry them.
json Finite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json ContractionJson(const ContractionReport& rep) {
  return json{{"empirical_ratio", Finite(rep.empirical_ratio)},
              {"bound", rep.bound},
              {"passes", rep.passes},
              {"r0", rep.r0},
              {"r0_ratio", Finite(rep.r0_ratio)},
              {"r0_bound", rep.r0_bound},
              {"r0_passes", rep.r0_passes},
              {"trials", rep.trials}};
}

void Gatekeep(const RunConfig& cfg, ContractionReport& rep) {
  rep = ValidateConfiguredCompressor(cfg, cfg.validation_trials);
  if (!rep.passes || !rep.r0_passes) {
    std::ostringstream why;
    why << "contraction check failed: ratio " << rep.empirical_ratio
        << " vs bound " << rep.bound << ", r0 ratio " << rep.r0_ratio
        << " vs " << rep.r0_bound;
    throw Error::ConfigInvalid("compressor", why.str());
  }
}

std::string FormatOrBlank(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

}  // namespace

std::string_view SweepParameterName(SweepParameter p) {
  switch (p) {
    case SweepParameter::kQ:
      return "q";
    case SweepParameter::kS:
      return "s";
    case SweepParameter::kEta:
      return "eta";
  }
  return "?";
}

RunConfig ParseRunConfig(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error::ConfigInvalid("$", std::string("malformed JSON: ") + e.what());
  }
  // A metadata document replays its embedded config after a hash check.
  if (root.is_object() && root.contains("config_hash") &&
      root.contains("config")) {
    RunConfig cfg = ParseConfigObject(root.at("config"));
    const json& h = root.at("config_hash");
    if (!h.is_string() || h.get<std::string>() != ConfigHash(cfg)) {
      throw Error::ConfigInvalid("config_hash",
                                 "does not match the embedded config");
    }
    return cfg;
  }
  return ParseConfigObject(root);
}

RunConfig LoadRunConfig(const fs::path& path) {
  return ParseRunConfig(ReadFile(path));
}

std::string CanonicalConfigJson(const RunConfig& cfg) {
  return ConfigToJson(cfg).dump(2) + "\n";
}

std::string ConfigHash(const RunConfig& cfg) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : CanonicalConfigJson(cfg)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

AlgorithmConfig ToAlgorithmConfig(const RunConfig& cfg) {
  if (cfg.algorithm == Algorithm::kPgtc) {
    PgtcConfig c;
    c.eta = cfg.eta;
    c.gamma = cfg.gamma;
    c.alpha_x = cfg.alpha_x;
    c.alpha_y = cfg.alpha_y;
    c.compressor = cfg.compressor;
    c.noise_x = cfg.noise_x;
    c.noise_y = cfg.noise_second;
    c.iterations = cfg.iterations;
    return c;
  }
  PpdcConfig c;
  c.eta = cfg.eta;
  c.gamma = cfg.gamma;
  c.omega = cfg.omega;
  c.alpha_x = cfg.alpha_x;
  c.compressor = cfg.compressor;
  c.noise_x = cfg.noise_x;
  c.noise_v = cfg.noise_second;
  c.iterations = cfg.iterations;
  return c;
}

Experiment BuildExperiment(const RunConfig& cfg) {
  StreamFactory rng(cfg.seed);
  Topology topo = Topology::FromGraph(Graph::Build(cfg.n, cfg.edges));
  std::vector<LocalObjective> objs = BuildObjectives(cfg.objective, cfg.n, rng);
  const int d = cfg.objective.d;
  Matrix x0(cfg.n, d);
  const double width = cfg.init_high - cfg.init_low;
  for (int i = 0; i < cfg.n; ++i) {
    Stream s = rng.Make(static_cast<uint64_t>(i), StreamTag::kInit, 0);
    for (int t = 0; t < d; ++t) x0(i, t) = cfg.init_low + width * s.Uniform();
  }
  return Experiment{std::move(topo), std::move(objs), std::move(x0),
                    ToAlgorithmConfig(cfg), rng};
}

fs::path ResolveOutputDir(const RunConfig& cfg,
                          const std::optional<fs::path>& override) {
  if (override) return *override;
  fs::path p(cfg.outputs);
  if (p.is_relative()) {
    if (const char* root = std::getenv("DPCOMPRESS_OUTPUT_ROOT");
        root != nullptr && *root != '\0') {
      return fs::path(root) / p;
    }
  }
  return p;
}

InvariantSummary CheckInvariants(const Trace& trace) {
  InvariantSummary s;
  std::optional<double> prev_r;
  for (size_t i = 0; i < trace.rows.size(); ++i) {
    const TraceRow& row = trace.rows[i];
    if (row.k != static_cast<int64_t>(i)) s.rows_contiguous = false;
    if (i > 0 && row.cum_bits < trace.rows[i - 1].cum_bits) {
      s.cum_bits_monotone = false;
    }
    // NaN compares false, so the negated form flags it.
    if (!(row.identity_residual <= s.identity_residual_max)) {
      s.identity_residual_max = row.identity_residual;
    }
    if (row.residual) {
      if (prev_r && *row.residual > *prev_r) s.residual_nonincreasing = false;
      prev_r = row.residual;
    }
  }
  return s;
}

ContractionReport ValidateConfiguredCompressor(const RunConfig& cfg,
                                               int trials) {
  Stream s = StreamFactory(cfg.seed, kGatekeeperRunId)
                 .Make(0, StreamTag::kCompress, 0);
  return ValidateContraction(cfg.compressor, cfg.objective.d, trials, s);
}

RunArtifacts RunSingle(const RunConfig& cfg, const fs::path& out_dir) {
  ContractionReport gate;
  Gatekeep(cfg, gate);

  Experiment e = BuildExperiment(cfg);
  const bool with_reference = cfg.reference_iterations.has_value();
  RunResult result = RunAlgorithm(e.algorithm, e.objectives, e.topology, e.x0,
                                  e.rng, with_reference);
  if (with_reference) {
    const Vector x_inf =
        ReferencePoint(e.algorithm, e.objectives, e.topology, e.x0, e.rng,
                       cfg.iterations, *cfg.reference_iterations);
    AttachResiduals(result.trace, x_inf);
    result.trace.iterates.clear();
  }

  RunArtifacts art;
  art.directory = out_dir;
  art.invariants = CheckInvariants(result.trace);
  art.final_accuracy = FinalAccuracy(result.trace);
  EnsureDir(out_dir);

  art.trace_csv = out_dir / "trace.csv";
  {
    std::ostringstream csv;
    WriteTraceCsv(result.trace, csv);
    WriteFile(art.trace_csv, csv.str());
  }
  art.config = out_dir / "config.json";
  WriteFile(art.config, CanonicalConfigJson(cfg));

  const Trace& tr = result.trace;
  json meta;
  meta["library_version"] = DPCOMPRESS_VERSION;
  meta["config_hash"] = ConfigHash(cfg);
  meta["seed"] = cfg.seed;
  meta["config"] = ConfigToJson(cfg);
  meta["algorithm"] = std::string(AlgorithmName(cfg.algorithm));
  meta["iterations"] = cfg.iterations;
  meta["reference_iterations"] =
      with_reference ? json(*cfg.reference_iterations) : json(nullptr);
  meta["messages_per_agent_per_round"] = tr.messages_per_agent_per_round;
  meta["bits_per_message"] = tr.bits_per_message;
  meta["total_bits"] = tr.rows.empty() ? 0 : tr.rows.back().cum_bits;
  meta["topology"] = json{{"rho_w", e.topology.spectrum.rho_w},
                          {"lambda_max_l", e.topology.spectrum.lambda_max_l},
                          {"lambda_min_pos_l",
                           e.topology.spectrum.lambda_min_pos_l}};
  meta["compressor_validation"] = ContractionJson(gate);
  meta["invariants"] = json{
      {"identity_residual_max", Finite(art.invariants.identity_residual_max)},
      {"identity_tolerance", art.invariants.identity_tolerance},
      {"rows_contiguous", art.invariants.rows_contiguous},
      {"cum_bits_monotone", art.invariants.cum_bits_monotone},
      {"residual_nonincreasing", art.invariants.residual_nonincreasing},
      {"passed", art.invariants.passed()}};
  meta["final_accuracy"] = Finite(art.final_accuracy);
  art.metadata = out_dir / "metadata.json";
  WriteFile(art.metadata, meta.dump(2) + "\n");

  if (with_reference) {
    ChartSeries by_k{std::string(AlgorithmName(cfg.algorithm)), {}, {}};
    ChartSeries by_bits = by_k;
    for (const TraceRow& row : tr.rows) {
      by_k.x.push_back(static_cast<double>(row.k));
      by_k.y.push_back(*row.residual);
      by_bits.x.push_back(static_cast<double>(row.cum_bits));
      by_bits.y.push_back(*row.residual);
    }
    const fs::path p1 = out_dir / "residual_vs_k.svg";
    WriteLineChartSvg(p1, std::span(&by_k, 1),
                      {"Residual", "iteration k", "R_k", true});
    const fs::path p2 = out_dir / "residual_vs_bits.svg";
    WriteLineChartSvg(p2, std::span(&by_bits, 1),
                      {"Residual vs transmitted bits", "cumulative bits",
                       "R_k", true});
    art.charts = {p1, p2};
  }
  return art;
}

uint64_t ChildSeed(uint64_t master_seed, uint64_t value_index,
                   uint64_t repeat_index) {
  return StableHash({master_seed, value_index, repeat_index});
}

RunConfig SweepCellConfig(const RunConfig& cfg, double value, uint64_t seed) {
  RunConfig c = cfg;
  if (cfg.sweep) {
    switch (cfg.sweep->parameter) {
      case SweepParameter::kQ:
        c.noise_x.q = value;
        c.noise_second.q = value;
        break;
      case SweepParameter::kS:
        c.noise_x.s = value;
        c.noise_second.s = value;
        break;
      case SweepParameter::kEta:
        c.eta = value;
        break;
    }
  }
  c.seed = seed;
  c.sweep.reset();
  c.reference_iterations.reset();
  return c;
}

double Median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

SweepResult RunSweep(const RunConfig& cfg, const fs::path& out_dir,
                     int threads) {
  if (!cfg.sweep) throw Error::ConfigInvalid("sweep", "missing sweep block");
  const SweepSpec& spec = *cfg.sweep;
  EnsureDir(out_dir);

  SweepResult res;
  for (size_t vi = 0; vi < spec.values.size(); ++vi) {
    for (int ri = 0; ri < spec.repeats; ++ri) {
      SweepCell cell;
      cell.value_index = vi;
      cell.repeat_index = static_cast<size_t>(ri);
      cell.value = spec.values[vi];
      cell.seed = ChildSeed(cfg.seed, vi, cell.repeat_index);
      res.cells.push_back(cell);
    }
  }

  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::min<int>(threads, static_cast<int>(res.cells.size()));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < res.cells.size();
         i = next.fetch_add(1)) {
      SweepCell& cell = res.cells[i];
      const fs::path dir = out_dir / "cells" /
                           ("v" + std::to_string(cell.value_index) + "_r" +
                            std::to_string(cell.repeat_index));
      try {
        const RunConfig c = SweepCellConfig(cfg, cell.value, cell.seed);
        RunArtifacts art = RunSingle(c, dir);
        cell.accuracy = art.final_accuracy;
        cell.invariants_passed = art.invariants.passed();
        if (!cell.invariants_passed) cell.error = "invariant check failed";
      } catch (const std::exception& ex) {
        cell.error = ex.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::ostringstream cells_csv;
  cells_csv << "value_index,repeat_index,value,seed,final_accuracy,"
               "invariants_passed,error\n";
  std::ostringstream failures_csv;
  failures_csv << "value,repeat_index,seed,error\n";
  for (const SweepCell& cell : res.cells) {
    const bool ok = cell.accuracy.has_value() && cell.invariants_passed;
    if (!ok) res.all_ok = false;
    std::string err = cell.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    cells_csv << cell.value_index << ',' << cell.repeat_index << ','
              << FormatDouble(cell.value) << ',' << cell.seed << ','
              << FormatOrBlank(cell.accuracy) << ','
              << (cell.invariants_passed ? 1 : 0) << ",\"" << err << "\"\n";
    if (!ok) {
      failures_csv << FormatDouble(cell.value) << ',' << cell.repeat_index
                   << ',' << cell.seed << ",\"" << err << "\"\n";
    }
  }
  WriteFile(out_dir / "cells.csv", cells_csv.str());
  WriteFile(out_dir / "failures.csv", failures_csv.str());

  std::ostringstream summary;
  summary << "value,median,min,max\n";
  ChartSeries median_series{"median final accuracy", {}, {}};
  for (size_t vi = 0; vi < spec.values.size(); ++vi) {
    std::vector<double> acc;
    for (const SweepCell& cell : res.cells) {
      if (cell.value_index == vi && cell.accuracy) acc.push_back(*cell.accuracy);
    }
    SweepRow row;
    row.value = spec.values[vi];
    row.completed = static_cast<int>(acc.size());
    row.median = Median(acc);
    row.min = acc.empty() ? std::numeric_limits<double>::quiet_NaN()
                          : *std::min_element(acc.begin(), acc.end());
    row.max = acc.empty() ? std::numeric_limits<double>::quiet_NaN()
                          : *std::max_element(acc.begin(), acc.end());
    summary << FormatDouble(row.value) << ',' << FormatDouble(row.median) << ','
            << FormatDouble(row.min) << ',' << FormatDouble(row.max) << '\n';
    median_series.x.push_back(row.value);
    median_series.y.push_back(row.median);
    res.summary.push_back(row);
  }
  res.summary_csv = out_dir / "summary.csv";
  WriteFile(res.summary_csv, summary.str());
  const std::string pname(SweepParameterName(spec.parameter));
  WriteLineChartSvg(out_dir / "summary.svg", std::span(&median_series, 1),
                    {"Final accuracy vs " + pname, pname,
                     "median ||grad f(xbar_K)||", true});

  json meta;
  meta["library_version"] = DPCOMPRESS_VERSION;
  meta["config_hash"] = ConfigHash(cfg);
  meta["seed"] = cfg.seed;
  meta["config"] = ConfigToJson(cfg);
  meta["child_seed"] = "StableHash(seed, value_index, repeat_index)";
  meta["cells"] = res.cells.size();
  meta["all_ok"] = res.all_ok;
  WriteFile(out_dir / "metadata.json", meta.dump(2) + "\n");
  return res;
}

namespace {

// log10 of sum_{k=0}^{K} q^{-k} = q^{-K} (1 - q^{K+1}) / (1 - q).
double Log10InverseGeometricSum(double q, int64_t K) {
  const double ln = static_cast<double>(K) * -std::log(q) +
                    std::log1p(-std::pow(q, static_cast<double>(K + 1))) -
                    std::log1p(-q);
  return ln / std::log(10.0);
}

void FillEpsilon(PrivacyRow& row, Algorithm algorithm, const PrivacyParams& p) {
  row.epsilon = Epsilon(algorithm, p);
  if (!row.epsilon) {
    row.note = "no privacy guarantee";
    return;
  }
  PrivacyParams single = p;
  single.K = 0;
  row.log10_epsilon =
      std::log10(*Epsilon(algorithm, single)) + Log10InverseGeometricSum(p.q, p.K);
}

}  // namespace

std::vector<PrivacyRow> PrivacyReport(const RunConfig& cfg,
                                      std::optional<double> target_epsilon) {
  Experiment e = BuildExperiment(cfg);
  Stream s = StreamFactory(cfg.seed, kPrivacyRunId)
                 .Make(0, StreamTag::kData, 0);
  const double M = EstimateGradBound(e.objectives, cfg.privacy.box_radius,
                                     cfg.privacy.trials, s);

  PrivacyParams p;
  p.d = cfg.objective.d;
  p.M = M;
  p.K = cfg.iterations;
  p.eta = cfg.eta;
  // One decay rate enters the bound; the smaller one is the conservative pick.
  p.q = std::min(cfg.noise_x.q, cfg.noise_second.q);
  p.s_x = cfg.noise_x.active() ? cfg.noise_x.s : 0.0;
  p.s_second = cfg.noise_second.active() ? cfg.noise_second.s : 0.0;
  if (cfg.algorithm == Algorithm::kPpdc) p.omega = cfg.omega;

  std::vector<PrivacyRow> rows;
  PrivacyRow base;
  base.algorithm = cfg.algorithm;
  base.K = p.K;
  base.q = p.q;
  base.s_x = p.s_x;
  base.s_second = p.s_second;
  base.M = M;
  base.box_radius = cfg.privacy.box_radius;
  base.label = "configured";
  FillEpsilon(base, cfg.algorithm, p);
  rows.push_back(base);

  if (target_epsilon) {
    const NoiseScales sc =
        ScalesForEpsilon(cfg.algorithm, *target_epsilon, p, cfg.privacy.split);
    PrivacyParams pt = p;
    pt.s_x = sc.s_x;
    pt.s_second = sc.s_second;
    PrivacyRow row = base;
    row.s_x = sc.s_x;
    row.s_second = sc.s_second;
    row.label = "target";
    row.note.clear();
    row.log10_epsilon.reset();
    if (std::isfinite(sc.s_x) && std::isfinite(sc.s_second)) {
      FillEpsilon(row, cfg.algorithm, pt);
    } else {
      row.epsilon.reset();
      row.note = "scales overflow double precision";
    }
    rows.push_back(row);
  }
  return rows;
}

void WritePrivacyTable(const std::vector<PrivacyRow>& rows,
                       std::ostream& out) {
  out << "row,algorithm,K,q,s_x,s_second,M,box_radius,epsilon,"
         "log10_epsilon\n";
  for (const PrivacyRow& r : rows) {
    out << r.label << ',' << AlgorithmName(r.algorithm) << ',' << r.K << ','
        << FormatDouble(r.q) << ',' << FormatDouble(r.s_x) << ','
        << FormatDouble(r.s_second) << ',' << FormatDouble(r.M) << ','
        << FormatDouble(r.box_radius) << ','
        << (r.note.empty() && r.epsilon ? FormatDouble(*r.epsilon) : r.note)
        << ',' << (r.log10_epsilon ? FormatDouble(*r.log10_epsilon) : "")
        << '\n';
  }
}

}  // namespace dpc
