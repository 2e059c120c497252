#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "braidstab/braid.hpp"
#include "braidstab/config.hpp"

namespace braidstab {

const char* tool_version();

enum class Verdict { stable, broken, indeterminate, orbit_lost };
const char* to_string(Verdict v);

struct SweepSample {
  double amplitude = 0.0;
  double hofer = 0.0;
  double hofer_prime = 0.0;
  bool below_threshold = false;  // hofer < delta
  Verdict verdict = Verdict::indeterminate;
  std::string source;            // how the matching orbit set was found
  int candidates = 0;            // simple nondegenerate orbit sets compared
  std::optional<AnnularBraid> transported;
  std::optional<AnnularBraid> braid;
  std::optional<OrbitSet> orbits;
  double entropy = 0.0;          // of braid; NaN when there is none
  std::string note;
};

struct RunManifest {
  std::string config_hash;
  nlohmann::json config;
  std::vector<PeriodicOrbit> orbits;  // every orbit found for the base map
  OrbitSet alpha;
  IsolationResult isolation;
  int degree = 0;
  AnnularBraid braid{1, {}};
  double entropy_base = 0.0;
  bool positive_entropy = false;
  std::vector<SweepSample> samples;

  nlohmann::json to_json() const;
  std::string csv() const;
};

// Base map, every orbit found at the configured periods, and the selected
// orbit set alpha (checked simple and nondegenerate).
struct BaseSetup {
  SurfaceMap map;
  std::vector<PeriodicOrbit> orbits;
  OrbitSet alpha;
};
BaseSetup prepare_base(const ExperimentConfig& cfg);

// Deterministic: results depend only on the config, never on the worker count.
RunManifest stability_sweep(const ExperimentConfig& cfg);

struct RunTiming {
  std::string started;   // UTC, ISO 8601
  std::string finished;
  double seconds = 0.0;
};

// config.json, manifest.json, sweep.csv, orbits/*.json, braids/*.json and
// timing.json (kept apart so the manifest stays byte-reproducible).
void write_run_directory(const std::string& dir, const ExperimentConfig& cfg, const RunManifest& m, const RunTiming& t);

}  // namespace braidstab
