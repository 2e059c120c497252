#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "braidstab/orbits.hpp"

namespace braidstab {

// Schema violations; the message names the offending JSON path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RotationSpec {
  // Quadratic irrational (a + b sqrt(n)) / c, or a continued fraction when terms is non-empty.
  long a = 0, b = 1, n = 2, c = 1;
  std::vector<long> terms;

  IrrationalRotation build() const;
};

struct StageSpec {
  std::string type;        // "kick", "twist" or "hamiltonian"
  std::string expression;  // generator, rho, or H
  int steps = 256;         // RK4 steps, hamiltonian stages only
};

struct MapSpec {
  std::vector<StageSpec> stages;
  std::optional<RotationSpec> theta_minus, theta_plus;
  double collar = 0.05;

  SurfaceMap build() const;
};

struct OrbitSpec {
  std::vector<int> periods{2};
  OrbitSearch search;
  std::vector<int> alpha_periods{2};  // alpha = every orbit found at these periods
  std::vector<int> alpha_indices;     // or a subset, indexing the found list
};

struct FamilySpec {
  std::string expression = "a";  // template in t, x, y and the parameter
  std::string parameter = "a";
  std::vector<double> amplitudes{0.0};
  double collar = 0.0;

  TimeHamiltonian build(double amplitude) const;
};

struct SweepSpec {
  int braid_samples = 512;
  int transport_samples = 128;
  int continuation_steps = 8;
  int conjugacy_budget = 4000;
  int conjugacy_length = 8;
  int entropy_iterations = 64;
  int isolation_budget = 20000;
  double safety_margin = 0.1;
  bool recheck = true;  // re-search unsettled samples on a doubled grid
  int workers = 0;      // 0: BRAIDSTAB_WORKERS or hardware concurrency
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  MapSpec map;
  OrbitSpec orbits;
  FamilySpec family;
  SweepSpec sweep;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  nlohmann::json to_json() const;
  // SHA-256 of the canonical JSON form, hex encoded.
  std::string hash() const;
};

std::string sha256_hex(const std::string& data);

}  // namespace braidstab
