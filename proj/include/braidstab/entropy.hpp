#pragma once

#include <optional>
#include <string>
#include <vector>

#include "braidstab/braid.hpp"
#include "braidstab/orbits.hpp"

namespace braidstab {

// Braid on `strands` punctures of the disk; letters +-i are sigma_i^{+-1}.
struct DiskBraid {
  int strands = 1;
  std::vector<int> word;
};

enum class EntropyMethod { dynnikov_growth, burau_radius };
const char* to_string(EntropyMethod m);
EntropyMethod entropy_method(const std::string& name);

struct EntropyEstimate {
  double value = 0.0;
  EntropyMethod method = EntropyMethod::dynnikov_growth;
  int iterations = 0;
  // dynnikov_growth: log(N_k / N_{k-1}) per iteration, N = crossing count of the image curve system.
  std::vector<double> trace;
  // estimates[k] = min of trace[k..]: the smallest exponent seen from iteration k
  // on. Nondecreasing in k and ends at the last exponent, which is the value.
  std::vector<double> estimates;
  // The curve system came back to an earlier state, so the braid acts periodically on it.
  bool periodic = false;
};

// Dynnikov growth uses exact integer coordinates (machine words, then big
// integers on overflow); Burau radius is the log spectral radius of the
// reduced Burau matrix at t = -1, clamped at 0.
EntropyEstimate braid_entropy(const DiskBraid& b, EntropyMethod method = EntropyMethod::dynnikov_growth,
                              int iterations = 64);
// Through the pinned-core disk embedding.
EntropyEstimate braid_entropy(const AnnularBraid& b, EntropyMethod method = EntropyMethod::dynnikov_growth,
                              int iterations = 64);

struct SemicontinuitySettings {
  int iterations = 64;
  int continuation_steps = 8;
  ConjugacySearch search;
};

struct SemicontinuitySample {
  double amplitude = 0.0;
  double hofer = 0.0;
  bool orbit_lost = false;
  std::string note;
  std::optional<AnnularBraid> braid;  // zeta' from the orbits of phi_H
  Isotopy isotopic = Isotopy::indeterminate;
  double entropy = 0.0;
  double difference = 0.0;            // |entropy(zeta') - entropy(zeta)|
  double reestimate_gap = 0.0;        // |estimate at 2x iterations - estimate|
};

struct SemicontinuityReport {
  AnnularBraid braid;  // zeta(alpha)
  double entropy = 0.0;
  bool positive_entropy = false;  // precondition flag; the run proceeds either way
  std::vector<SemicontinuitySample> samples;
};

// H_a = a * profile for each amplitude a; profile may use t, x, y.
SemicontinuityReport entropy_semicontinuity_run(const SurfaceMap& map, const OrbitSet& alpha,
                                                const TimeHamiltonian& profile, const std::vector<double>& amplitudes,
                                                const SemicontinuitySettings& s = {});

}  // namespace braidstab
