#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "braidstab/orbits.hpp"

namespace braidstab {

class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OrbitSymbol {
  OrbitKind kind = OrbitKind::elliptic;
  double theta = 0.0;  // lifted rotation number, elliptic only
  int r = 0;           // eigenvector winding in half turns, hyperbolic only

  static OrbitSymbol elliptic(double theta) { return {OrbitKind::elliptic, theta, 0}; }
  static OrbitSymbol positive_hyperbolic(int r = 0);
  static OrbitSymbol negative_hyperbolic(int r = 1);
  // From a classified orbit; throws DegeneracyError on degenerate orbits.
  static OrbitSymbol of(const PeriodicOrbit& orbit);
};

// Multiset of positive integers, sorted descending.
using Partition = std::vector<int>;

// Resonance threshold for k * theta near an integer.
inline constexpr double resonance_tolerance = 1e-9;

Partition positive_partition(const OrbitSymbol& s, int m);
Partition negative_partition(const OrbitSymbol& s, int m);

enum class Disjointness { disjoint, overlapping, not_applicable };
const char* to_string(Disjointness d);
// Whether p+(m) and p-(m) share no entry; only meaningful for elliptic m > 1.
Disjointness partitions_disjoint(const OrbitSymbol& s, int m);

int conley_zehnder(const OrbitSymbol& s, int k);

struct RelClassData {
  long c_tau = 0;
  long q_tau = 0;
  std::vector<long> cz_plus;
  std::vector<long> cz_minus;
  long euler = 0;
};

// ind(C) = -chi + 2 c + sum CZ+ - sum CZ-.
long fredholm_index(const RelClassData& d);
// I = c + Q + sum CZ+ - sum CZ-.
long ech_index(const RelClassData& d);

// CZ(a^k) for every entry a with multiplicity m and every k = 1..m.
std::vector<long> cz_terms(const std::vector<std::pair<OrbitSymbol, int>>& orbit_set);
// Canned relative data for classes of the annulus model with constant framing.
RelClassData trivial_class_data(const std::vector<std::pair<OrbitSymbol, int>>& alpha,
                                const std::vector<std::pair<OrbitSymbol, int>>& beta);

struct GluingCount {
  boost::multiprecision::cpp_int count;
  bool odd = false;
};
GluingCount gluing_count(const std::vector<std::pair<OrbitSymbol, int>>& orbit_set);
GluingCount gluing_count(const OrbitSet& alpha);

// CSV tables for the command line.
std::string partition_table(const std::vector<OrbitSymbol>& symbols, int max_m);
std::string cz_table(const std::vector<OrbitSymbol>& symbols, int max_k);

}  // namespace braidstab
