#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "braidstab/orbits.hpp"
#include "braidstab/surface_map.hpp"

namespace braidstab {

class BraidResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strands of a closed braid in the mapping torus of `map`, sampled in torus
// coordinates: fiber[j][l] is strand j at time l / (samples). The product
// picture used for reading words is partial_t(fiber[j][t]).
struct BraidGeometry {
  SurfaceMap map;
  std::vector<std::vector<Point>> fiber;
  // Optional precomputed product-picture paths (same shape as fiber).
  std::vector<std::vector<Point>> product;
};

// Word letters: +-i for sigma_i^{+-1} (1 <= i < n) and +-n for tau^{+-1}.
class AnnularBraid {
 public:
  AnnularBraid() = default;
  AnnularBraid(int strands, std::vector<int> word);

  int strands() const { return n_; }
  const std::vector<int>& word() const { return word_; }
  // Slot s (0-based, increasing y from the cut) ends in slot permutation()[s].
  const std::vector<int>& permutation() const { return perm_; }
  // Net cut crossings per strand, indexed by starting slot.
  const std::vector<int>& strand_winding() const { return strand_winding_; }
  int total_winding() const;

  bool is_tau(int letter) const { return letter == n_ || letter == -n_; }
  AnnularBraid inverse() const;
  AnnularBraid operator*(const AnnularBraid& other) const;

  const std::shared_ptr<const BraidGeometry>& geometry() const { return geometry_; }
  void set_geometry(std::shared_ptr<const BraidGeometry> g) { geometry_ = std::move(g); }

  // Signed-index encoding: 0 = tau, -n = tau^{-1}, +-i = sigma_i^{+-1}.
  std::vector<int> encoded() const;
  static AnnularBraid decode(int strands, const std::vector<int>& letters);
  std::string to_string() const;
  // Inverse of to_string: tokens s<i>, s<i>^-1, t, t^-1 separated by spaces.
  static AnnularBraid parse(int strands, const std::string& text);

 private:
  int n_ = 0;
  std::vector<int> word_;
  std::vector<int> perm_;
  std::vector<int> strand_winding_;
  std::shared_ptr<const BraidGeometry> geometry_;
};

struct BraidInvariants {
  std::vector<int> cycle_type;                   // sorted cycle lengths
  std::vector<std::pair<int, int>> windings;     // sorted (cycle length, winding)
  std::vector<std::vector<long>> linking;        // canonical signed crossing matrix between cycles
  long exponent_sum = 0;                         // signed count of sigma letters
  int tau_exponent = 0;
  std::vector<std::string> burau_traces;         // tr(B^k), k = 1..n, reduced Burau at t = -1 of the disk braid

  bool operator==(const BraidInvariants&) const = default;
};

BraidInvariants invariants(const AnnularBraid& b);

enum class Isotopy { isotopic, not_isotopic, indeterminate };
const char* to_string(Isotopy i);

struct ConjugacySearch {
  int max_conjugators = 4000;
  int max_length = 8;
};

// Conjugacy of annular braids (closed braids in the mapping torus up to fiber-preserving isotopy).
Isotopy is_isotopic(const AnnularBraid& a, const AnnularBraid& b, const ConjugacySearch& s = {});
// Equality in the annular braid group.
bool same_element(const AnnularBraid& a, const AnnularBraid& b);

// Pinned-core embedding into the (n+1)-strand disk braid group (letters +-i, 1 <= i <= n).
std::vector<int> disk_word(const AnnularBraid& b);
const std::vector<int>& disk_letter(int strands, int letter);

// Generator sequence of a planar motion. paths[j][l] = (u, v): u is the
// reading coordinate (lifted y when cyclic), v the tie-break coordinate.
// A swap of adjacent slots p, p+1 gives +-(p+1); positive when the strand moving
// up has the larger v (or the smaller v if mover_greater is false). Cut
// crossings (cyclic only) give +-count.
struct MotionReading {
  std::vector<int> word;
  std::vector<int> initial_order;  // slot -> strand at the first sample
  std::vector<int> final_order;    // slot -> strand at the last sample
};
MotionReading read_motion(const std::vector<std::vector<Eigen::Vector2d>>& paths, bool cyclic, bool mover_greater,
                          double tolerance = 1e-9);

struct ExtractionSettings {
  int samples = 512;   // per unit time
  double tolerance = 1e-9;
};

AnnularBraid extract_braid(const OrbitSet& alpha, const SurfaceMap& map, const ExtractionSettings& s = {});
// Reads the word of strands given in torus coordinates.
AnnularBraid braid_from_geometry(std::shared_ptr<const BraidGeometry> g, double tolerance = 1e-9);

// f_H applied to a braid: strands q(t) become phi_t^{-1}(q(t)) in the torus of phi o phi_1^H.
AnnularBraid transport_braid(const AnnularBraid& b, const TimeHamiltonian& h, const FlowSettings& s = {},
                             int samples = 128);

}  // namespace braidstab
