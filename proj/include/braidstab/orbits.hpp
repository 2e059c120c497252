#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "braidstab/surface_map.hpp"

namespace braidstab {

class OrbitDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ClassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OrbitKind { elliptic, positive_hyperbolic, negative_hyperbolic, degenerate };

const char* to_string(OrbitKind k);

struct OrbitClass {
  OrbitKind kind = OrbitKind::degenerate;
  // Elliptic: lift of the rotation number w.r.t. the constant framing d/dy
  // (only the fractional part is known when classified from the monodromy alone).
  double rotation_number = std::numeric_limits<double>::quiet_NaN();
  // Hyperbolic: winding of the eigenvector in half turns (even iff positive hyperbolic).
  int eigenvector_winding = 0;
  bool lifted = false;
};

struct PeriodicOrbit {
  std::vector<Point> points;  // x_1..x_k with y in [0, 1), x_{i+1} = phi(x_i)
  int period = 1;
  int winding = 0;            // net y-translation of phi^k on the lift
  double residual = 0.0;
  Mat2 monodromy = Mat2::Identity();  // d(phi^k) at x_1
  double condition = 0.0;             // condition number of 1 - d(phi^k)
  bool nondegenerate = false;
  OrbitClass cls;

  // Cyclic re-indexing so that point `shift` becomes x_1 (monodromy recomputed by the caller).
  PeriodicOrbit rotated(int shift, const SurfaceMap& map) const;
};

struct OrbitSearch {
  int grid_x = 40;
  int grid_y = 40;
  double x_min = 0.0;
  double x_max = 1.0;
  double seed_threshold = 0.15;  // max |phi^k(p) - p - (0,w)| for a grid seed
  double tolerance = 1e-10;
  double dedup_tolerance = 1e-6;
  int max_iterations = 50;
  int max_orbits = 256;
  int workers = 1;
};

struct RefineResult {
  std::optional<PeriodicOrbit> orbit;
  std::string failure;
  int iterations = 0;
};

// Damped Newton on phi^k(p) - p - (0, w) with Armijo backtracking on |F|^2.
RefineResult refine_newton(const SurfaceMap& map, int k, const Point& seed, const OrbitSearch& s = {});
RefineResult refine_newton(const SurfaceMap& map, int k, const Point& seed, int winding, const OrbitSearch& s);

// Fills residual, monodromy, condition and the nondegeneracy flag from x_1.
PeriodicOrbit make_orbit(const SurfaceMap& map, const Point& x1, int k, int winding);

std::vector<PeriodicOrbit> find_orbits(const SurfaceMap& map, int k, const OrbitSearch& s = {});

// Minimal period of p under phi (up to max_period), or 0.
int minimal_period(const SurfaceMap& map, const Point& p, int max_period, double tol = 1e-7);

// Classification from the monodromy alone (rotation number known mod 1).
OrbitClass classify(const PeriodicOrbit& orbit);
// Full classification with lifts tracked along the suspension isotopy of the map.
OrbitClass classify(const SurfaceMap& map, const PeriodicOrbit& orbit);

bool same_orbit(const PeriodicOrbit& a, const PeriodicOrbit& b, double tol = 1e-6);

struct OrbitSetEntry {
  PeriodicOrbit orbit;
  int multiplicity = 1;
};

class OrbitSet {
 public:
  OrbitSet() = default;
  explicit OrbitSet(std::vector<OrbitSetEntry> entries);

  const std::vector<OrbitSetEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int winding() const;
  bool simple() const;
  // Each orbit and its covers up to the multiplicity are nondegenerate.
  bool nondegenerate() const;
  // Points of the set, each orbit repeated by its multiplicity.
  std::vector<Point> points() const;
  // Permutation induced by phi on points() (strand i goes to perm[i]).
  std::vector<int> permutation() const;

  OrbitSet disjoint_union(const OrbitSet& other) const;

 private:
  std::vector<OrbitSetEntry> entries_;
};

int degree(const OrbitSet& alpha);

// A family of point tuples joining one orbit set to another. For a fixed map
// the tuples are arbitrary points along straight lifted paths; for a
// continuation they are the orbits of phi_s at each parameter.
struct ContinuationTrace {
  std::vector<double> parameters;
  std::vector<std::vector<Point>> samples;  // samples[j][i]: strand i at parameter j
  double swept_flux = 0.0;     // integral of omega over the fiber strips swept between samples
  double map_variation = 0.0;  // change of the map primitive along the trace
  double flux = 0.0;           // swept_flux + map_variation
  std::vector<double> actions; // primitive action of each sampled orbit
  bool fold = false;
  std::string note;

  ContinuationTrace concatenated(const ContinuationTrace& next) const;
  ContinuationTrace reversed() const;
};

using Homotopy = std::function<SurfaceMap(double)>;

ContinuationTrace continue_orbit(const PeriodicOrbit& orbit, const Homotopy& family, double s0, double s1, int steps,
                                 double step_bound = 0.05);

// Straight lifted paths from `from` points to `to` points (matched index-wise).
ContinuationTrace connecting_trace(const std::vector<Point>& from, const std::vector<Point>& to, int segments = 1);
// Matches the points of beta to those of alpha in sorted order.
ContinuationTrace connecting_trace(const OrbitSet& beta, const OrbitSet& alpha, int segments = 1);

// Area of the 2-chain in the mapping torus spanned by a fixed-map trace:
// vertical strips over each path (where omega_phi vanishes) capped in the fiber
// by the cycle sum_i phi(c_i) - c_i; computed as the integral of x dy.
double trace_flux(const SurfaceMap& map, const ContinuationTrace& trace);

// A(alpha, beta) for orbit sets of one map joined by a trace from beta to alpha.
double action_difference(const SurfaceMap& map, const OrbitSet& alpha, const OrbitSet& beta,
                         const ContinuationTrace& trace);
double action_difference(const SurfaceMap& map, const OrbitSet& alpha, const OrbitSet& beta);

// Sum over the points of the map primitive (class-independent action up to a
// degree-dependent constant).
double primitive_action(const SurfaceMap& map, const OrbitSet& alpha);

// Integral of H dt along f_H^{-1} of the strands through `points` (orbit points of phi_H):
// sum_i int_0^1 H_t(phi_t(z_i)) dt.
double hamiltonian_strand_integral(const TimeHamiltonian& h, const std::vector<Point>& points,
                                   const FlowSettings& s = {});
// Integral of the mapping-torus primitive of omega_phi over the strands f_H^{-1}(points).
double pulled_back_strand_primitive(const SurfaceMap& base, const TimeHamiltonian& h, const std::vector<Point>& points,
                                    const FlowSettings& s = {});

// Cobordism action: z_flux + int_{f_{H+}^{-1}(alpha+)} H+ dt - int_{f_{H-}^{-1}(alpha-)} H- dt.
double action_difference_cobordism(const OrbitSet& alpha_plus, const OrbitSet& alpha_minus, double z_flux,
                                   const TimeHamiltonian& h_plus, const TimeHamiltonian& h_minus,
                                   const FlowSettings& s = {});

// Follows every orbit of alpha along s -> flow_time_1(base, s H), s in [0, 1].
struct OrbitSetContinuation {
  std::optional<OrbitSet> result;  // orbit set of flow_time_1(base, H) when every orbit survives
  std::vector<ContinuationTrace> traces;
  std::string note;                // first failure, if any
};
OrbitSetContinuation continue_orbit_set(const SurfaceMap& base, const OrbitSet& alpha, const TimeHamiltonian& h,
                                        int steps = 8);

struct IsolationResult {
  double epsilon = std::numeric_limits<double>::infinity();
  double delta = std::numeric_limits<double>::infinity();
  double smallest_gap = std::numeric_limits<double>::infinity();
  int competitors = 0;
  int orbits_found = 0;
  bool low_confidence = false;
};

struct IsolationSearch {
  OrbitSearch search;
  int enumeration_budget = 20000;
  double safety_margin = 0.1;
};

class GapUndefinedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Smallest positive |A(alpha, beta)| over orbit sets beta in the class of alpha,
// shrunk by the safety margin; delta = epsilon / degree.
IsolationResult isolation_gap(const SurfaceMap& map, const OrbitSet& alpha, const IsolationSearch& s = {});

// All orbit sets with the given degree and winding built from `orbits`.
std::vector<OrbitSet> enumerate_orbit_sets(const std::vector<PeriodicOrbit>& orbits, int degree, int winding,
                                           int budget, bool* exhausted = nullptr);

}  // namespace braidstab
