#include "braidstab/entropy.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>

#include "braidstab/dynnikov.hpp"

namespace braidstab {

using BigInt = boost::multiprecision::cpp_int;

const char* to_string(EntropyMethod m) {
  return m == EntropyMethod::dynnikov_growth ? "dynnikov_growth" : "burau_radius";
}

EntropyMethod entropy_method(const std::string& name) {
  if (name == "dynnikov_growth") return EntropyMethod::dynnikov_growth;
  if (name == "burau_radius") return EntropyMethod::burau_radius;
  throw std::invalid_argument("unknown entropy method: " + name);
}

namespace {

double log_of(const BigInt& v) {
  if (v <= 0) return -std::numeric_limits<double>::infinity();
  auto bits = static_cast<long>(boost::multiprecision::msb(v));
  if (bits < 1000) return std::log(v.convert_to<double>());
  long shift = bits - 60;
  BigInt top = v >> shift;
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}
double log_of(long long v) { return std::log(static_cast<double>(v)); }

template <class T>
std::string state_key(const Dynnikov<T>& d) {
  std::ostringstream os;
  for (const auto& v : d.a()) os << v << ',';
  for (const auto& v : d.b()) os << v << ',';
  return os.str();
}

// Runs the growth iteration in T; returns false if a coordinate left the safe range.
template <class T>
bool growth(const DiskBraid& b, int iterations, EntropyEstimate& out, bool guard) {
  const double limit = 1e17;
  auto d = Dynnikov<T>::standard(b.strands);
  std::set<std::string> seen{state_key(d)};
  double prev = log_of(d.crossings());
  out.trace.clear();
  out.periodic = false;
  for (int k = 1; k <= iterations; ++k) {
    for (int l : b.word) d.apply(std::abs(l), l > 0 ? 1 : -1);
    if (guard) {
      for (const auto& v : d.a())
        if (std::abs(static_cast<double>(v)) > limit) return false;
      for (const auto& v : d.b())
        if (std::abs(static_cast<double>(v)) > limit) return false;
      if (static_cast<double>(d.crossings()) > limit) return false;
    }
    if (!out.periodic && !seen.insert(state_key(d)).second) out.periodic = true;
    double cur = log_of(d.crossings());
    out.trace.push_back(out.periodic ? 0.0 : cur - prev);
    prev = cur;
  }
  out.estimates = out.trace;
  for (int k = iterations - 2; k >= 0; --k) out.estimates[k] = std::min(out.estimates[k], out.estimates[k + 1]);
  out.value = std::max(0.0, out.estimates.back());
  return true;
}

// log of the spectral radius of the reduced Burau matrix at t = -1.
double burau_log_radius(const DiskBraid& b) {
  const int n = b.strands - 1;
  if (n < 2) return 0.0;
  double log_scale = 0.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (int l : b.word) {
    int i = std::abs(l) - 1;
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    double s = l > 0 ? 1.0 : -1.0;
    // Column i of the generator block at t = -1 (see the exact version in braid_words.cpp).
    if (i > 0) g(i - 1, i) = -s;
    if (i + 1 < n) g(i + 1, i) = s;
    m = m * g;
    double scale = m.cwiseAbs().maxCoeff();
    if (scale > 1e100) {
      m /= scale;
      log_scale += std::log(scale);
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  return std::log(es.eigenvalues().cwiseAbs().maxCoeff()) + log_scale;
}

}  // namespace

EntropyEstimate braid_entropy(const DiskBraid& b, EntropyMethod method, int iterations) {
  if (iterations < 1) throw std::invalid_argument("entropy needs at least one iteration");
  if (b.strands < 1) throw std::invalid_argument("braid needs at least one strand");
  for (int l : b.word)
    if (l == 0 || std::abs(l) >= b.strands) throw std::invalid_argument("disk letter out of range");
  EntropyEstimate e;
  e.method = method;
  e.iterations = iterations;
  if (method == EntropyMethod::burau_radius) {
    e.value = std::max(0.0, burau_log_radius(b));
    return e;
  }
  if (b.strands < 3) {
    // No curves to stretch: every 1- or 2-strand braid is periodic mod the centre.
    e.trace.assign(iterations, 0.0);
    e.estimates = e.trace;
    e.periodic = true;
    return e;
  }
  if (!growth<long long>(b, iterations, e, true)) growth<BigInt>(b, iterations, e, false);
  return e;
}

EntropyEstimate braid_entropy(const AnnularBraid& b, EntropyMethod method, int iterations) {
  return braid_entropy(DiskBraid{b.strands() + 1, disk_word(b)}, method, iterations);
}

SemicontinuityReport entropy_semicontinuity_run(const SurfaceMap& map, const OrbitSet& alpha,
                                                const TimeHamiltonian& profile, const std::vector<double>& amplitudes,
                                                const SemicontinuitySettings& s) {
  SemicontinuityReport report{extract_braid(alpha, map), 0.0, false, {}};
  report.entropy = braid_entropy(report.braid, EntropyMethod::dynnikov_growth, s.iterations).value;
  report.positive_entropy = report.entropy > 1e-3;
  for (double a : amplitudes) {
    SemicontinuitySample sample;
    sample.amplitude = a;
    TimeHamiltonian h = profile.scaled(a);
    sample.hofer = hofer_norm(h);
    auto cont = continue_orbit_set(map, alpha, h, s.continuation_steps);
    if (!cont.result) {
      sample.orbit_lost = true;
      sample.note = cont.note;
      report.samples.push_back(std::move(sample));
      continue;
    }
    try {
      auto moved = flow_time_1(map, h);
      AnnularBraid zeta = extract_braid(*cont.result, moved);
      AnnularBraid transported = transport_braid(report.braid, h);
      sample.isotopic = is_isotopic(transported, zeta, s.search);
      auto est = braid_entropy(zeta, EntropyMethod::dynnikov_growth, s.iterations);
      auto fine = braid_entropy(zeta, EntropyMethod::dynnikov_growth, 2 * s.iterations);
      sample.entropy = est.value;
      sample.difference = std::abs(est.value - report.entropy);
      sample.reestimate_gap = std::abs(fine.value - est.value);
      sample.braid = zeta;
    } catch (const std::exception& e) {
      sample.orbit_lost = true;
      sample.note = e.what();
    }
    report.samples.push_back(std::move(sample));
  }
  return report;
}

}  // namespace braidstab
