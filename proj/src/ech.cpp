#include "braidstab/ech.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace braidstab {

OrbitSymbol OrbitSymbol::positive_hyperbolic(int r) {
  if (r % 2 != 0) throw std::invalid_argument("positive hyperbolic orbits have even eigenvector winding");
  return {OrbitKind::positive_hyperbolic, 0.0, r};
}

OrbitSymbol OrbitSymbol::negative_hyperbolic(int r) {
  if (r % 2 == 0) throw std::invalid_argument("negative hyperbolic orbits have odd eigenvector winding");
  return {OrbitKind::negative_hyperbolic, 0.0, r};
}

OrbitSymbol OrbitSymbol::of(const PeriodicOrbit& orbit) {
  switch (orbit.cls.kind) {
    case OrbitKind::elliptic: return elliptic(orbit.cls.rotation_number);
    case OrbitKind::positive_hyperbolic: return positive_hyperbolic(orbit.cls.eigenvector_winding);
    case OrbitKind::negative_hyperbolic: return negative_hyperbolic(orbit.cls.eigenvector_winding);
    default: throw DegeneracyError("degenerate orbit has no orbit symbol");
  }
}

namespace {

void check_covers(const OrbitSymbol& s, int m) {
  if (m < 1) throw std::invalid_argument("multiplicity must be positive");
  if (s.kind == OrbitKind::degenerate) throw DegeneracyError("degenerate orbit");
  if (s.kind != OrbitKind::elliptic) return;
  for (int k = 1; k <= m; ++k) {
    double v = k * s.theta;
    if (std::abs(v - std::round(v)) < resonance_tolerance) {
      std::ostringstream os;
      os << "elliptic cover " << k << " is resonant (k theta = " << v << ")";
      throw DegeneracyError(os.str());
    }
  }
}

struct LatticePoint {
  long x, y;
};

// Cross product sign of (b - a) x (c - a).
long turn(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Horizontal displacements between consecutive lattice points of the hull of
// (i, height(i)), i = 0..m: upper hull when `upper`, lower hull otherwise.
Partition hull_partition(int m, bool upper, const std::function<long(int)>& height) {
  std::vector<LatticePoint> hull;
  for (int i = 0; i <= m; ++i) {
    LatticePoint p{i, height(i)};
    while (hull.size() >= 2) {
      long t = turn(hull[hull.size() - 2], hull.back(), p);
      if (upper ? t >= 0 : t <= 0) hull.pop_back();
      else break;
    }
    hull.push_back(p);
  }
  Partition out;
  for (std::size_t v = 0; v + 1 < hull.size(); ++v) {
    long dx = hull[v + 1].x - hull[v].x, dy = hull[v + 1].y - hull[v].y;
    long g = std::gcd(dx, std::abs(dy));
    for (long k = 0; k < g; ++k) out.push_back(static_cast<int>(dx / g));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

Partition fixed_partition(const OrbitSymbol& s, int m, bool positive) {
  check_covers(s, m);
  if (s.kind == OrbitKind::positive_hyperbolic) return Partition(m, 1);
  if (s.kind == OrbitKind::negative_hyperbolic) {
    Partition p(m / 2, 2);
    if (m % 2) p.push_back(1);
    return p;
  }
  double frac = s.theta - std::floor(s.theta);
  if (positive) return hull_partition(m, true, [&](int i) { return static_cast<long>(std::floor(i * frac)); });
  return hull_partition(m, false, [&](int i) { return static_cast<long>(std::ceil(i * frac)); });
}

}  // namespace

Partition positive_partition(const OrbitSymbol& s, int m) { return fixed_partition(s, m, true); }
Partition negative_partition(const OrbitSymbol& s, int m) { return fixed_partition(s, m, false); }

const char* to_string(Disjointness d) {
  switch (d) {
    case Disjointness::disjoint: return "disjoint";
    case Disjointness::overlapping: return "overlapping";
    default: return "not-applicable";
  }
}

Disjointness partitions_disjoint(const OrbitSymbol& s, int m) {
  if (s.kind != OrbitKind::elliptic) throw std::invalid_argument("partition disjointness is stated for elliptic orbits");
  auto plus = positive_partition(s, m), minus = negative_partition(s, m);
  if (m == 1) return Disjointness::not_applicable;
  for (int a : plus)
    if (std::find(minus.begin(), minus.end(), a) != minus.end()) return Disjointness::overlapping;
  return Disjointness::disjoint;
}

int conley_zehnder(const OrbitSymbol& s, int k) {
  check_covers(s, k);
  if (s.kind == OrbitKind::elliptic) return 2 * static_cast<int>(std::floor(k * s.theta)) + 1;
  return k * s.r;
}

long fredholm_index(const RelClassData& d) {
  long plus = std::accumulate(d.cz_plus.begin(), d.cz_plus.end(), 0L);
  long minus = std::accumulate(d.cz_minus.begin(), d.cz_minus.end(), 0L);
  return -d.euler + 2 * d.c_tau + plus - minus;
}

long ech_index(const RelClassData& d) {
  long plus = std::accumulate(d.cz_plus.begin(), d.cz_plus.end(), 0L);
  long minus = std::accumulate(d.cz_minus.begin(), d.cz_minus.end(), 0L);
  return d.c_tau + d.q_tau + plus - minus;
}

std::vector<long> cz_terms(const std::vector<std::pair<OrbitSymbol, int>>& orbit_set) {
  std::vector<long> out;
  for (const auto& [s, m] : orbit_set)
    for (int k = 1; k <= m; ++k) out.push_back(conley_zehnder(s, k));
  return out;
}

RelClassData trivial_class_data(const std::vector<std::pair<OrbitSymbol, int>>& alpha,
                                const std::vector<std::pair<OrbitSymbol, int>>& beta) {
  RelClassData d;
  d.cz_plus = cz_terms(alpha);
  d.cz_minus = cz_terms(beta);
  return d;
}

GluingCount gluing_count(const std::vector<std::pair<OrbitSymbol, int>>& orbit_set) {
  using boost::multiprecision::cpp_int;
  GluingCount g{1, false};
  for (const auto& [s, m] : orbit_set) {
    check_covers(s, 1);
    if (m < 1) throw std::invalid_argument("multiplicity must be positive");
    cpp_int factor = 1;
    if (s.kind == OrbitKind::elliptic) {
      factor = m == 1 ? 1 : 0;
    } else if (s.kind == OrbitKind::positive_hyperbolic) {
      for (int i = 2; i <= m; ++i) factor *= i;
    } else {
      int k = m / 2;
      for (int i = 2; i <= k; ++i) factor *= i;
      factor <<= k;
    }
    g.count *= factor;
  }
  g.odd = (g.count & 1) == 1;
  return g;
}

GluingCount gluing_count(const OrbitSet& alpha) {
  std::vector<std::pair<OrbitSymbol, int>> symbols;
  for (const auto& e : alpha.entries()) {
    if (!e.orbit.nondegenerate) throw DegeneracyError("gluing count needs nondegenerate orbits");
    symbols.emplace_back(OrbitSymbol::of(e.orbit), e.multiplicity);
  }
  return gluing_count(symbols);
}

namespace {

std::string describe(const OrbitSymbol& s) {
  std::ostringstream os;
  os << to_string(s.kind) << ',';
  if (s.kind == OrbitKind::elliptic) os << s.theta << ',';
  else os << ',' << s.r;
  return os.str();
}

std::string join(const Partition& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
  return os.str();
}

}  // namespace

std::string partition_table(const std::vector<OrbitSymbol>& symbols, int max_m) {
  std::ostringstream os;
  os << "kind,theta,r,m,positive,negative,disjoint\n";
  for (const auto& s : symbols)
    for (int m = 1; m <= max_m; ++m) {
      os << describe(s) << ',' << m << ',';
      try {
        os << join(positive_partition(s, m)) << ',' << join(negative_partition(s, m)) << ',';
        os << (s.kind == OrbitKind::elliptic ? to_string(partitions_disjoint(s, m)) : "not-applicable") << '\n';
      } catch (const DegeneracyError&) {
        os << "resonant,resonant,not-applicable\n";
      }
    }
  return os.str();
}

std::string cz_table(const std::vector<OrbitSymbol>& symbols, int max_k) {
  std::ostringstream os;
  os << "kind,theta,r,k,cz\n";
  for (const auto& s : symbols)
    for (int k = 1; k <= max_k; ++k) {
      os << describe(s) << ',' << k << ',';
      try {
        os << conley_zehnder(s, k) << '\n';
      } catch (const DegeneracyError&) {
        os << "resonant\n";
      }
    }
  return os.str();
}

}  // namespace braidstab
