#include <algorithm>
#include <cmath>

#include "braidstab/orbits.hpp"

namespace braidstab {

namespace {

double circular(double dy) { return dy - std::round(dy); }

double circular_distance(const Point& a, const Point& b) {
  return std::hypot(a.x() - b.x(), circular(a.y() - b.y()));
}

// Permutation p with b[p[i]] ~ a[i], if one exists.
std::optional<std::vector<int>> match_points(const std::vector<Point>& a, const std::vector<Point>& b, double tol) {
  if (a.size() != b.size()) return std::nullopt;
  std::vector<int> perm(a.size(), -1);
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && circular_distance(a[i], b[j]) < tol) {
        perm[i] = static_cast<int>(j);
        used[j] = true;
        break;
      }
    if (perm[i] < 0) return std::nullopt;
  }
  return perm;
}

constexpr double gl_nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                0.9061798459386640};
constexpr double gl_weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                  0.2369268850561891};

// int_{phi(c)} x dy - int_c x dy along the straight lifted segment c from p to q.
double segment_flux(const SurfaceMap& map, const Point& p, const Point& q) {
  const Point d = q - p;
  const int panels = std::max(2, static_cast<int>(std::ceil(d.norm() / 0.01)));
  double image = 0.0;
  for (int k = 0; k < panels; ++k) {
    for (int g = 0; g < 5; ++g) {
      double u = (k + 0.5 + 0.5 * gl_nodes[g]) / panels;
      Mat2 j;
      Point c = map.apply(Point(p + u * d), j);
      image += 0.5 * gl_weights[g] / panels * c.x() * (j * d).y();
    }
  }
  return image - 0.5 * (p.x() + q.x()) * d.y();
}

Point nearest_lift(const Point& from, const Point& to) {
  return {to.x(), from.y() + circular(to.y() - from.y())};
}

}  // namespace

OrbitSet::OrbitSet(std::vector<OrbitSetEntry> entries) {
  for (auto& e : entries) {
    if (e.multiplicity < 1) throw std::invalid_argument("orbit multiplicity must be positive");
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const OrbitSetEntry& q) { return same_orbit(q.orbit, e.orbit); });
    if (it != entries_.end()) it->multiplicity += e.multiplicity;
    else entries_.push_back(std::move(e));
  }
}

int OrbitSet::winding() const {
  int w = 0;
  for (const auto& e : entries_) w += e.multiplicity * e.orbit.winding;
  return w;
}

bool OrbitSet::simple() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const OrbitSetEntry& e) { return e.multiplicity == 1; });
}

bool OrbitSet::nondegenerate() const {
  for (const auto& e : entries_) {
    if (!e.orbit.nondegenerate) return false;
    if (e.orbit.cls.kind == OrbitKind::elliptic)
      for (int j = 1; j <= e.multiplicity; ++j) {
        double v = j * e.orbit.cls.rotation_number;
        if (std::abs(v - std::round(v)) < 1e-9) return false;
      }
  }
  return true;
}

std::vector<Point> OrbitSet::points() const {
  std::vector<Point> out;
  for (const auto& e : entries_)
    for (int c = 0; c < e.multiplicity; ++c) out.insert(out.end(), e.orbit.points.begin(), e.orbit.points.end());
  return out;
}

std::vector<int> OrbitSet::permutation() const {
  std::vector<int> perm;
  int base = 0;
  for (const auto& e : entries_)
    for (int c = 0; c < e.multiplicity; ++c) {
      for (int i = 0; i < e.orbit.period; ++i) perm.push_back(base + (i + 1) % e.orbit.period);
      base += e.orbit.period;
    }
  return perm;
}

OrbitSet OrbitSet::disjoint_union(const OrbitSet& other) const {
  auto all = entries_;
  all.insert(all.end(), other.entries_.begin(), other.entries_.end());
  return OrbitSet(std::move(all));
}

int degree(const OrbitSet& alpha) {
  int d = 0;
  for (const auto& e : alpha.entries()) d += e.multiplicity * e.orbit.period;
  return d;
}

ContinuationTrace ContinuationTrace::concatenated(const ContinuationTrace& next) const {
  if (samples.empty()) return next;
  if (next.samples.empty()) return *this;
  auto perm = match_points(samples.back(), next.samples.front(), 1e-6);
  if (!perm) throw ClassError("traces do not meet: end points differ from the next start points");
  ContinuationTrace out = *this;
  double offset = parameters.back() - next.parameters.front();
  for (std::size_t j = 1; j < next.samples.size(); ++j) {
    std::vector<Point> tuple;
    for (int i : *perm) tuple.push_back(next.samples[j][i]);
    out.samples.push_back(std::move(tuple));
    out.parameters.push_back(next.parameters[j] + offset);
  }
  out.swept_flux += next.swept_flux;
  out.map_variation += next.map_variation;
  out.flux += next.flux;
  if (!next.actions.empty()) out.actions.insert(out.actions.end(), next.actions.begin() + 1, next.actions.end());
  out.fold = fold || next.fold;
  return out;
}

ContinuationTrace ContinuationTrace::reversed() const {
  ContinuationTrace out = *this;
  std::reverse(out.samples.begin(), out.samples.end());
  std::reverse(out.actions.begin(), out.actions.end());
  for (std::size_t j = 0; j < parameters.size(); ++j) out.parameters[j] = parameters[parameters.size() - 1 - j];
  out.swept_flux = -swept_flux;
  out.map_variation = -map_variation;
  out.flux = -flux;
  return out;
}

ContinuationTrace connecting_trace(const std::vector<Point>& from, const std::vector<Point>& to, int segments) {
  if (from.size() != to.size()) throw ClassError("connecting trace needs equally many points at both ends");
  if (segments < 1) throw std::invalid_argument("segments must be positive");
  ContinuationTrace t;
  for (int j = 0; j <= segments; ++j) {
    double u = static_cast<double>(j) / segments;
    std::vector<Point> tuple;
    for (std::size_t i = 0; i < from.size(); ++i) {
      Point target = nearest_lift(from[i], to[i]);
      tuple.push_back(from[i] + u * (target - from[i]));
    }
    t.parameters.push_back(u);
    t.samples.push_back(std::move(tuple));
  }
  return t;
}

ContinuationTrace connecting_trace(const OrbitSet& beta, const OrbitSet& alpha, int segments) {
  auto sorted = [](std::vector<Point> v) {
    std::sort(v.begin(), v.end(), [](const Point& a, const Point& b) {
      return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    return v;
  };
  return connecting_trace(sorted(beta.points()), sorted(alpha.points()), segments);
}

double trace_flux(const SurfaceMap& map, const ContinuationTrace& trace) {
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < trace.samples.size(); ++j)
    for (std::size_t i = 0; i < trace.samples[j].size(); ++i) {
      const Point& p = trace.samples[j][i];
      total += segment_flux(map, p, nearest_lift(p, trace.samples[j + 1][i]));
    }
  return total;
}

double action_difference(const SurfaceMap& map, const OrbitSet& alpha, const OrbitSet& beta,
                         const ContinuationTrace& trace) {
  if (degree(alpha) != degree(beta) || alpha.winding() != beta.winding())
    throw ClassError("orbit sets lie in different classes (degree " + std::to_string(degree(alpha)) + "/" +
                     std::to_string(degree(beta)) + ", winding " + std::to_string(alpha.winding()) + "/" +
                     std::to_string(beta.winding()) + ")");
  if (trace.samples.empty() || !match_points(beta.points(), trace.samples.front(), 1e-6) ||
      !match_points(alpha.points(), trace.samples.back(), 1e-6))
    throw ClassError("trace endpoints do not match the orbit sets");
  return trace_flux(map, trace);
}

double action_difference(const SurfaceMap& map, const OrbitSet& alpha, const OrbitSet& beta) {
  return action_difference(map, alpha, beta, connecting_trace(beta, alpha));
}

double primitive_action(const SurfaceMap& map, const OrbitSet& alpha) {
  double a = 0.0;
  for (const auto& p : alpha.points()) a += map.primitive(p);
  return a;
}

ContinuationTrace continue_orbit(const PeriodicOrbit& orbit, const Homotopy& family, double s0, double s1, int steps,
                                 double step_bound) {
  if (steps < 1) throw std::invalid_argument("continuation needs at least one step");
  ContinuationTrace t;
  OrbitSearch search;
  SurfaceMap prev_map = family(s0);
  std::vector<Point> prev = orbit.points;
  double a0 = 0.0;
  for (const auto& p : prev) a0 += prev_map.primitive(p);
  t.parameters.push_back(s0);
  t.samples.push_back(prev);
  t.actions.push_back(a0);
  Point last_x1 = orbit.points[0], velocity = Point::Zero();
  for (int j = 1; j <= steps; ++j) {
    double s = s0 + (s1 - s0) * j / steps;
    SurfaceMap map = family(s);
    auto r = refine_newton(map, orbit.period, Point(last_x1 + velocity), orbit.winding, search);
    if (!r.orbit) {
      t.fold = true;
      t.note = "corrector failed at s = " + std::to_string(s) + ": " + r.failure;
      break;
    }
    std::vector<Point> cur = r.orbit->points;
    double jump = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) jump = std::max(jump, circular_distance(cur[i], prev[i]));
    if (jump > step_bound) {
      t.fold = true;
      t.note = "orbit jumped by " + std::to_string(jump) + " at s = " + std::to_string(s);
      break;
    }
    double swept = 0.0, variation = 0.0, action = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      swept += segment_flux(map, prev[i], nearest_lift(prev[i], cur[i]));
      variation += map.primitive(prev[i]) - prev_map.primitive(prev[i]);
      action += map.primitive(cur[i]);
    }
    t.swept_flux += swept;
    t.map_variation += variation;
    t.parameters.push_back(s);
    t.samples.push_back(cur);
    t.actions.push_back(action);
    velocity = nearest_lift(last_x1, cur[0]) - last_x1;
    last_x1 = cur[0];
    prev = std::move(cur);
    prev_map = std::move(map);
    if (!r.orbit->nondegenerate) {
      t.fold = true;
      t.note = "orbit degenerate at s = " + std::to_string(s);
      break;
    }
  }
  t.flux = t.swept_flux + t.map_variation;
  return t;
}

namespace {

struct StrandIntegrals {
  double h = 0.0;
  double xdy = 0.0;
  Point end;
};

StrandIntegrals strand_integrals(const TimeHamiltonian& h, const Point& z, const FlowSettings& s) {
  s.validate();
  using State = Eigen::Vector4d;
  auto rhs = [&](double t, const State& u) {
    Point p(u(0), u(1));
    Eigen::Vector2d g = h.gradient(t, p);
    return State(g.y(), -g.x(), h.value(t, p), -p.x() * g.x());
  };
  State u(z.x(), z.y(), 0.0, 0.0);
  double dt = 1.0 / s.steps;
  for (int n = 0; n < s.steps; ++n) {
    double t = n * dt;
    State k1 = rhs(t, u), k2 = rhs(t + dt / 2, u + dt / 2 * k1), k3 = rhs(t + dt / 2, u + dt / 2 * k2),
          k4 = rhs(t + dt, u + dt * k3);
    u += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (u(0) < -s.domain_tolerance || u(0) > 1.0 + s.domain_tolerance)
      throw FlowError("strand left the annulus at t = " + std::to_string(t + dt));
  }
  return {u(2), u(3), Point(u(0), u(1))};
}

}  // namespace

double hamiltonian_strand_integral(const TimeHamiltonian& h, const std::vector<Point>& points, const FlowSettings& s) {
  double total = 0.0;
  for (const auto& p : points) total += strand_integrals(h, p, s).h;
  return total;
}

double pulled_back_strand_primitive(const SurfaceMap& base, const TimeHamiltonian& h, const std::vector<Point>& points,
                                    const FlowSettings& s) {
  double total = 0.0;
  for (const auto& p : points) {
    auto si = strand_integrals(h, p, s);
    total += si.xdy + base.primitive(si.end);
  }
  return total;
}

double action_difference_cobordism(const OrbitSet& alpha_plus, const OrbitSet& alpha_minus, double z_flux,
                                   const TimeHamiltonian& h_plus, const TimeHamiltonian& h_minus,
                                   const FlowSettings& s) {
  if (degree(alpha_plus) != degree(alpha_minus))
    throw ClassError("cobordism ends have different degrees");
  return z_flux + hamiltonian_strand_integral(h_plus, alpha_plus.points(), s) -
         hamiltonian_strand_integral(h_minus, alpha_minus.points(), s);
}

std::vector<OrbitSet> enumerate_orbit_sets(const std::vector<PeriodicOrbit>& orbits, int degree, int winding,
                                           int budget, bool* exhausted) {
  std::vector<OrbitSet> out;
  std::vector<int> mult(orbits.size(), 0);
  int visited = 0;
  bool hit = false;
  auto rec = [&](auto&& self, std::size_t idx, int d_left, int w_left) -> void {
    if (hit) return;
    if (++visited > budget) {
      hit = true;
      return;
    }
    if (d_left == 0) {
      if (w_left != 0) return;
      std::vector<OrbitSetEntry> entries;
      for (std::size_t i = 0; i < orbits.size(); ++i)
        if (mult[i] > 0) entries.push_back({orbits[i], mult[i]});
      out.emplace_back(std::move(entries));
      return;
    }
    if (idx == orbits.size()) return;
    const auto& o = orbits[idx];
    for (int m = d_left / o.period; m >= 0; --m) {
      mult[idx] = m;
      self(self, idx + 1, d_left - m * o.period, w_left - m * o.winding);
    }
    mult[idx] = 0;
  };
  rec(rec, 0, degree, winding);
  if (exhausted) *exhausted = hit;
  return out;
}

IsolationResult isolation_gap(const SurfaceMap& map, const OrbitSet& alpha, const IsolationSearch& s) {
  IsolationResult r;
  const int d = degree(alpha);
  std::vector<PeriodicOrbit> orbits;
  for (int k = 1; k <= d; ++k)
    for (auto& o : find_orbits(map, k, s.search)) {
      if (!o.nondegenerate)
        throw GapUndefinedError("degenerate orbit of period " + std::to_string(k) + " near (" +
                                std::to_string(o.points[0].x()) + ", " + std::to_string(o.points[0].y()) + ")");
      orbits.push_back(std::move(o));
    }
  for (const auto& e : alpha.entries())
    if (std::none_of(orbits.begin(), orbits.end(), [&](const PeriodicOrbit& o) { return same_orbit(o, e.orbit); }))
      orbits.push_back(e.orbit);
  r.orbits_found = static_cast<int>(orbits.size());
  bool exhausted = false;
  auto sets = enumerate_orbit_sets(orbits, d, alpha.winding(), s.enumeration_budget, &exhausted);
  r.low_confidence = exhausted;
  auto alpha_points = alpha.points();
  for (const auto& beta : sets) {
    if (match_points(alpha_points, beta.points(), 1e-6)) continue;
    ++r.competitors;
    double a = std::abs(action_difference(map, alpha, beta));
    if (a > 1e-10) r.smallest_gap = std::min(r.smallest_gap, a);
  }
  if (std::isfinite(r.smallest_gap)) {
    r.epsilon = (1.0 - s.safety_margin) * r.smallest_gap;
    r.delta = r.epsilon / d;
  }
  return r;
}

}  // namespace braidstab

namespace braidstab {

OrbitSetContinuation continue_orbit_set(const SurfaceMap& base, const OrbitSet& alpha, const TimeHamiltonian& h,
                                        int steps) {
  OrbitSetContinuation out;
  auto family = [&](double s) { return flow_time_1(base, h.scaled(s)); };
  const SurfaceMap end = family(1.0);
  std::vector<OrbitSetEntry> entries;
  for (const auto& e : alpha.entries()) {
    auto trace = continue_orbit(e.orbit, family, 0.0, 1.0, steps);
    out.traces.push_back(trace);
    if (trace.fold) {
      out.note = trace.note;
      return out;
    }
    auto orbit = make_orbit(end, trace.samples.back()[0], e.orbit.period, e.orbit.winding);
    orbit.cls = classify(end, orbit);
    entries.push_back({orbit, e.multiplicity});
  }
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j)
      if (same_orbit(entries[i].orbit, entries[j].orbit)) {
        out.note = "continued orbits merged";
        return out;
      }
  out.result = OrbitSet(std::move(entries));
  return out;
}

}  // namespace braidstab
