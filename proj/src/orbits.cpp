#include "braidstab/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "braidstab/parallel.hpp"

namespace braidstab {

namespace {

double circular(double dy) { return dy - std::round(dy); }

double circular_distance(const Point& a, const Point& b) {
  return std::hypot(a.x() - b.x(), circular(a.y() - b.y()));
}

Point normalized(const Point& p) { return {p.x(), wrap_unit(p.y())}; }

bool points_less(const Point& a, const Point& b) {
  return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
}

double condition_number(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m);
  double smin = svd.singularValues()(1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return svd.singularValues()(0) / smin;
}

}  // namespace

const char* to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::elliptic: return "elliptic";
    case OrbitKind::positive_hyperbolic: return "positive_hyperbolic";
    case OrbitKind::negative_hyperbolic: return "negative_hyperbolic";
    case OrbitKind::degenerate: return "degenerate";
  }
  return "?";
}

PeriodicOrbit make_orbit(const SurfaceMap& map, const Point& x1, int k, int winding) {
  PeriodicOrbit o;
  o.period = k;
  o.winding = winding;
  Point p = normalized(x1);
  Point q = p;
  Mat2 total = Mat2::Identity();
  for (int i = 0; i < k; ++i) {
    o.points.push_back(normalized(q));
    Mat2 j;
    q = map.apply(q, j);
    total = j * total;
  }
  o.residual = (q - p - Point(0.0, winding)).norm();
  o.monodromy = total;
  o.condition = condition_number(Mat2::Identity() - total);
  double tr = total.trace();
  o.nondegenerate = o.condition <= 1e12 && std::abs(tr - 2.0) >= 1e-6 && std::abs(tr + 2.0) >= 1e-6;
  o.cls = classify(o);
  return o;
}

PeriodicOrbit PeriodicOrbit::rotated(int shift, const SurfaceMap& map) const {
  shift = ((shift % period) + period) % period;
  PeriodicOrbit o = make_orbit(map, points[shift], period, winding);
  o.cls = cls;
  return o;
}

RefineResult refine_newton(const SurfaceMap& map, int k, const Point& seed, const OrbitSearch& s) {
  Point q;
  try {
    q = map.iterate(seed, k);
  } catch (const std::exception& e) {
    return {std::nullopt, std::string("seed left the domain: ") + e.what(), 0};
  }
  return refine_newton(map, k, seed, static_cast<int>(std::lround(q.y() - seed.y())), s);
}

RefineResult refine_newton(const SurfaceMap& map, int k, const Point& seed, int winding, const OrbitSearch& s) {
  if (k < 1) throw std::invalid_argument("period must be positive");
  RefineResult r;
  Point p = normalized(seed);
  const Point shift(0.0, winding);
  auto residual = [&](const Point& z, Mat2* jac) -> std::optional<Eigen::Vector2d> {
    if (z.x() < 0.0 || z.x() > 1.0) return std::nullopt;
    try {
      Mat2 j;
      Point q = map.iterate(z, k, j);
      if (jac) *jac = j;
      return Eigen::Vector2d(q - z - shift);
    } catch (const DomainError&) {
      return std::nullopt;
    } catch (const FlowError&) {
      return std::nullopt;
    }
  };
  Mat2 jac;
  auto f = residual(p, &jac);
  if (!f) return {std::nullopt, "seed left the domain", 0};
  for (r.iterations = 0; r.iterations < s.max_iterations; ++r.iterations) {
    double f2 = f->squaredNorm();
    if (std::sqrt(f2) < 1e-12) break;
    Mat2 a = jac - Mat2::Identity();
    Eigen::Vector2d step = a.completeOrthogonalDecomposition().solve(-*f);
    double slope = 2.0 * (a.transpose() * *f).dot(step);
    if (!(slope < 0.0) || step.norm() < 1e-16) break;
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      Point trial = p + t * step;
      Mat2 jt;
      auto ft = residual(trial, &jt);
      if (ft && ft->squaredNorm() <= f2 + 1e-4 * t * slope) {
        p = Point(trial.x(), trial.y());
        double w = std::floor(p.y());
        p.y() -= w;
        f = ft;
        jac = jt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  double res = f->norm();
  if (!(res < s.tolerance)) {
    r.failure = "no convergence: residual " + std::to_string(res);
    return r;
  }
  r.orbit = make_orbit(map, p, k, winding);
  return r;
}

int minimal_period(const SurfaceMap& map, const Point& p, int max_period, double tol) {
  Point q = p;
  for (int j = 1; j <= max_period; ++j) {
    q = map.apply(q);
    if (circular_distance(q, p) < tol) return j;
  }
  return 0;
}

bool same_orbit(const PeriodicOrbit& a, const PeriodicOrbit& b, double tol) {
  if (a.period != b.period || a.winding != b.winding) return false;
  for (int r = 0; r < a.period; ++r) {
    bool all = true;
    for (int i = 0; i < a.period && all; ++i)
      all = circular_distance(a.points[i], b.points[(i + r) % a.period]) < tol;
    if (all) return true;
  }
  return false;
}

OrbitClass classify(const PeriodicOrbit& orbit) {
  const Mat2& m = orbit.monodromy;
  if (std::abs(m.determinant() - 1.0) > 1e-6)
    throw OrbitDataError("monodromy is not symplectic (det = " + std::to_string(m.determinant()) + ")");
  OrbitClass c;
  double tr = m.trace();
  if (std::abs(tr - 2.0) < 1e-6 || std::abs(tr + 2.0) < 1e-6) {
    c.kind = OrbitKind::degenerate;
  } else if (std::abs(tr) < 2.0) {
    c.kind = OrbitKind::elliptic;
    double theta = std::acos(tr / 2.0) / (2.0 * std::numbers::pi);
    // det[e1, M e1] = m(1,0) fixes the sense of rotation.
    c.rotation_number = m(1, 0) > 0.0 ? theta : 1.0 - theta;
  } else {
    c.kind = tr > 0.0 ? OrbitKind::positive_hyperbolic : OrbitKind::negative_hyperbolic;
  }
  return c;
}

namespace {

// Linearised flow d(partial(s)) along one period of the orbit, sampled densely.
std::vector<Mat2> linearised_path(const SurfaceMap& map, const PeriodicOrbit& orbit, int per_lap) {
  std::vector<Mat2> path{Mat2::Identity()};
  Mat2 before = Mat2::Identity();
  for (int i = 0; i < orbit.period; ++i) {
    Mat2 j;
    for (int l = 1; l <= per_lap; ++l) {
      map.partial(static_cast<double>(l) / per_lap, orbit.points[i], j);
      path.push_back(j * before);
    }
    before = path.back();
  }
  return path;
}

double angle_step(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
}

// Total angle swept by path[l] * v; nullopt if the sampling is too coarse.
std::optional<double> swept_angle(const std::vector<Mat2>& path, const Eigen::Vector2d& v) {
  double total = 0.0;
  Eigen::Vector2d prev = v;
  for (std::size_t l = 1; l < path.size(); ++l) {
    Eigen::Vector2d cur = path[l] * v;
    double d = angle_step(prev, cur);
    if (std::abs(d) > std::numbers::pi / 4) return std::nullopt;
    total += d;
    prev = cur;
  }
  return total;
}

}  // namespace

OrbitClass classify(const SurfaceMap& map, const PeriodicOrbit& orbit) {
  OrbitClass c = classify(orbit);
  if (c.kind == OrbitKind::degenerate) return c;
  const int laps = 400;
  for (int per_lap = 32 * static_cast<int>(map.stages().size()); per_lap <= 8192; per_lap *= 2) {
    auto path = linearised_path(map, orbit, per_lap);
    if (c.kind == OrbitKind::elliptic) {
      double total = 0.0;
      Eigen::Vector2d v(1.0, 0.0);
      bool ok = true;
      for (int n = 0; n < laps && ok; ++n) {
        auto a = swept_angle(path, v);
        if (!a) ok = false;
        else total += *a;
        v = (orbit.monodromy * v).normalized();
      }
      if (!ok) continue;
      double mean = total / (2.0 * std::numbers::pi * laps);
      c.rotation_number += std::round(mean - c.rotation_number);
    } else {
      Eigen::EigenSolver<Mat2> es(orbit.monodromy);
      Eigen::Vector2d v = es.eigenvectors().col(0).real().normalized();
      auto a = swept_angle(path, v);
      if (!a) continue;
      c.eigenvector_winding = static_cast<int>(std::lround(*a / std::numbers::pi));
      bool even = c.eigenvector_winding % 2 == 0;
      if (even != (c.kind == OrbitKind::positive_hyperbolic))
        throw OrbitDataError("eigenvector winding parity disagrees with the monodromy sign");
    }
    c.lifted = true;
    return c;
  }
  throw OrbitDataError("linearised flow too irregular to track");
}

std::vector<PeriodicOrbit> find_orbits(const SurfaceMap& map, int k, const OrbitSearch& s) {
  const int nx = s.grid_x, ny = s.grid_y;
  std::vector<double> res(static_cast<std::size_t>(nx) * ny, std::numeric_limits<double>::infinity());
  auto seed_at = [&](int i, int j) {
    return Point(s.x_min + (i + 0.5) * (s.x_max - s.x_min) / nx, (j + 0.5) / ny);
  };
  parallel_for(res.size(), s.workers, [&](std::size_t idx) {
    Point p = seed_at(static_cast<int>(idx) / ny, static_cast<int>(idx) % ny);
    try {
      Point q = map.iterate(p, k);
      res[idx] = std::hypot(q.x() - p.x(), circular(q.y() - p.y()));
    } catch (const DomainError&) {
    } catch (const FlowError&) {
    }
  });
  std::vector<Point> seeds;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      double r = res[static_cast<std::size_t>(i) * ny + j];
      if (!(r < s.seed_threshold)) continue;
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di)
        for (int dj = -1; dj <= 1 && minimum; ++dj) {
          int ii = i + di, jj = (j + dj + ny) % ny;
          if ((di == 0 && dj == 0) || ii < 0 || ii >= nx) continue;
          minimum = res[static_cast<std::size_t>(ii) * ny + jj] >= r;
        }
      if (minimum) seeds.push_back(seed_at(i, j));
    }
  std::vector<std::optional<PeriodicOrbit>> refined(seeds.size());
  parallel_for(seeds.size(), s.workers, [&](std::size_t i) {
    auto r = refine_newton(map, k, seeds[i], s);
    if (r.orbit && minimal_period(map, r.orbit->points[0], k) == k) refined[i] = std::move(r.orbit);
  });
  std::vector<PeriodicOrbit> out;
  for (auto& o : refined) {
    if (!o) continue;
    if (std::any_of(out.begin(), out.end(), [&](const PeriodicOrbit& q) { return same_orbit(q, *o, s.dedup_tolerance); }))
      continue;
    auto lowest = std::min_element(o->points.begin(), o->points.end(),
                                   [](const Point& a, const Point& b) { return a.y() < b.y(); });
    PeriodicOrbit canon = o->rotated(static_cast<int>(lowest - o->points.begin()), map);
    out.push_back(std::move(canon));
    if (static_cast<int>(out.size()) >= s.max_orbits) break;
  }
  std::sort(out.begin(), out.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    return points_less(a.points[0], b.points[0]);
  });
  for (auto& o : out) o.cls = classify(map, o);
  return out;
}

}  // namespace braidstab
