#include "braidstab/surface_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace braidstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Five-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr double kGLNodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                0.9061798459386640};
constexpr double kGLWeights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                  0.4786286704993665, 0.2369268850561891};

struct Derivs {
  double v, dx, dy, dxx, dxy, dyy;
};

Derivs second_derivatives(const Expression& e, double t, double x, double y) {
  using J1 = Jet<double>;
  using J2 = Jet<J1>;
  J2 tj(J1(t, 0.0, 0.0), J1(0.0), J1(0.0));
  J2 xj(J1(x, 1.0, 0.0), J1(1.0, 0.0, 0.0), J1(0.0));
  J2 yj(J1(y, 0.0, 1.0), J1(0.0), J1(1.0, 0.0, 0.0));
  J2 r = e(tj, xj, yj);
  return {r.v.v, r.v.dx, r.v.dy, r.dx.dx, r.dx.dy, r.dy.dy};
}

double catmull_rom(double p0, double p1, double p2, double p3, double u) {
  double u2 = u * u, u3 = u2 * u;
  return 0.5 * ((-u3 + 2 * u2 - u) * p0 + (3 * u3 - 5 * u2 + 2) * p1 + (-3 * u3 + 4 * u2 + u) * p2 +
                (u3 - u2) * p3);
}

// Integrand of the Hamiltonian-stage primitive: H - x H_x.
double action_density(const TimeHamiltonian& h, double t, const Point& p) {
  return h.value(t, p) - p.x() * h.gradient(t, p).x();
}

Mat2 field_derivative(const TimeHamiltonian& h, double t, const Point& p) {
  Mat2 hs = h.hessian(t, p);
  Mat2 a;
  a << hs(1, 0), hs(1, 1), -hs(0, 0), -hs(0, 1);
  return a;
}

struct FlowResult {
  Point p;
  Mat2 jac = Mat2::Identity();
  double action = 0.0;
};

FlowResult integrate(const TimeHamiltonian& h, double t0, double t1, const Point& p0, const FlowSettings& s,
                     bool want_jac, bool want_action) {
  FlowResult out;
  out.p = p0;
  double span = t1 - t0;
  if (span == 0.0) return out;
  int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) * s.steps - 1e-9)));
  double dt = span / n;
  const Point ref(0.0, 0.0);
  for (int k = 0; k < n; ++k) {
    double t = t0 + k * dt;
    const Point& p = out.p;
    auto f = [&](double tt, const Point& q) { return hamiltonian_vector_field(h, tt, q); };
    Eigen::Vector2d k1 = f(t, p);
    Eigen::Vector2d k2 = f(t + dt / 2, p + dt / 2 * k1);
    Eigen::Vector2d k3 = f(t + dt / 2, p + dt / 2 * k2);
    Eigen::Vector2d k4 = f(t + dt, p + dt * k3);
    if (want_jac) {
      const Mat2& m = out.jac;
      Mat2 m1 = field_derivative(h, t, p) * m;
      Mat2 m2 = field_derivative(h, t + dt / 2, p + dt / 2 * k1) * (m + dt / 2 * m1);
      Mat2 m3 = field_derivative(h, t + dt / 2, p + dt / 2 * k2) * (m + dt / 2 * m2);
      Mat2 m4 = field_derivative(h, t + dt, p + dt * k3) * (m + dt * m3);
      out.jac = m + dt / 6 * (m1 + 2 * m2 + 2 * m3 + m4);
    }
    if (want_action) {
      double a1 = action_density(h, t, p) - h.value(t, ref);
      double a2 = action_density(h, t + dt / 2, p + dt / 2 * k1) - h.value(t + dt / 2, ref);
      double a3 = action_density(h, t + dt / 2, p + dt / 2 * k2) - h.value(t + dt / 2, ref);
      double a4 = action_density(h, t + dt, p + dt * k3) - h.value(t + dt, ref);
      out.action += dt / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
    }
    out.p = p + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (out.p.x() < -s.domain_tolerance || out.p.x() > 1.0 + s.domain_tolerance || !out.p.allFinite()) {
      std::ostringstream os;
      os << "flow left the annulus at t=" << t + dt << " (x=" << out.p.x() << ")";
      throw FlowError(os.str());
    }
  }
  return out;
}

Point twist_apply(const TwistStage& st, double s, const Point& p, Mat2* jac) {
  Jet<double> r = st.rho(Jet<double>(0.0), Jet<double>(p.x(), 1.0, 0.0), Jet<double>(0.0));
  if (jac) *jac << 1.0, 0.0, s * r.dx, 1.0;
  return {p.x(), p.y() + s * r.v};
}

Point kick_apply(const KickStage& st, double s, const Point& p, Mat2* jac) {
  const Expression& k = st.generator;
  double xp = p.x();
  Derivs d{};
  for (int it = 0; it < 60; ++it) {
    d = second_derivatives(k, 0.0, xp, p.y());
    double g = xp - p.x() - s * d.dy;
    double gp = 1.0 - s * d.dxy;
    if (std::abs(gp) < 1e-12) throw DomainError("kick stage: singular implicit equation");
    double step = g / gp;
    xp -= step;
    if (std::abs(step) < 1e-15) break;
  }
  d = second_derivatives(k, 0.0, xp, p.y());
  if (xp < -1e-9 || xp > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "kick stage maps x=" << p.x() << " outside [0,1] (x'=" << xp << ")";
    throw DomainError(os.str());
  }
  if (jac) {
    double den = 1.0 - s * d.dxy;
    double kxx = s * d.dxx, kyy = s * d.dyy;
    *jac << 1.0 / den, kyy / den, -kxx / den, 1.0 - s * d.dxy - kxx * kyy / den;
  }
  return {xp, p.y() - s * d.dx};
}

}  // namespace

AnnulusPoint::AnnulusPoint(double x_, double y_, bool keep_lift) : x(x_), y(keep_lift ? y_ : wrap_unit(y_)) {
  if (!(x_ >= -1e-12 && x_ <= 1.0 + 1e-12)) throw DomainError("annulus point with x outside [0,1]");
}

double wrap_unit(double y) {
  double w = y - std::floor(y);
  return w >= 1.0 ? 0.0 : w;
}

IrrationalRotation IrrationalRotation::quadratic(long a, long b, long n, long c) {
  if (c == 0) throw AdmissibilityError("quadratic irrational with zero denominator");
  long root = static_cast<long>(std::llround(std::sqrt(static_cast<double>(n))));
  if (b == 0 || n <= 0 || root * root == n)
    throw AdmissibilityError("rational boundary rotation: (a + b*sqrt(n))/c requires b != 0 and n not a square");
  std::ostringstream os;
  os << "(" << a << "+" << b << "*sqrt(" << n << "))/" << c;
  return {(a + b * std::sqrt(static_cast<double>(n))) / c, os.str()};
}

IrrationalRotation IrrationalRotation::continued_fraction(const std::vector<long>& terms) {
  if (terms.size() < 8)
    throw AdmissibilityError("rational boundary rotation: continued fraction needs at least 8 terms");
  for (std::size_t k = 1; k < terms.size(); ++k)
    if (terms[k] <= 0) throw AdmissibilityError("continued fraction terms after the first must be positive");
  double v = static_cast<double>(terms.back());
  for (std::size_t k = terms.size() - 1; k-- > 0;) v = terms[k] + 1.0 / v;
  std::ostringstream os;
  os << "cf[";
  for (std::size_t k = 0; k < terms.size(); ++k) os << (k ? "," : "") << terms[k];
  os << "]";
  return {v, os.str()};
}

IrrationalRotation IrrationalRotation::from_rational(double value) {
  std::ostringstream os;
  os << "rational boundary rotation: " << value
     << " is a plain number; declare a quadratic irrational or continued fraction";
  throw AdmissibilityError(os.str());
}

void FlowSettings::validate() const {
  if (steps < 16) throw FlowError("flow settings: at least 16 steps per unit time required");
  if (!(fd_step > 0.0) || !(fd_hessian_step > 0.0)) throw FlowError("flow settings: difference steps must be positive");
}

double SampledField::operator()(double t, double x, double y) const {
  auto periodic = [](int i, int n) { return ((i % n) + n) % n; };
  double ft = wrap_unit(t) * nt, fy = wrap_unit(y) * ny;
  double fx = std::clamp(x, 0.0, 1.0) * (nx - 1);
  int it = static_cast<int>(std::floor(ft)), iy = static_cast<int>(std::floor(fy));
  int ix = std::min(static_cast<int>(std::floor(fx)), nx - 2);
  double ut = ft - it, uy = fy - iy, ux = fx - ix;
  double across_t[4];
  for (int a = 0; a < 4; ++a) {
    double across_x[4];
    int tt = periodic(it + a - 1, nt);
    for (int b = 0; b < 4; ++b) {
      int xx = std::clamp(ix + b - 1, 0, nx - 1);
      double row[4];
      for (int c = 0; c < 4; ++c) row[c] = values[(static_cast<std::size_t>(tt) * nx + xx) * ny + periodic(iy + c - 1, ny)];
      across_x[b] = catmull_rom(row[0], row[1], row[2], row[3], uy);
    }
    across_t[a] = catmull_rom(across_x[0], across_x[1], across_x[2], across_x[3], ux);
  }
  return catmull_rom(across_t[0], across_t[1], across_t[2], across_t[3], ut);
}

TimeHamiltonian::TimeHamiltonian(Expression e, double collar) : field_(std::move(e)), collar_(collar) {}

TimeHamiltonian::TimeHamiltonian(SampledField f, double collar) : field_(std::move(f)), collar_(collar) {
  const auto& g = std::get<SampledField>(field_);
  if (g.nt < 1 || g.nx < 4 || g.ny < 4 || g.values.size() != static_cast<std::size_t>(g.nt) * g.nx * g.ny)
    throw DomainError("sampled Hamiltonian: inconsistent grid dimensions");
}

double TimeHamiltonian::raw(double t, double x, double y) const {
  if (auto e = std::get_if<Expression>(&field_)) return (*e)(t, x, y);
  return std::get<SampledField>(field_)(t, x, y);
}

double TimeHamiltonian::value(double t, const Point& p) const {
  return scale_ * raw(local_time(t), p.x(), p.y());
}

Eigen::Vector2d TimeHamiltonian::gradient(double t, const Point& p) const {
  double tl = local_time(t);
  if (auto e = std::get_if<Expression>(&field_)) {
    Jet<double> r = (*e)(Jet<double>(tl), Jet<double>(p.x(), 1.0, 0.0), Jet<double>(p.y(), 0.0, 1.0));
    return scale_ * Eigen::Vector2d(r.dx, r.dy);
  }
  double h = fd_;
  double gx = (raw(tl, p.x() + h, p.y()) - raw(tl, p.x() - h, p.y())) / (2 * h);
  double gy = (raw(tl, p.x(), p.y() + h) - raw(tl, p.x(), p.y() - h)) / (2 * h);
  return scale_ * Eigen::Vector2d(gx, gy);
}

Mat2 TimeHamiltonian::hessian(double t, const Point& p) const {
  if (auto e = std::get_if<Expression>(&field_)) {
    Derivs d = second_derivatives(*e, local_time(t), p.x(), p.y());
    Mat2 m;
    m << d.dxx, d.dxy, d.dxy, d.dyy;
    return scale_ * m;
  }
  double h = fd_hess_;
  Eigen::Vector2d gxp = gradient(t, p + Point(h, 0)), gxm = gradient(t, p - Point(h, 0));
  Eigen::Vector2d gyp = gradient(t, p + Point(0, h)), gym = gradient(t, p - Point(0, h));
  Mat2 m;
  m.col(0) = (gxp - gxm) / (2 * h);
  m.col(1) = (gyp - gym) / (2 * h);
  return 0.5 * (m + m.transpose());
}

TimeHamiltonian TimeHamiltonian::reversed() const {
  TimeHamiltonian r = *this;
  r.reverse_ = !reverse_;
  r.scale_ = -scale_;
  return r;
}

TimeHamiltonian TimeHamiltonian::scaled(double factor) const {
  TimeHamiltonian r = *this;
  r.scale_ *= factor;
  return r;
}

Eigen::Vector2d hamiltonian_vector_field(const TimeHamiltonian& h, double t, const Point& p) {
  Eigen::Vector2d g = h.gradient(t, p);
  if (!g.allFinite()) throw FlowError("Hamiltonian gradient is not finite");
  return {g.y(), -g.x()};
}

Point flow(const TimeHamiltonian& h, double t0, double t1, const Point& p, const FlowSettings& s, Mat2* jac) {
  FlowResult r = integrate(h, t0, t1, p, s, jac != nullptr, false);
  if (jac) *jac = r.jac;
  return r.p;
}

Point stage_apply(const Stage& stage, double s, const Point& p, Mat2* jac) {
  if (s <= 0.0) {
    if (jac) jac->setIdentity();
    return p;
  }
  if (auto tw = std::get_if<TwistStage>(&stage)) return twist_apply(*tw, s, p, jac);
  if (auto k = std::get_if<KickStage>(&stage)) return kick_apply(*k, s, p, jac);
  const auto& hs = std::get<HamiltonianStage>(stage);
  return flow(hs.hamiltonian, 0.0, s, p, hs.settings, jac);
}

double stage_primitive(const Stage& stage, const Point& p) {
  if (auto tw = std::get_if<TwistStage>(&stage)) {
    // integral_0^x u rho'(u) du
    const int panels = 64;
    double x = p.x(), total = 0.0, w = x / panels;
    for (int k = 0; k < panels; ++k) {
      double mid = (k + 0.5) * w;
      for (int q = 0; q < 5; ++q) {
        double u = mid + 0.5 * w * kGLNodes[q];
        Jet<double> r = tw->rho(Jet<double>(0.0), Jet<double>(u, 1.0, 0.0), Jet<double>(0.0));
        total += 0.5 * w * kGLWeights[q] * u * r.dx;
      }
    }
    return total;
  }
  if (auto k = std::get_if<KickStage>(&stage)) {
    Point q = kick_apply(*k, 1.0, p, nullptr);
    Derivs d = second_derivatives(k->generator, 0.0, q.x(), p.y());
    return d.v - q.x() * d.dx - k->generator(0.0, 0.0, 0.0);
  }
  const auto& hs = std::get<HamiltonianStage>(stage);
  return integrate(hs.hamiltonian, 0.0, 1.0, p, hs.settings, false, true).action;
}

Point SurfaceMap::apply(const Point& p) const {
  Point q = p;
  for (const auto& st : stages_) q = stage_apply(st, 1.0, q, nullptr);
  return q;
}

AnnulusPoint SurfaceMap::apply(const AnnulusPoint& p) const {
  Point q = apply(p.lifted());
  if (q.x() < -1e-9 || q.x() > 1.0 + 1e-9) throw DomainError("map image outside the annulus");
  return AnnulusPoint(std::clamp(q.x(), 0.0, 1.0), q.y());
}

Point SurfaceMap::apply(const Point& p, Mat2& jac) const {
  jac.setIdentity();
  Point q = p;
  for (const auto& st : stages_) {
    Mat2 j;
    q = stage_apply(st, 1.0, q, &j);
    jac = j * jac;
  }
  return q;
}

Mat2 SurfaceMap::jacobian(const Point& p) const {
  Mat2 j;
  apply(p, j);
  return j;
}

Point SurfaceMap::iterate(const Point& p, int k) const {
  Point q = p;
  for (int i = 0; i < k; ++i) q = apply(q);
  return q;
}

Point SurfaceMap::iterate(const Point& p, int k, Mat2& jac) const {
  jac.setIdentity();
  Point q = p;
  for (int i = 0; i < k; ++i) {
    Mat2 j;
    q = apply(q, j);
    jac = j * jac;
  }
  return q;
}

double SurfaceMap::primitive(const Point& p) const {
  double total = 0.0;
  Point q = p;
  for (const auto& st : stages_) {
    total += stage_primitive(st, q);
    q = stage_apply(st, 1.0, q, nullptr);
  }
  return total;
}

Point SurfaceMap::partial(double s, const Point& p) const {
  if (stages_.empty() || s <= 0.0) return p;
  const int m = static_cast<int>(stages_.size());
  double u = std::min(s, 1.0) * m;
  int full = std::min(static_cast<int>(std::floor(u)), m - 1);
  Point q = p;
  for (int j = 0; j < full; ++j) q = stage_apply(stages_[j], 1.0, q, nullptr);
  return stage_apply(stages_[full], u - full, q, nullptr);
}

std::vector<Point> SurfaceMap::suspension_path(const Point& p, int samples) const {
  if (samples < 1) throw std::invalid_argument("suspension path needs at least one sample");
  std::vector<Point> out(samples + 1, p);
  if (stages_.empty()) return out;
  const int m = static_cast<int>(stages_.size());
  Point q = p;  // input of the current stage
  int l = 1;
  for (int j = 0; j < m; ++j) {
    const auto* hs = std::get_if<HamiltonianStage>(&stages_[j]);
    Point moving = q;
    double local_prev = 0.0;
    for (; l <= samples; ++l) {
      double local = static_cast<double>(l) / samples * m - j;
      if (local > 1.0 + 1e-12 && j < m - 1) break;
      local = std::min(local, 1.0);
      if (hs) {
        moving = flow(hs->hamiltonian, local_prev, local, moving, hs->settings);
        local_prev = local;
        out[l] = moving;
      } else {
        out[l] = stage_apply(stages_[j], local, q, nullptr);
      }
    }
    q = hs ? flow(hs->hamiltonian, local_prev, 1.0, moving, hs->settings) : stage_apply(stages_[j], 1.0, q, nullptr);
  }
  return out;
}

Point SurfaceMap::partial(double s, const Point& p, Mat2& jac) const {
  jac.setIdentity();
  if (stages_.empty() || s <= 0.0) return p;
  const int m = static_cast<int>(stages_.size());
  double u = std::min(s, 1.0) * m;
  int full = std::min(static_cast<int>(std::floor(u)), m - 1);
  double frac = u - full;
  Point q = p;
  for (int j = 0; j < full; ++j) {
    Mat2 d;
    q = stage_apply(stages_[j], 1.0, q, &d);
    jac = d * jac;
  }
  Mat2 d;
  q = stage_apply(stages_[full], frac, q, &d);
  jac = d * jac;
  return q;
}

SurfaceMap flow_time_1(const SurfaceMap& base, const TimeHamiltonian& h, const FlowSettings& s) {
  s.validate();
  std::vector<Stage> stages;
  stages.reserve(base.stages().size() + 1);
  stages.emplace_back(HamiltonianStage{h, s});
  for (const auto& st : base.stages()) stages.push_back(st);
  return SurfaceMap(std::move(stages), base.boundary());
}

namespace {

struct Range {
  double lo = 1e300, hi = -1e300;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double width() const { return hi - lo; }
};

Range fiber_range(const TimeHamiltonian& h, double t, const HoferGrid& g) {
  Range r;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) r.add(h.value(t, Point(static_cast<double>(i) / (g.nx - 1), static_cast<double>(j) / g.ny)));
  return r;
}

}  // namespace

double hofer_norm(const TimeHamiltonian& h, const HoferGrid& g) {
  Range total;
  for (int k = 0; k <= g.nt; ++k) {
    Range r = fiber_range(h, static_cast<double>(k) / g.nt, g);
    total.add(r.lo);
    total.add(r.hi);
  }
  return total.width();
}

double hofer_norm_prime(const TimeHamiltonian& h, const HoferGrid& g) {
  double integral = 0.0;
  for (int k = 0; k <= g.nt; ++k) {
    double w = (k == 0 || k == g.nt) ? 0.5 : 1.0;
    integral += w * fiber_range(h, static_cast<double>(k) / g.nt, g).width();
  }
  return integral / g.nt;
}

AdmissibilityReport check_boundary_admissible(const SurfaceMap& map, int samples) {
  AdmissibilityReport rep;
  if (!map.boundary()) {
    rep.message = "no boundary rotation declared";
    return rep;
  }
  const BoundaryData& b = *map.boundary();
  const double tol = 1e-10;
  double worst = 0.0;
  AnnulusPoint worst_pt;
  for (int side = 0; side < 2; ++side) {
    double declared = side == 0 ? b.theta_minus.value() : b.theta_plus.value();
    bool first = true;
    double measured = 0.0;
    for (int i = 0; i < samples; ++i) {
      double frac = samples > 1 ? static_cast<double>(i) / (samples - 1) : 0.0;
      double x = side == 0 ? frac * b.collar : 1.0 - frac * b.collar;
      for (int j = 0; j < samples; ++j) {
        Point p(x, static_cast<double>(j) / samples);
        Point q;
        try {
          q = map.apply(p);
        } catch (const std::exception& e) {
          rep.message = std::string("collar sample failed: ") + e.what();
          rep.worst = AnnulusPoint(x, p.y());
          rep.worst_violation = 1e300;
          return rep;
        }
        double d = q.y() - p.y();
        if (first) {
          measured = d;
          first = false;
        }
        double circ = std::abs(wrap_unit(d - declared + 0.5) - 0.5);
        double v = std::max({std::abs(q.x() - p.x()), std::abs(d - measured), circ});
        if (v > worst) {
          worst = v;
          worst_pt = AnnulusPoint(x, p.y());
        }
      }
    }
    (side == 0 ? rep.theta_minus : rep.theta_plus) = measured;
  }
  rep.worst = worst_pt;
  rep.worst_violation = worst;
  rep.admissible = worst <= tol;
  if (!rep.admissible) {
    std::ostringstream os;
    os << "collar violation " << worst << " at (" << worst_pt.x << ", " << worst_pt.y << ")";
    rep.message = os.str();
  }
  return rep;
}

double twist_condition_violation(const TimeHamiltonian& h, const SurfaceMap& base, int samples) {
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i)
    for (int j = 0; j < samples; ++j) {
      Point p(static_cast<double>(i) / samples, static_cast<double>(j) / samples);
      worst = std::max(worst, std::abs(h.value(1.0, p) - h.value(0.0, base.apply(p))));
    }
  return worst;
}

}  // namespace braidstab
