#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "braidstab/expression.hpp"

namespace braidstab {

// Lifted annulus coordinates: x in [0,1] radial, y in R (universal cover of R/Z).
using Point = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnnulusPoint {
  double x = 0.0;
  double y = 0.0;

  AnnulusPoint() = default;
  AnnulusPoint(double x_, double y_, bool keep_lift = false);
  Point lifted() const { return {x, y}; }
};

double wrap_unit(double y);

// A boundary rotation number that is irrational by construction: either a
// quadratic irrational (a + b*sqrt(n))/c with n not a perfect square and b != 0,
// or a continued-fraction truncation flagged as effectively irrational.
class IrrationalRotation {
 public:
  static IrrationalRotation quadratic(long a, long b, long n, long c);
  static IrrationalRotation continued_fraction(const std::vector<long>& terms);
  // Always throws AdmissibilityError: plain floating-point rotations cannot be certified.
  [[noreturn]] static IrrationalRotation from_rational(double value);

  double value() const { return value_; }
  const std::string& provenance() const { return provenance_; }

 private:
  IrrationalRotation(double v, std::string p) : value_(v), provenance_(std::move(p)) {}
  double value_ = 0.0;
  std::string provenance_;
};

struct FlowSettings {
  int steps = 256;            // RK4 steps per unit time
  double fd_step = 1e-5;      // central-difference step for sampled gradients
  double fd_hessian_step = 1e-4;
  double domain_tolerance = 1e-9;

  void validate() const;
};

// Samples of H on a periodic (t, y) and clamped x grid, interpolated by
// tensor Catmull-Rom splines.
struct SampledField {
  int nt = 0, nx = 0, ny = 0;
  std::vector<double> values;  // index (it * nx + ix) * ny + iy

  double operator()(double t, double x, double y) const;
};

class TimeHamiltonian {
 public:
  TimeHamiltonian() = default;
  explicit TimeHamiltonian(Expression e, double collar = 0.0);
  TimeHamiltonian(SampledField f, double collar = 0.0);
  static TimeHamiltonian zero() { return TimeHamiltonian(Expression::constant(0.0)); }

  double value(double t, const Point& p) const;
  Eigen::Vector2d gradient(double t, const Point& p) const;
  Mat2 hessian(double t, const Point& p) const;

  bool symbolic() const { return std::holds_alternative<Expression>(field_); }
  double collar() const { return collar_; }
  const Expression* expression() const { return std::get_if<Expression>(&field_); }

  // K_t = -H_{1-t}: its time-1 flow is the inverse of the time-1 flow of H.
  TimeHamiltonian reversed() const;
  TimeHamiltonian scaled(double factor) const;

  void set_fd_steps(double h, double h_hess) { fd_ = h; fd_hess_ = h_hess; }

 private:
  double raw(double t, double x, double y) const;
  double local_time(double t) const { return reverse_ ? 1.0 - t : t; }

  std::variant<Expression, SampledField> field_;
  double collar_ = 0.0;
  double scale_ = 1.0;
  bool reverse_ = false;
  double fd_ = 1e-5;
  double fd_hess_ = 1e-4;
};

// (x, y) -> (x, y + rho(x)).
struct TwistStage {
  Expression rho;
};

// Closed-form exact-symplectic kick generated by K(x, y):
//   x' = x + K_y(x', y),  y' = y - K_x(x', y).
struct KickStage {
  Expression generator;
};

// Time-1 map of the Hamiltonian flow, integrated by fixed-step RK4.
struct HamiltonianStage {
  TimeHamiltonian hamiltonian;
  FlowSettings settings;
};

using Stage = std::variant<TwistStage, KickStage, HamiltonianStage>;

struct BoundaryData {
  IrrationalRotation theta_minus;
  IrrationalRotation theta_plus;
  double collar = 0.05;
};

// Composable area-preserving map of the annulus; stages act in list order.
class SurfaceMap {
 public:
  SurfaceMap() = default;
  explicit SurfaceMap(std::vector<Stage> stages, std::optional<BoundaryData> boundary = std::nullopt)
      : stages_(std::move(stages)), boundary_(std::move(boundary)) {}

  const std::vector<Stage>& stages() const { return stages_; }
  const std::optional<BoundaryData>& boundary() const { return boundary_; }

  Point apply(const Point& p) const;
  AnnulusPoint apply(const AnnulusPoint& p) const;
  Mat2 jacobian(const Point& p) const;
  // Image and differential in one pass.
  Point apply(const Point& p, Mat2& jac) const;

  // Iterate k times.
  Point iterate(const Point& p, int k) const;
  Point iterate(const Point& p, int k, Mat2& jac) const;

  // S with phi^*(x dy) - x dy = dS, normalised to vanish on the inner boundary.
  double primitive(const Point& p) const;

  // Suspension isotopy: stage j occupies [j/m, (j+1)/m] of the unit period.
  Point partial(double s, const Point& p) const;
  Point partial(double s, const Point& p, Mat2& jac) const;
  // partial(l / samples, p) for l = 0..samples, integrating flow stages incrementally.
  std::vector<Point> suspension_path(const Point& p, int samples) const;

 private:
  std::vector<Stage> stages_;
  std::optional<BoundaryData> boundary_;
};

// Stage-level primitives (s is the isotopy parameter in [0, 1]).
Point stage_apply(const Stage& stage, double s, const Point& p, Mat2* jac);
double stage_primitive(const Stage& stage, const Point& p);

Eigen::Vector2d hamiltonian_vector_field(const TimeHamiltonian& h, double t, const Point& p);

// Flow map of X_{H_t} from time t0 to t1 (t1 < t0 integrates backwards).
Point flow(const TimeHamiltonian& h, double t0, double t1, const Point& p, const FlowSettings& s,
           Mat2* jac = nullptr);

// phi_H = base o (time-1 flow of H).
SurfaceMap flow_time_1(const SurfaceMap& base, const TimeHamiltonian& h, const FlowSettings& s = {});

struct HoferGrid {
  int nt = 64;
  int nx = 129;
  int ny = 64;
};

double hofer_norm(const TimeHamiltonian& h, const HoferGrid& g = {});
double hofer_norm_prime(const TimeHamiltonian& h, const HoferGrid& g = {});

struct AdmissibilityReport {
  bool admissible = false;
  double theta_minus = 0.0;  // measured lifted translation on the inner collar
  double theta_plus = 0.0;
  std::string message;
  AnnulusPoint worst;
  double worst_violation = 0.0;
};

AdmissibilityReport check_boundary_admissible(const SurfaceMap& map, int samples = 24);

// max |H(1, p) - H(0, phi(p))| over a sample grid.
double twist_condition_violation(const TimeHamiltonian& h, const SurfaceMap& base, int samples = 24);

}  // namespace braidstab
