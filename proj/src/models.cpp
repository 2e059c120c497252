#include "braidstab/models.hpp"

#include <cstdio>

namespace braidstab::models {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

IrrationalRotation inner_rotation() { return IrrationalRotation::quadratic(-1, 1, 2, 1); }
IrrationalRotation outer_rotation() { return IrrationalRotation::quadratic(-1, 1, 5, 2); }

std::string twist_profile(double theta_minus, double theta_plus, double lo, double hi) {
  return format_double(theta_minus) + " + " + format_double(theta_plus - theta_minus) + " * ramp(x, " +
         format_double(lo) + ", " + format_double(hi) + ")";
}

namespace {
BoundaryData default_boundary() { return BoundaryData{inner_rotation(), outer_rotation(), 0.05}; }
}  // namespace

SurfaceMap kicked_twist(double amplitude, int harmonic) {
  std::string kick = format_double(amplitude / (2.0 * 3.14159265358979323846 * harmonic)) +
                     " * bump(x, 0.05, 0.95) * cos(" + std::to_string(2 * harmonic) + " * pi * y)";
  TwistStage twist{Expression::parse(twist_profile(inner_rotation().value(), outer_rotation().value()))};
  return SurfaceMap({KickStage{Expression::parse(kick)}, twist}, default_boundary());
}

SurfaceMap integrable_twist() {
  TwistStage twist{Expression::parse(twist_profile(inner_rotation().value(), outer_rotation().value()))};
  return SurfaceMap({twist}, default_boundary());
}

}  // namespace braidstab::models
