#pragma once

#include <string>

#include "braidstab/surface_map.hpp"

namespace braidstab::models {

// Default boundary rotations: sqrt(2)-1 on the inner collar, (sqrt(5)-1)/2 on the outer.
IrrationalRotation inner_rotation();
IrrationalRotation outer_rotation();

// rho(x) = theta_minus + (theta_plus - theta_minus) * ramp(x, lo, hi); constant on both collars.
std::string twist_profile(double theta_minus, double theta_plus, double lo = 0.1, double hi = 0.9);

// Kick generator (amplitude / (2 pi harmonic)) * bump(x, 0.05, 0.95) * cos(2 pi harmonic y),
// followed by the monotone twist. Boundary-admissible with collar width 0.05.
SurfaceMap kicked_twist(double amplitude, int harmonic = 2);

// Same twist with no kick: every rational level of rho is a degenerate invariant circle.
SurfaceMap integrable_twist();

std::string format_double(double v);

}  // namespace braidstab::models
