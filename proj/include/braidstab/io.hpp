#pragma once

#include <json.hpp>

#include "braidstab/braid.hpp"
#include "braidstab/orbits.hpp"

namespace braidstab {

nlohmann::json orbit_to_json(const PeriodicOrbit& o);
// Points, period and winding are read back; the rest is recomputed on `map`.
PeriodicOrbit orbit_from_json(const nlohmann::json& j, const SurfaceMap& map);

nlohmann::json orbit_set_to_json(const OrbitSet& alpha);

// Words use the signed-index encoding: i for sigma_i, 0 for tau, -n for tau^-1.
nlohmann::json braid_to_json(const AnnularBraid& b);
AnnularBraid braid_from_json(const nlohmann::json& j);

}  // namespace braidstab
