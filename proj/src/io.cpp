#include "braidstab/io.hpp"

namespace braidstab {

using nlohmann::json;

json orbit_to_json(const PeriodicOrbit& o) {
  json pts = json::array();
  for (const auto& p : o.points) pts.push_back({p.x(), p.y()});
  json j{{"period", o.period},
         {"winding", o.winding},
         {"points", pts},
         {"residual", o.residual},
         {"trace", o.monodromy.trace()},
         {"determinant", o.monodromy.determinant()},
         {"nondegenerate", o.nondegenerate},
         {"kind", to_string(o.cls.kind)}};
  if (o.cls.kind == OrbitKind::elliptic) {
    j["rotation_number"] = o.cls.rotation_number;
    j["lifted"] = o.cls.lifted;
  } else if (o.cls.kind != OrbitKind::degenerate) {
    j["eigenvector_winding"] = o.cls.eigenvector_winding;
  }
  return j;
}

PeriodicOrbit orbit_from_json(const json& j, const SurfaceMap& map) {
  const auto& p = j.at("points").at(0);
  auto o = make_orbit(map, Point(p.at(0).get<double>(), p.at(1).get<double>()), j.at("period").get<int>(),
                      j.at("winding").get<int>());
  o.cls = classify(map, o);
  return o;
}

json orbit_set_to_json(const OrbitSet& alpha) {
  json entries = json::array();
  for (const auto& e : alpha.entries()) entries.push_back({{"orbit", orbit_to_json(e.orbit)}, {"multiplicity", e.multiplicity}});
  return json{{"degree", degree(alpha)}, {"winding", alpha.winding()}, {"entries", entries}};
}

json braid_to_json(const AnnularBraid& b) {
  return json{{"strands", b.strands()},
              {"word", b.encoded()},
              {"text", b.to_string()},
              {"permutation", b.permutation()},
              {"strand_winding", b.strand_winding()}};
}

AnnularBraid braid_from_json(const json& j) {
  return AnnularBraid::decode(j.at("strands").get<int>(), j.at("word").get<std::vector<int>>());
}

}  // namespace braidstab
