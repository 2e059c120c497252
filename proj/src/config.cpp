#include "braidstab/config.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "braidstab/models.hpp"

namespace braidstab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) fail(path + "." + k, "unknown key");
}

template <class T>
void read(const json& j, const char* key, const std::string& path, T& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  const std::string where = path + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) fail(where, "expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) fail(where, "expected an integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) fail(where, "expected a number");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) fail(where, "expected a string");
  } else {
    if (!v.is_array()) fail(where, "expected an array");
    for (const auto& e : v)
      if (!e.is_number()) fail(where, "expected numbers");
      else if (std::is_integral_v<typename T::value_type> && !e.is_number_integer()) fail(where, "expected integers");
  }
  out = v.get<T>();
}

void positive(double v, const std::string& path) {
  if (!(v > 0)) fail(path, "must be positive");
}

RotationSpec read_rotation(const json& j, const std::string& path) {
  only_keys(j, path, {"a", "b", "n", "c", "continued_fraction"});
  RotationSpec r;
  read(j, "a", path, r.a);
  read(j, "b", path, r.b);
  read(j, "n", path, r.n);
  read(j, "c", path, r.c);
  read(j, "continued_fraction", path, r.terms);
  try {
    r.build();
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  return r;
}

json rotation_json(const RotationSpec& r) {
  if (!r.terms.empty()) return json{{"continued_fraction", r.terms}};
  return json{{"a", r.a}, {"b", r.b}, {"n", r.n}, {"c", r.c}};
}

}  // namespace

IrrationalRotation RotationSpec::build() const {
  return terms.empty() ? IrrationalRotation::quadratic(a, b, n, c) : IrrationalRotation::continued_fraction(terms);
}

SurfaceMap MapSpec::build() const {
  std::vector<Stage> out;
  for (const auto& s : stages) {
    if (s.type == "kick") out.push_back(KickStage{Expression::parse(s.expression)});
    else if (s.type == "twist") out.push_back(TwistStage{Expression::parse(s.expression)});
    else {
      FlowSettings fs;
      fs.steps = s.steps;
      out.push_back(HamiltonianStage{TimeHamiltonian(Expression::parse(s.expression)), fs});
    }
  }
  std::optional<BoundaryData> boundary;
  if (theta_minus && theta_plus) boundary = BoundaryData{theta_minus->build(), theta_plus->build(), collar};
  return SurfaceMap(std::move(out), std::move(boundary));
}

TimeHamiltonian FamilySpec::build(double amplitude) const {
  auto e = Expression::parse(expression, {parameter});
  e.bind({amplitude});
  return TimeHamiltonian(std::move(e), collar);
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  only_keys(j, "$", {"name", "seed", "map", "orbits", "family", "sweep"});
  read(j, "name", "$", c.name);
  read(j, "seed", "$", c.seed);

  if (!j.contains("map")) fail("$.map", "required");
  const json& m = j.at("map");
  only_keys(m, "$.map", {"model", "amplitude", "harmonic", "stages", "theta_minus", "theta_plus", "collar"});
  if (m.contains("model")) {
    std::string model;
    read(m, "model", "$.map", model);
    if (model != "kicked_twist") fail("$.map.model", "unknown model '" + model + "'");
    if (m.contains("stages")) fail("$.map", "give either a model or stages, not both");
    double amplitude = 0.02;
    int harmonic = 2;
    read(m, "amplitude", "$.map", amplitude);
    read(m, "harmonic", "$.map", harmonic);
    if (harmonic < 1) fail("$.map.harmonic", "must be at least 1");
    // Expanded into explicit stages so the canonical form is model-free.
    std::string kick = models::format_double(amplitude / (2.0 * 3.14159265358979323846 * harmonic)) +
                       " * bump(x, 0.05, 0.95) * cos(" + std::to_string(2 * harmonic) + " * pi * y)";
    c.map.stages = {{"kick", kick, 256},
                    {"twist", models::twist_profile(models::inner_rotation().value(), models::outer_rotation().value()), 256}};
    c.map.theta_minus = RotationSpec{-1, 1, 2, 1, {}};
    c.map.theta_plus = RotationSpec{-1, 1, 5, 2, {}};
  } else {
    if (!m.contains("stages") || !m.at("stages").is_array() || m.at("stages").empty())
      fail("$.map.stages", "a non-empty stage list is required");
    for (std::size_t i = 0; i < m.at("stages").size(); ++i) {
      const json& s = m.at("stages")[i];
      std::string path = "$.map.stages[" + std::to_string(i) + "]";
      only_keys(s, path, {"type", "expression", "steps"});
      StageSpec st;
      read(s, "type", path, st.type);
      read(s, "expression", path, st.expression);
      read(s, "steps", path, st.steps);
      if (st.type != "kick" && st.type != "twist" && st.type != "hamiltonian")
        fail(path + ".type", "expected kick, twist or hamiltonian");
      if (st.steps < 1) fail(path + ".steps", "must be positive");
      try {
        Expression::parse(st.expression);
      } catch (const std::exception& e) {
        fail(path + ".expression", e.what());
      }
      c.map.stages.push_back(st);
    }
    if (m.contains("theta_minus") != m.contains("theta_plus")) fail("$.map", "give both boundary rotations or neither");
    if (m.contains("theta_minus")) {
      c.map.theta_minus = read_rotation(m.at("theta_minus"), "$.map.theta_minus");
      c.map.theta_plus = read_rotation(m.at("theta_plus"), "$.map.theta_plus");
    }
  }
  read(m, "collar", "$.map", c.map.collar);
  positive(c.map.collar, "$.map.collar");

  if (j.contains("orbits")) {
    const json& o = j.at("orbits");
    only_keys(o, "$.orbits", {"periods", "grid", "tolerance", "dedup", "seed_threshold", "max_iterations", "alpha_periods",
                              "alpha_indices"});
    read(o, "periods", "$.orbits", c.orbits.periods);
    int grid = c.orbits.search.grid_x;
    read(o, "grid", "$.orbits", grid);
    c.orbits.search.grid_x = c.orbits.search.grid_y = grid;
    read(o, "tolerance", "$.orbits", c.orbits.search.tolerance);
    read(o, "dedup", "$.orbits", c.orbits.search.dedup_tolerance);
    read(o, "seed_threshold", "$.orbits", c.orbits.search.seed_threshold);
    read(o, "max_iterations", "$.orbits", c.orbits.search.max_iterations);
    read(o, "alpha_periods", "$.orbits", c.orbits.alpha_periods);
    read(o, "alpha_indices", "$.orbits", c.orbits.alpha_indices);
  }
  if (c.orbits.periods.empty()) fail("$.orbits.periods", "must not be empty");
  for (int p : c.orbits.periods)
    if (p < 1) fail("$.orbits.periods", "periods must be positive");
  for (int p : c.orbits.alpha_periods)
    if (std::find(c.orbits.periods.begin(), c.orbits.periods.end(), p) == c.orbits.periods.end())
      fail("$.orbits.alpha_periods", "period " + std::to_string(p) + " is not searched");
  if (c.orbits.search.grid_x < 2) fail("$.orbits.grid", "must be at least 2");
  positive(c.orbits.search.tolerance, "$.orbits.tolerance");
  positive(c.orbits.search.dedup_tolerance, "$.orbits.dedup");
  positive(c.orbits.search.seed_threshold, "$.orbits.seed_threshold");
  if (c.orbits.search.max_iterations < 1) fail("$.orbits.max_iterations", "must be positive");

  if (j.contains("family")) {
    const json& f = j.at("family");
    only_keys(f, "$.family", {"expression", "parameter", "amplitudes", "collar"});
    read(f, "expression", "$.family", c.family.expression);
    read(f, "parameter", "$.family", c.family.parameter);
    read(f, "amplitudes", "$.family", c.family.amplitudes);
    read(f, "collar", "$.family", c.family.collar);
  }
  try {
    Expression::parse(c.family.expression, {c.family.parameter});
  } catch (const std::exception& e) {
    fail("$.family.expression", e.what());
  }
  if (c.family.amplitudes.empty()) fail("$.family.amplitudes", "must not be empty");
  if (!std::is_sorted(c.family.amplitudes.begin(), c.family.amplitudes.end()))
    fail("$.family.amplitudes", "must be sorted ascending");
  if (c.family.collar < 0) fail("$.family.collar", "must be non-negative");

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    only_keys(s, "$.sweep", {"braid_samples", "transport_samples", "continuation_steps", "conjugacy_budget", "conjugacy_length",
                             "entropy_iterations", "isolation_budget", "safety_margin", "recheck", "workers"});
    read(s, "braid_samples", "$.sweep", c.sweep.braid_samples);
    read(s, "transport_samples", "$.sweep", c.sweep.transport_samples);
    read(s, "continuation_steps", "$.sweep", c.sweep.continuation_steps);
    read(s, "conjugacy_budget", "$.sweep", c.sweep.conjugacy_budget);
    read(s, "conjugacy_length", "$.sweep", c.sweep.conjugacy_length);
    read(s, "entropy_iterations", "$.sweep", c.sweep.entropy_iterations);
    read(s, "isolation_budget", "$.sweep", c.sweep.isolation_budget);
    read(s, "safety_margin", "$.sweep", c.sweep.safety_margin);
    read(s, "recheck", "$.sweep", c.sweep.recheck);
    read(s, "workers", "$.sweep", c.sweep.workers);
  }
  for (auto [v, name] : {std::pair{c.sweep.braid_samples, "braid_samples"}, {c.sweep.transport_samples, "transport_samples"},
                         {c.sweep.continuation_steps, "continuation_steps"}, {c.sweep.conjugacy_budget, "conjugacy_budget"},
                         {c.sweep.conjugacy_length, "conjugacy_length"}, {c.sweep.entropy_iterations, "entropy_iterations"},
                         {c.sweep.isolation_budget, "isolation_budget"}})
    if (v < 1) fail(std::string("$.sweep.") + name, "must be positive");
  if (c.sweep.safety_margin < 0 || c.sweep.safety_margin >= 1) fail("$.sweep.safety_margin", "must lie in [0, 1)");
  if (c.sweep.workers < 0) fail("$.sweep.workers", "must be non-negative");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json stages = json::array();
  for (const auto& s : map.stages) {
    json st{{"type", s.type}, {"expression", s.expression}};
    if (s.type == "hamiltonian") st["steps"] = s.steps;
    stages.push_back(st);
  }
  json m{{"stages", stages}, {"collar", map.collar}};
  if (map.theta_minus) {
    m["theta_minus"] = rotation_json(*map.theta_minus);
    m["theta_plus"] = rotation_json(*map.theta_plus);
  }
  return json{{"name", name},
              {"seed", seed},
              {"map", m},
              {"orbits",
               {{"periods", orbits.periods},
                {"grid", orbits.search.grid_x},
                {"tolerance", orbits.search.tolerance},
                {"dedup", orbits.search.dedup_tolerance},
                {"seed_threshold", orbits.search.seed_threshold},
                {"max_iterations", orbits.search.max_iterations},
                {"alpha_periods", orbits.alpha_periods},
                {"alpha_indices", orbits.alpha_indices}}},
              {"family",
               {{"expression", family.expression},
                {"parameter", family.parameter},
                {"amplitudes", family.amplitudes},
                {"collar", family.collar}}},
              {"sweep",
               {{"braid_samples", sweep.braid_samples},
                {"transport_samples", sweep.transport_samples},
                {"continuation_steps", sweep.continuation_steps},
                {"conjugacy_budget", sweep.conjugacy_budget},
                {"conjugacy_length", sweep.conjugacy_length},
                {"entropy_iterations", sweep.entropy_iterations},
                {"isolation_budget", sweep.isolation_budget},
                {"safety_margin", sweep.safety_margin},
                {"recheck", sweep.recheck},
                {"workers", sweep.workers}}}};
}

std::string ExperimentConfig::hash() const {
  json canonical = to_json();
  canonical["sweep"].erase("workers");  // scheduling only; results do not depend on it
  return sha256_hex(canonical.dump());
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

}  // namespace braidstab
