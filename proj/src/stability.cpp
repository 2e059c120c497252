#include "braidstab/stability.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "braidstab/entropy.hpp"
#include "braidstab/io.hpp"
#include "braidstab/parallel.hpp"

namespace braidstab {

using nlohmann::json;

const char* tool_version() { return BRAIDSTAB_VERSION; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::broken: return "broken";
    case Verdict::indeterminate: return "indeterminate";
    default: return "orbit-lost";
  }
}

namespace {

bool usable(const OrbitSet& s) { return s.simple() && s.nondegenerate(); }

struct Context {
  const ExperimentConfig& cfg;
  const SurfaceMap& map;
  const RunManifest& base;
  std::vector<int> periods;
};

// Compares one candidate orbit set of phi_H; returns true when it settles the sample.
bool try_candidate(const Context& ctx, const SurfaceMap& moved, const OrbitSet& set, const std::string& source,
                   SweepSample& s, bool& saw_indeterminate) {
  ExtractionSettings ex{ctx.cfg.sweep.braid_samples, 1e-9};
  AnnularBraid zeta = extract_braid(set, moved, ex);
  ++s.candidates;
  auto verdict = is_isotopic(*s.transported, zeta, {ctx.cfg.sweep.conjugacy_budget, ctx.cfg.sweep.conjugacy_length});
  if (verdict == Isotopy::indeterminate) saw_indeterminate = true;
  if (!s.braid || verdict == Isotopy::isotopic) {
    s.braid = zeta;
    s.orbits = set;
    s.source = source;
  }
  return verdict == Isotopy::isotopic;
}

void search_candidates(const Context& ctx, const SurfaceMap& moved, int grid, const std::string& source, SweepSample& s,
                       bool& settled, bool& saw_indeterminate) {
  OrbitSearch search = ctx.cfg.orbits.search;
  search.grid_x = search.grid_y = grid;
  std::vector<PeriodicOrbit> found;
  for (int p : ctx.periods) {
    auto o = find_orbits(moved, p, search);
    found.insert(found.end(), o.begin(), o.end());
  }
  auto sets = enumerate_orbit_sets(found, ctx.base.degree, ctx.base.alpha.winding(), ctx.cfg.sweep.isolation_budget);
  for (const auto& set : sets) {
    if (!usable(set)) continue;
    if (try_candidate(ctx, moved, set, source, s, saw_indeterminate)) {
      settled = true;
      return;
    }
  }
}

SweepSample run_sample(const Context& ctx, double amplitude) {
  SweepSample s;
  s.amplitude = amplitude;
  s.entropy = std::numeric_limits<double>::quiet_NaN();
  TimeHamiltonian h = ctx.cfg.family.build(amplitude);
  s.hofer = hofer_norm(h);
  s.hofer_prime = hofer_norm_prime(h);
  s.below_threshold = s.hofer < ctx.base.isolation.delta;
  try {
    s.transported = transport_braid(ctx.base.braid, h, {}, ctx.cfg.sweep.transport_samples);
    SurfaceMap moved = flow_time_1(ctx.map, h);
    bool settled = false, saw_indeterminate = false;
    auto cont = continue_orbit_set(ctx.map, ctx.base.alpha, h, ctx.cfg.sweep.continuation_steps);
    if (cont.result && usable(*cont.result))
      settled = try_candidate(ctx, moved, *cont.result, "continuation", s, saw_indeterminate);
    else
      s.note = cont.result ? "continued orbit set is degenerate" : cont.note;
    if (!settled) search_candidates(ctx, moved, ctx.cfg.orbits.search.grid_x, "search", s, settled, saw_indeterminate);
    if (!settled && ctx.cfg.sweep.recheck)
      search_candidates(ctx, moved, 2 * ctx.cfg.orbits.search.grid_x, "recheck", s, settled, saw_indeterminate);
    if (settled) s.verdict = Verdict::stable;
    else if (saw_indeterminate) s.verdict = Verdict::indeterminate;
    else if (s.candidates > 0) s.verdict = Verdict::broken;
    else s.verdict = Verdict::orbit_lost;
    if (s.braid) s.entropy = braid_entropy(*s.braid, EntropyMethod::dynnikov_growth, ctx.cfg.sweep.entropy_iterations).value;
  } catch (const std::exception& e) {
    s.verdict = Verdict::indeterminate;
    s.note = std::string("error: ") + e.what();
  }
  return s;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string csv_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

BaseSetup prepare_base(const ExperimentConfig& cfg) {
  BaseSetup b{cfg.map.build(), {}, {}};
  if (b.map.boundary()) {
    auto adm = check_boundary_admissible(b.map);
    if (!adm.admissible) throw AdmissibilityError("base map is not boundary-admissible: " + adm.message);
  }
  OrbitSearch search = cfg.orbits.search;
  search.workers = cfg.sweep.workers > 0 ? cfg.sweep.workers : default_workers();
  std::vector<PeriodicOrbit> pool;
  for (int p : cfg.orbits.periods) {
    auto found = find_orbits(b.map, p, search);
    b.orbits.insert(b.orbits.end(), found.begin(), found.end());
    if (std::find(cfg.orbits.alpha_periods.begin(), cfg.orbits.alpha_periods.end(), p) != cfg.orbits.alpha_periods.end())
      pool.insert(pool.end(), found.begin(), found.end());
  }
  std::vector<OrbitSetEntry> entries;
  if (cfg.orbits.alpha_indices.empty()) {
    for (const auto& o : pool) entries.push_back({o, 1});
  } else {
    for (int i : cfg.orbits.alpha_indices) {
      if (i < 0 || i >= static_cast<int>(pool.size()))
        throw OrbitDataError("alpha index " + std::to_string(i) + " out of range (" + std::to_string(pool.size()) + " orbits)");
      entries.push_back({pool[i], 1});
    }
  }
  if (entries.empty()) throw OrbitDataError("no orbits found for alpha");
  b.alpha = OrbitSet(std::move(entries));
  if (!usable(b.alpha)) throw OrbitDataError("alpha must be simple and nondegenerate");
  return b;
}

RunManifest stability_sweep(const ExperimentConfig& cfg) {
  RunManifest m;
  m.config = cfg.to_json();
  m.config["sweep"].erase("workers");  // scheduling only, like the hash
  m.config_hash = cfg.hash();
  BaseSetup base = prepare_base(cfg);
  const SurfaceMap& map = base.map;
  m.orbits = base.orbits;
  m.alpha = base.alpha;
  OrbitSearch search = cfg.orbits.search;
  search.workers = cfg.sweep.workers > 0 ? cfg.sweep.workers : default_workers();
  m.degree = degree(m.alpha);
  IsolationSearch iso{cfg.orbits.search, cfg.sweep.isolation_budget, cfg.sweep.safety_margin};
  iso.search.workers = search.workers;
  m.isolation = isolation_gap(map, m.alpha, iso);
  m.braid = extract_braid(m.alpha, map, {cfg.sweep.braid_samples, 1e-9});
  m.entropy_base = braid_entropy(m.braid, EntropyMethod::dynnikov_growth, cfg.sweep.entropy_iterations).value;
  m.positive_entropy = m.entropy_base > 1e-3;

  Context ctx{cfg, map, m, {}};
  for (const auto& e : m.alpha.entries())
    if (std::find(ctx.periods.begin(), ctx.periods.end(), e.orbit.period) == ctx.periods.end())
      ctx.periods.push_back(e.orbit.period);
  std::sort(ctx.periods.begin(), ctx.periods.end());
  std::vector<SweepSample> samples(cfg.family.amplitudes.size());
  parallel_for(samples.size(), search.workers,
               [&](std::size_t i) { samples[i] = run_sample(ctx, cfg.family.amplitudes[i]); });
  m.samples = std::move(samples);
  return m;
}

json RunManifest::to_json() const {
  json orbit_list = json::array();
  for (const auto& o : orbits) orbit_list.push_back(orbit_to_json(o));
  json sample_list = json::array();
  int broken_below = 0, stable_below = 0, below = 0;
  json first_non_stable = nullptr;
  for (const auto& s : samples) {
    json j{{"amplitude", s.amplitude},
           {"hofer_norm", s.hofer},
           {"hofer_norm_prime", s.hofer_prime},
           {"regime", s.below_threshold ? "below_delta" : "at_or_above_delta"},
           {"verdict", to_string(s.verdict)},
           {"source", s.source},
           {"candidates", s.candidates},
           {"entropy", number_or_null(s.entropy)},
           {"note", s.note}};
    j["transported"] = s.transported ? braid_to_json(*s.transported) : json(nullptr);
    j["braid"] = s.braid ? braid_to_json(*s.braid) : json(nullptr);
    j["orbits"] = s.orbits ? orbit_set_to_json(*s.orbits) : json(nullptr);
    sample_list.push_back(j);
    if (s.below_threshold) {
      ++below;
      if (s.verdict == Verdict::stable) ++stable_below;
      if (s.verdict == Verdict::broken) ++broken_below;
    }
    if (s.verdict != Verdict::stable && first_non_stable.is_null()) first_non_stable = s.hofer;
  }
  return json{{"tool", "braidstab"},
              {"tool_version", tool_version()},
              {"config_hash", config_hash},
              {"config", config},
              {"orbits", orbit_list},
              {"alpha", orbit_set_to_json(alpha)},
              {"isolation",
               {{"epsilon", number_or_null(isolation.epsilon)},
                {"delta", number_or_null(isolation.delta)},
                {"smallest_gap", number_or_null(isolation.smallest_gap)},
                {"competitors", isolation.competitors},
                {"orbits_found", isolation.orbits_found},
                {"low_confidence", isolation.low_confidence}}},
              {"degree", degree},
              {"braid", braid_to_json(braid)},
              {"entropy_base", entropy_base},
              {"positive_entropy", positive_entropy},
              {"samples", sample_list},
              {"summary",
               {{"samples_below_delta", below},
                {"stable_below_delta", stable_below},
                {"broken_below_delta", broken_below},
                {"first_non_stable_hofer_norm", first_non_stable}}},
              {"timing", "timing.json"}};
}

std::string RunManifest::csv() const {
  std::ostringstream os;
  os << "amplitude,hofer_norm,hofer_norm_prime,delta,verdict,entropy_base,entropy_perturbed\n";
  for (const auto& s : samples)
    os << csv_number(s.amplitude) << ',' << csv_number(s.hofer) << ',' << csv_number(s.hofer_prime) << ','
       << csv_number(isolation.delta) << ',' << to_string(s.verdict) << ',' << csv_number(entropy_base) << ','
       << csv_number(s.entropy) << '\n';
  return os.str();
}

void write_run_directory(const std::string& dir, const ExperimentConfig& cfg, const RunManifest& m, const RunTiming& t) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "orbits");
  fs::create_directories(fs::path(dir) / "braids");
  auto write = [&](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
  };
  const json manifest = m.to_json();
  write(fs::path(dir) / "config.json", cfg.to_json().dump(2) + "\n");
  write(fs::path(dir) / "manifest.json", manifest.dump(2) + "\n");
  write(fs::path(dir) / "sweep.csv", m.csv());
  std::string lines;
  for (const auto& j : manifest.at("samples")) lines += j.dump() + "\n";
  write(fs::path(dir) / "samples.jsonl", lines);
  json orbit_list = json::array();
  for (const auto& o : m.orbits) orbit_list.push_back(orbit_to_json(o));
  write(fs::path(dir) / "orbits" / "base.json", orbit_list.dump(2) + "\n");
  write(fs::path(dir) / "orbits" / "alpha.json", orbit_set_to_json(m.alpha).dump(2) + "\n");
  write(fs::path(dir) / "braids" / "base.json", braid_to_json(m.braid).dump(2) + "\n");
  for (std::size_t i = 0; i < m.samples.size(); ++i) {
    std::ostringstream name;
    name << "sample_" << std::setw(3) << std::setfill('0') << i << ".json";
    const auto& s = m.samples[i];
    json j{{"amplitude", s.amplitude},
           {"transported", s.transported ? braid_to_json(*s.transported) : json(nullptr)},
           {"braid", s.braid ? braid_to_json(*s.braid) : json(nullptr)}};
    write(fs::path(dir) / "braids" / name.str(), j.dump(2) + "\n");
    if (s.orbits) write(fs::path(dir) / "orbits" / name.str(), orbit_set_to_json(*s.orbits).dump(2) + "\n");
  }
  write(fs::path(dir) / "timing.json",
        json{{"started", t.started}, {"finished", t.finished}, {"seconds", t.seconds}}.dump(2) + "\n");
}

}  // namespace braidstab
