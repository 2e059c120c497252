// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance <configs directory>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "braidstab/config.hpp"
#include "braidstab/ech.hpp"
#include "braidstab/entropy.hpp"
#include "braidstab/models.hpp"
#include "braidstab/stability.hpp"
#include "oracles.hpp"

using namespace braidstab;
namespace fs = std::filesystem;

namespace {

// Collects the first few failure messages of a criterion.
struct Check {
  int failures = 0;
  std::string first;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first = what;
  }
};

using Symbols = std::vector<std::pair<OrbitSymbol, int>>;

std::string tuple(const Partition& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "(") << p[i];
  os << ')';
  return os.str();
}

void partition_tables(Check& c, std::string& detail) {
  for (int m = 1; m <= 12; ++m) {
    Partition ones(m, 1), twos(m / 2, 2);
    if (m % 2) twos.push_back(1);
    for (int r : {-2, 0, 4}) {
      auto s = OrbitSymbol::positive_hyperbolic(r);
      c.require(positive_partition(s, m) == ones && negative_partition(s, m) == ones, "pos-hyp m=" + std::to_string(m));
    }
    for (int r : {-1, 1, 3}) {
      auto s = OrbitSymbol::negative_hyperbolic(r);
      c.require(positive_partition(s, m) == twos && negative_partition(s, m) == twos,
                "neg-hyp m=" + std::to_string(m) + " got " + tuple(positive_partition(s, m)));
    }
  }
  detail = "m <= 12, both hyperbolic kinds";
}

void elliptic_oracle(Check& c, std::string& detail) {
  std::mt19937 rng(20261015);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  int tested = 0, skipped = 0, lemma = 0;
  for (int t = 0; t < 1000; ++t) {
    double theta = frac(rng);
    for (int m = 1; m <= 10; ++m) {
      auto s = OrbitSymbol::elliptic(theta + (t % 3) - 1);  // integer shifts must not matter
      try {
        auto plus = positive_partition(s, m), minus = negative_partition(s, m);
        c.require(plus == oracle::oracle_partition(theta, m, true), "p+ theta=" + std::to_string(theta));
        c.require(minus == oracle::oracle_partition(theta, m, false), "p- theta=" + std::to_string(theta));
        if (m > 1) {
          ++lemma;
          c.require(partitions_disjoint(s, m) == Disjointness::disjoint, "disjointness theta=" + std::to_string(theta));
          for (int v : plus) c.require(std::find(minus.begin(), minus.end(), v) == minus.end(), "shared entry");
        }
        ++tested;
      } catch (const DegeneracyError&) {
        ++skipped;
      }
    }
  }
  c.require(skipped < 10, "too many resonant draws");
  detail = std::to_string(tested) + " (theta, m) pairs, " + std::to_string(lemma) + " disjointness cases";
}

void parity(Check& c, std::string& detail) {
  const std::vector<OrbitSymbol> kinds{OrbitSymbol::elliptic(0.37), OrbitSymbol::positive_hyperbolic(),
                                       OrbitSymbol::negative_hyperbolic()};
  long count = 0;
  std::function<void(Symbols&)> grow = [&](Symbols& set) {
    if (!set.empty()) {
      bool simple = std::all_of(set.begin(), set.end(), [](const auto& e) { return e.second == 1; });
      auto g = gluing_count(set);
      c.require(g.odd == simple && (g.count % 2 == 1) == simple, "parity mismatch");
      ++count;
    }
    if (set.size() == 4) return;
    for (const auto& k : kinds)
      for (int m = 1; m <= 5; ++m) {
        set.emplace_back(k, m);
        grow(set);
        set.pop_back();
      }
  };
  Symbols set;
  grow(set);
  detail = std::to_string(count) + " orbit sets";
}

void indices(Check& c, std::string& detail) {
  std::vector<OrbitSymbol> pool{OrbitSymbol::elliptic(0.3),           OrbitSymbol::elliptic(1.71),
                                OrbitSymbol::elliptic(-0.37),         OrbitSymbol::positive_hyperbolic(2),
                                OrbitSymbol::negative_hyperbolic(-1), OrbitSymbol::negative_hyperbolic(3)};
  for (const auto& s : pool) {
    auto cz = cz_terms({{s, 1}});
    c.require(fredholm_index({0, 0, cz, cz, 0}) == 0, "trivial cylinder");
  }
  std::mt19937 rng(7);
  auto pick = [&] {
    Symbols set;
    int n = 1 + rng() % 3;
    for (int e = 0; e < n; ++e) set.emplace_back(pool[rng() % pool.size()], 1 + rng() % 4);
    return set;
  };
  for (int t = 0; t < 50; ++t) {
    auto a = pick();
    c.require(ech_index(trivial_class_data(a, a)) == 0, "I(Z) for alpha = beta");
  }
  std::uniform_int_distribution<long> small(-6, 6);
  for (int t = 0; t < 1000; ++t) {
    auto a = pick(), b = pick(), g = pick();
    auto z = trivial_class_data(a, b), w = trivial_class_data(b, g), zw = trivial_class_data(a, g);
    z.c_tau = small(rng), z.q_tau = small(rng), w.c_tau = small(rng), w.q_tau = small(rng);
    zw.c_tau = z.c_tau + w.c_tau, zw.q_tau = z.q_tau + w.q_tau;
    c.require(ech_index(z) + ech_index(w) == ech_index(zw), "additivity");
  }
  detail = "1000 composable pairs";
}

void dynamics(Check& c, std::string& detail) {
  int count = 0;
  for (double amplitude : {0.02, 0.05}) {
    auto map = models::kicked_twist(amplitude);
    for (int k = 1; k <= 4; ++k)
      for (const auto& o : find_orbits(map, k)) {
        ++count;
        double tr = o.monodromy.trace();
        c.require(o.residual < 1e-10, "residual");
        c.require(std::abs(o.monodromy.determinant() - 1) < 1e-8, "determinant");
        OrbitKind expected = std::abs(tr) < 2 ? OrbitKind::elliptic
                             : tr > 2         ? OrbitKind::positive_hyperbolic
                                              : OrbitKind::negative_hyperbolic;
        c.require(o.nondegenerate && o.cls.kind == expected, "classification at trace " + std::to_string(tr));
      }
  }
  c.require(count >= 2, "no orbits found");
  auto flat = find_orbits(models::integrable_twist(), 2);
  c.require(!flat.empty(), "no resonant circle points");
  for (const auto& o : flat) c.require(!o.nondegenerate && o.cls.kind == OrbitKind::degenerate, "circle not flagged");
  detail = std::to_string(count) + " orbits, " + std::to_string(flat.size()) + " degenerate circle points";
}

void actions(Check& c, std::string& detail) {
  auto map = models::kicked_twist(0.03);
  auto orbits = find_orbits(map, 2);
  c.require(orbits.size() == 2, "Birkhoff pair not found");
  if (orbits.size() != 2) return;
  OrbitSet ee({{orbits[0], 2}}), eh({{orbits[0], 1}, {orbits[1], 1}}), hh({{orbits[1], 2}});
  auto t1 = connecting_trace(hh, eh), t2 = connecting_trace(eh, ee);
  double whole = action_difference(map, ee, hh, t1.concatenated(t2));
  double parts = action_difference(map, eh, hh, t1) + action_difference(map, ee, eh, t2);
  c.require(std::abs(whole - parts) < 1e-8, "concatenation");
  oracle::KickedTwistOracle gen{0.03};
  double expected = 2 * (gen.orbit_action(orbits[0].points) - gen.orbit_action(orbits[1].points));
  c.require(std::abs(whole - expected) < 1e-6, "generating-function oracle");
  double worst = 0;
  for (double delta : {0.0123, 0.5, 3.0}) {
    double a = action_difference_cobordism(eh, eh, 0.0, TimeHamiltonian(Expression::constant(delta)),
                                           TimeHamiltonian::zero());
    worst = std::max(worst, std::abs(a - delta * degree(eh)) / (delta * degree(eh)));
  }
  c.require(worst < 1e-14, "cobordism identity");
  std::ostringstream os;
  os << "gap " << std::abs(whole - parts) << ", cobordism rel. error " << worst;
  detail = os.str();
}

void entropy(Check& c, std::string& detail) {
  double oracle = oracle::sigma1_sigma2inv_oracle();
  for (auto method : {EntropyMethod::dynnikov_growth, EntropyMethod::burau_radius}) {
    double v = braid_entropy(DiskBraid{3, {1, -2}}, method).value;
    c.require(std::abs(v - oracle) < 0.02 * oracle, std::string("sigma1 sigma2^-1 by ") + to_string(method));
  }
  for (const DiskBraid& b : {DiskBraid{3, {1, 2}}, DiskBraid{4, {1, 2, 3}}, DiskBraid{3, {1, 2, 1, 1, 2, 1}},
                             DiskBraid{5, {1, 2, 3, 4, 1, 2, 3, 4}}, DiskBraid{2, {1, 1, 1}}})
    c.require(braid_entropy(b).value < 1e-3, "periodic braid");
  std::mt19937 rng(3);
  const std::vector<DiskBraid> pa{{3, {1, -2}}, {4, {1, 2, -3}}, {5, {1, -2, 3, -4}}};
  double worst = 0;
  for (const auto& b : pa)
    for (int t = 0; t < 10; ++t) {
      std::vector<int> g;
      for (int i = 0; i < 6; ++i) g.push_back(int(1 + rng() % (b.strands - 1)) * (rng() % 2 ? 1 : -1));
      DiskBraid conj{b.strands, g};
      conj.word.insert(conj.word.end(), b.word.begin(), b.word.end());
      for (auto it = g.rbegin(); it != g.rend(); ++it) conj.word.push_back(-*it);
      worst = std::max(worst, std::abs(braid_entropy(conj).value - braid_entropy(b).value));
    }
  c.require(worst < 1e-6, "conjugation invariance");
  std::ostringstream os;
  os << "oracle " << oracle << ", conjugation spread " << worst;
  detail = os.str();
}

// Orbit sets of phi_H from a doubled search grid whose braid matches `target`.
bool recheck_sample(const ExperimentConfig& cfg, const SurfaceMap& base, int degree_, int winding, double amplitude,
                    const AnnularBraid& target) {
  SurfaceMap moved = flow_time_1(base, cfg.family.build(amplitude));
  OrbitSearch search = cfg.orbits.search;
  search.grid_x *= 2, search.grid_y *= 2;
  std::vector<PeriodicOrbit> found;
  for (int k : cfg.orbits.periods)
    for (auto& o : find_orbits(moved, k, search)) found.push_back(o);
  for (const auto& set : enumerate_orbit_sets(found, degree_, winding, cfg.sweep.isolation_budget)) {
    if (!set.simple() || !set.nondegenerate()) continue;
    auto b = extract_braid(set, moved, {cfg.sweep.braid_samples, 1e-9});
    if (is_isotopic(b, target, {cfg.sweep.conjugacy_budget, cfg.sweep.conjugacy_length}) == Isotopy::isotopic) return true;
  }
  return false;
}

void sweep(Check& c, std::string& detail, const fs::path& configs) {
  int below = 0, total = 0, configs_run = 0;
  double delta = 0;
  for (const auto& entry : fs::directory_iterator(configs)) {
    if (entry.path().extension() != ".json") continue;
    auto cfg = ExperimentConfig::load(entry.path().string());
    auto m = stability_sweep(cfg);
    ++configs_run;
    SurfaceMap base = cfg.map.build();
    bool demo = entry.path().filename() == "demo.json";
    if (demo) {
      delta = m.isolation.delta;
      c.require(m.degree == 4 && m.alpha.simple() && m.alpha.nondegenerate(), "demo orbit set is not a Birkhoff pair");
    }
    for (const auto& s : m.samples) {
      ++total;
      if (!s.below_threshold) continue;
      ++below;
      const std::string where = entry.path().filename().string() + " a=" + std::to_string(s.amplitude);
      c.require(s.hofer < m.isolation.delta, where + " misfiled regime");
      c.require(s.verdict == Verdict::stable, where + " verdict " + to_string(s.verdict));
      if (s.verdict != Verdict::stable || !s.orbits || !s.braid || !s.transported) continue;
      c.require(s.orbits->simple() && s.orbits->nondegenerate(), where + " orbit set not simple nondegenerate");
      c.require(is_isotopic(*s.braid, *s.transported) == Isotopy::isotopic, where + " braid not isotopic");
      c.require(std::abs(s.entropy - m.entropy_base) < 1e-3, where + " entropy moved");
      if (demo && s.hofer > 0)
        c.require(recheck_sample(cfg, base, m.degree, m.alpha.winding(), s.amplitude, *s.transported),
                  where + " doubled-grid recheck found no isotopic braid");
    }
  }
  c.require(configs_run > 0, "no shipped configs");
  c.require(delta > 0, "demo config missing");
  std::ostringstream os;
  os << configs_run << " configs, " << below << "/" << total << " samples below delta = " << delta;
  detail = os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void determinism(Check& c, std::string& detail, const fs::path& configs) {
  auto cfg = ExperimentConfig::load((configs / "demo.json").string());
  auto dir = fs::temp_directory_path() / "braidstab_acceptance";
  fs::remove_all(dir);
  auto single = cfg;
  single.sweep.workers = 1;
  write_run_directory((dir / "first").string(), cfg, stability_sweep(cfg), {"", "", 0});
  write_run_directory((dir / "second").string(), single, stability_sweep(single), {"", "", 0});
  auto a = slurp(dir / "first" / "manifest.json"), b = slurp(dir / "second" / "manifest.json");
  c.require(!a.empty() && a == b, "manifests differ");
  c.require(slurp(dir / "first" / "sweep.csv") == slurp(dir / "second" / "sweep.csv"), "CSV differs");
  detail = "manifest " + std::to_string(a.size()) + " bytes, hash " + sha256_hex(a).substr(0, 16);
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <configs directory>\n";
    return 2;
  }
  const fs::path configs = argv[1];
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<void(Check&, std::string&)> run;
  };
  const std::vector<Criterion> criteria{
      {"hyperbolic partition tables", 1, partition_tables},
      {"elliptic partitions against lattice paths", 60, elliptic_oracle},
      {"gluing parity", 1, parity},
      {"index evaluators", 1, indices},
      {"dynamics fidelity", 30, dynamics},
      {"action consistency", 10, actions},
      {"braid entropy", 30, entropy},
      {"stability sweep", 600, [&](Check& c, std::string& d) { sweep(c, d, configs); }},
      {"determinism", 600, [&](Check& c, std::string& d) { determinism(c, d, configs); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].run(check, detail);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check.require(seconds < criteria[i].limit_seconds, "over the time limit");
    bool pass = check.failures == 0;
    failed += !pass;
    std::cout << "criterion " << i + 1 << " " << criteria[i].name << ": " << (pass ? "PASS" : "FAIL") << " ("
              << std::fixed << std::setprecision(3) << seconds << " s";
    std::cout.unsetf(std::ios::fixed);
    if (!detail.empty()) std::cout << "; " << detail;
    if (!pass) std::cout << "; " << check.failures << " failures, first: " << check.first;
    std::cout << ")\n" << std::flush;
  }
  return failed == 0 ? 0 : 1;
}
