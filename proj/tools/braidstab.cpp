// braidstab: command-line front end for partitions, indices, orbits, braids,
// entropy, action spectra and the stability sweep.
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "braidstab/config.hpp"
#include "braidstab/ech.hpp"
#include "braidstab/entropy.hpp"
#include "braidstab/io.hpp"
#include "braidstab/stability.hpp"

using namespace braidstab;
using nlohmann::json;

namespace {

std::string tuple(const Partition& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << ')';
  return os.str();
}

OrbitSymbol symbol(const std::string& kind, double theta, int r) {
  if (kind == "ell" || kind == "elliptic") return OrbitSymbol::elliptic(theta);
  if (kind == "pos-hyp") return OrbitSymbol::positive_hyperbolic(r);
  if (kind == "neg-hyp") return OrbitSymbol::negative_hyperbolic(r);
  throw ConfigError("--kind must be ell, pos-hyp or neg-hyp");
}

std::string utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Braid stability experiments on area-preserving annulus maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  std::string kind = "ell", config_path, out_path, word_a, word_b, word, method = "dynnikov_growth";
  double theta = 0.0;
  int m = 1, r = -1, table = 0, strands = 1, iterations = 64, workers = 0;
  long c_tau = 0, q_tau = 0;
  std::optional<long> euler;
  std::vector<long> cz_plus, cz_minus;
  bool disk = false;

  auto* partitions = app.add_subcommand("partitions", "ECH partitions p+(m) and p-(m)");
  partitions->add_option("--kind", kind, "ell, pos-hyp or neg-hyp")->required();
  partitions->add_option("--theta", theta, "rotation number (elliptic)");
  partitions->add_option("--r", r, "eigenvector winding in half turns (hyperbolic)");
  partitions->add_option("--m", m, "multiplicity")->check(CLI::PositiveNumber);
  partitions->add_option("--table", table, "print a CSV table for m = 1..N instead")->check(CLI::NonNegativeNumber);

  auto* index = app.add_subcommand("index", "ECH index, or Fredholm index when --euler is given");
  index->add_option("--c-tau", c_tau);
  index->add_option("--q-tau", q_tau);
  index->add_option("--cz-plus", cz_plus)->expected(0, -1);
  index->add_option("--cz-minus", cz_minus)->expected(0, -1);
  index->add_option("--euler", euler, "Euler characteristic of the curve");

  auto* orbits = app.add_subcommand("orbits", "periodic orbits of the configured map");
  auto* braid = app.add_subcommand("braid", "braid of the configured orbit set");
  auto* spectrum = app.add_subcommand("spectrum", "orbit actions and the isolation gap");
  auto* sweep = app.add_subcommand("sweep", "braid stability sweep over the Hamiltonian family");
  for (auto* sub : {orbits, braid, spectrum, sweep}) sub->add_option("--config", config_path)->required();
  for (auto* sub : {orbits, braid, spectrum}) sub->add_option("--out", out_path, "write JSON here");
  sweep->add_option("--out", out_path, "run directory")->required();
  sweep->add_option("--workers", workers, "worker threads (overrides config and BRAIDSTAB_WORKERS)");

  auto* compare = app.add_subcommand("compare", "decide whether two annular braids are isotopic");
  compare->add_option("--strands", strands)->required()->check(CLI::PositiveNumber);
  compare->add_option("--a", word_a, "word, e.g. \"s1 s2^-1 t\"")->required();
  compare->add_option("--b", word_b)->required();

  auto* entropy = app.add_subcommand("entropy", "braid entropy estimate");
  entropy->add_option("--strands", strands)->required()->check(CLI::PositiveNumber);
  entropy->add_option("--word", word, "annular word, or signed sigma indices with --disk")->required();
  entropy->add_flag("--disk", disk, "read --word as a disk braid");
  entropy->add_option("--method", method, "dynnikov_growth or burau_radius");
  entropy->add_option("--iterations", iterations)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*partitions) {
      auto s = symbol(kind, theta, r >= 0 || kind != "neg-hyp" ? std::max(r, 0) : 1);
      if (table > 0) {
        std::cout << partition_table({s}, table);
      } else {
        auto plus = positive_partition(s, m), minus = negative_partition(s, m);
        if (plus == minus) std::cout << tuple(plus) << '\n';
        else std::cout << "p+ " << tuple(plus) << "\np- " << tuple(minus) << '\n';
      }
    } else if (*index) {
      RelClassData d{c_tau, q_tau, cz_plus, cz_minus, euler.value_or(0)};
      std::cout << (euler ? fredholm_index(d) : ech_index(d)) << '\n';
    } else if (*compare) {
      auto a = AnnularBraid::parse(strands, word_a), b = AnnularBraid::parse(strands, word_b);
      std::cout << to_string(is_isotopic(a, b)) << '\n';
    } else if (*entropy) {
      EntropyEstimate e;
      if (disk) {
        DiskBraid b{strands, {}};
        std::istringstream in(word);
        for (int l; in >> l;) b.word.push_back(l);
        e = braid_entropy(b, entropy_method(method), iterations);
      } else {
        e = braid_entropy(AnnularBraid::parse(strands, word), entropy_method(method), iterations);
      }
      std::cout << std::setprecision(10) << e.value << ' ' << to_string(e.method) << (e.periodic ? " periodic" : "") << '\n';
    } else {
      auto cfg = ExperimentConfig::load(config_path);
      if (*sweep) {
        if (workers > 0) cfg.sweep.workers = workers;
        RunTiming timing;
        timing.started = utc_now();
        auto t0 = std::chrono::steady_clock::now();
        auto manifest = stability_sweep(cfg);
        timing.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        timing.finished = utc_now();
        write_run_directory(out_path, cfg, manifest, timing);
        std::cout << manifest.csv();
        std::cout << "delta " << manifest.isolation.delta << ", manifest " << out_path << "/manifest.json\n";
        return 0;
      }
      auto base = prepare_base(cfg);
      if (*orbits) {
        json list = json::array();
        std::cout << "period,winding,kind,x,y,residual,trace\n";
        for (const auto& o : base.orbits) {
          list.push_back(orbit_to_json(o));
          std::cout << o.period << ',' << o.winding << ',' << to_string(o.cls.kind) << ',' << std::setprecision(12)
                    << o.points[0].x() << ',' << o.points[0].y() << ',' << o.residual << ',' << o.monodromy.trace() << '\n';
        }
        write_json(out_path, list);
      } else if (*braid) {
        auto b = extract_braid(base.alpha, base.map, {cfg.sweep.braid_samples, 1e-9});
        auto inv = invariants(b);
        std::cout << b.to_string() << '\n' << "strands " << b.strands() << ", winding " << b.total_winding()
                  << ", exponent sum " << inv.exponent_sum << '\n';
        write_json(out_path, braid_to_json(b));
      } else if (*spectrum) {
        std::cout << "period,winding,kind,action\n";
        json list = json::array();
        for (const auto& o : base.orbits) {
          double a = primitive_action(base.map, OrbitSet({{o, 1}}));
          std::cout << o.period << ',' << o.winding << ',' << to_string(o.cls.kind) << ',' << std::setprecision(12) << a << '\n';
          list.push_back({{"orbit", orbit_to_json(o)}, {"action", a}});
        }
        IsolationSearch iso{cfg.orbits.search, cfg.sweep.isolation_budget, cfg.sweep.safety_margin};
        auto gap = isolation_gap(base.map, base.alpha, iso);
        std::cout << "epsilon " << gap.epsilon << ", delta " << gap.delta << ", competitors " << gap.competitors << '\n';
        write_json(out_path, {{"orbits", list}, {"epsilon", gap.epsilon}, {"delta", gap.delta}});
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
