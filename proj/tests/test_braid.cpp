#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>

#include "braidstab/braid.hpp"
#include "braidstab/dynnikov.hpp"
#include "braidstab/models.hpp"
#include "braidstab/orbits.hpp"
#include "doctest.h"

using namespace braidstab;

namespace {

SurfaceMap twist(double rho) { return SurfaceMap({TwistStage{Expression::constant(rho)}}); }

OrbitSet birkhoff_set(const SurfaceMap& map) {
  auto orbits = find_orbits(map, 2);
  REQUIRE(orbits.size() == 2);
  return OrbitSet({{orbits[0], 1}, {orbits[1], 1}});
}

AnnularBraid random_braid(std::mt19937& rng, int n, int length) {
  std::uniform_int_distribution<int> letter(1, n), sign(0, 1);
  std::vector<int> w;
  for (int i = 0; i < length; ++i) w.push_back(letter(rng) * (sign(rng) ? 1 : -1));
  return AnnularBraid(n, w);
}

// Signed crossing counts between strands from raw suspension samples: a
// crossing happens whenever the lifted y-difference of two strands passes an
// integer; it is positive when the strand moving up has the larger x.
std::vector<std::vector<long>> crossing_oracle(const SurfaceMap& map, const std::vector<Point>& starts,
                                               const std::vector<int>& component, int components, int samples) {
  const int n = static_cast<int>(starts.size());
  std::vector<std::vector<Point>> path(n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l <= samples; ++l) path[j].push_back(map.partial(static_cast<double>(l) / samples, starts[j]));
  std::vector<std::vector<long>> link(components, std::vector<long>(components, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = 0; l < samples; ++l) {
        double d0 = path[i][l].y() - path[j][l].y(), d1 = path[i][l + 1].y() - path[j][l + 1].y();
        long crossings = static_cast<long>(std::floor(d1)) - static_cast<long>(std::floor(d0));
        if (crossings == 0) continue;
        bool i_up = crossings > 0;
        double xi = path[i][l].x(), xj = path[j][l].x();
        int sign = (i_up ? xi > xj : xj > xi) ? 1 : -1;
        long count = std::labs(crossings) * sign;
        int a = component[i], b = component[j];
        link[a][b] += count;
        if (a != b) link[b][a] += count;
      }
  return link;
}

}  // namespace

TEST_CASE("single fixed point of a collar rotation gives tau^w") {
  for (int w : {0, 1, 2, -1}) {
    auto map = twist(w);
    auto orbit = make_orbit(map, {0.5, 0.3}, 1, w);
    auto b = extract_braid(OrbitSet({{orbit, 1}}), map);
    CHECK(b.strands() == 1);
    CHECK(b.word() == std::vector<int>(std::abs(w), w >= 0 ? 1 : -1));
    CHECK(b.total_winding() == w);
  }
}

TEST_CASE("two fixed points without exchange give the empty word") {
  auto map = twist(0.0);
  auto a = make_orbit(map, {0.3, 0.2}, 1, 0), c = make_orbit(map, {0.6, 0.7}, 1, 0);
  auto b = extract_braid(OrbitSet({{a, 1}, {c, 1}}), map);
  CHECK(b.word().empty());
  CHECK(b.permutation() == std::vector<int>{0, 1});
}

TEST_CASE("extraction requires a simple orbit set") {
  auto map = twist(0.0);
  auto a = make_orbit(map, {0.3, 0.2}, 1, 0);
  CHECK_THROWS_AS(extract_braid(OrbitSet({{a, 2}}), map), std::invalid_argument);
}

TEST_CASE("Birkhoff pair braid: two 2-cycles and oracle linking") {
  auto map = models::kicked_twist(0.02);
  auto alpha = birkhoff_set(map);
  auto b = extract_braid(alpha, map);
  CHECK(b.strands() == 4);
  CHECK(b.total_winding() == 2);
  auto inv = invariants(b);
  CHECK(inv.cycle_type == std::vector<int>{2, 2});

  std::vector<Point> starts;
  std::vector<int> component;
  for (int c = 0; c < 2; ++c)
    for (const auto& p : alpha.entries()[c].orbit.points) {
      starts.push_back(p);
      component.push_back(c);
    }
  auto oracle = crossing_oracle(map, starts, component, 2, 2 * ExtractionSettings{}.samples);
  auto swapped = oracle;
  std::swap(swapped[0], swapped[1]);
  for (auto& row : swapped) std::swap(row[0], row[1]);
  CHECK((inv.linking == oracle || inv.linking == swapped));
}

TEST_CASE("differential twist braid linking matches the crossing oracle") {
  SurfaceMap map({TwistStage{Expression::parse("4 * x")}});
  auto slow = make_orbit(map, {0.125, 0.1}, 2, 1), fast = make_orbit(map, {0.5, 0.3}, 1, 2);
  OrbitSet alpha({{slow, 1}, {fast, 1}});
  auto b = extract_braid(alpha, map);
  auto inv = invariants(b);
  CHECK(b.total_winding() == 3);
  CHECK(inv.cycle_type == std::vector<int>{1, 2});
  std::vector<Point> starts;
  std::vector<int> component;
  for (int c = 0; c < 2; ++c)
    for (const auto& p : alpha.entries()[c].orbit.points) {
      starts.push_back(p);
      component.push_back(alpha.entries()[c].orbit.period == 1 ? 0 : 1);
    }
  auto oracle = crossing_oracle(map, starts, component, 2, 2 * ExtractionSettings{}.samples);
  CHECK(oracle[0][1] != 0);
  CHECK(inv.linking == oracle);
}

TEST_CASE("invariants of small braids") {
  auto empty = invariants(AnnularBraid(3, {}));
  CHECK(empty.cycle_type == std::vector<int>{1, 1, 1});
  CHECK(empty.exponent_sum == 0);
  CHECK(empty.tau_exponent == 0);
  for (const auto& row : empty.linking)
    for (long v : row) CHECK(v == 0);

  auto s1 = invariants(AnnularBraid(2, {1}));
  CHECK(s1.exponent_sum == 1);
  CHECK(s1.cycle_type == std::vector<int>{2});
  CHECK(s1.linking == std::vector<std::vector<long>>{{1}});
}

TEST_CASE("invariants survive 1000 random conjugations") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + trial % 3;
    auto w = random_braid(rng, n, 6);
    auto g = random_braid(rng, n, 4);
    CHECK(invariants(g * w * g.inverse()) == invariants(w));
  }
}

TEST_CASE("isotopy decisions") {
  AnnularBraid s1(2, {1}), s1inv(2, {-1}), free(2, {1, -1}), empty(2, {});
  CHECK(is_isotopic(s1, s1) == Isotopy::isotopic);
  CHECK(is_isotopic(free, empty) == Isotopy::isotopic);
  CHECK(is_isotopic(s1, s1inv) == Isotopy::not_isotopic);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto w = random_braid(rng, 3, 5), g = random_braid(rng, 3, 2);
    auto c = g * w * g.inverse();
    CHECK(is_isotopic(w, c) == Isotopy::isotopic);
    CHECK(is_isotopic(c, w) == Isotopy::isotopic);
  }
  CHECK_THROWS_AS(is_isotopic(AnnularBraid(2, {}), AnnularBraid(3, {})), std::invalid_argument);
}

TEST_CASE("search budget exhaustion is reported, not silently false") {
  // Same invariants, different conjugacy classes would need the full search; a
  // budget of one conjugator cannot settle a long conjugation.
  AnnularBraid w(4, {1, 2, -3, 4, 2});
  AnnularBraid g(4, {3, 4, -1, 2, 2, -3});
  ConjugacySearch tiny{1, 1};
  auto r = is_isotopic(w, g * w * g.inverse(), tiny);
  CHECK(r != Isotopy::not_isotopic);
}

TEST_CASE("doubling the sampling gives an isotopic braid") {
  auto map = models::kicked_twist(0.02);
  auto alpha = birkhoff_set(map);
  auto coarse = extract_braid(alpha, map, {256, 1e-9});
  auto fine = extract_braid(alpha, map, {512, 1e-9});
  CHECK(is_isotopic(coarse, fine) == Isotopy::isotopic);
}

TEST_CASE("disk embedding respects the annular relations") {
  for (int n = 2; n <= 5; ++n) {
    AnnularBraid t(n, {n});
    std::vector<int> tn(n, n);
    for (int i = 1; i < n; ++i) {
      AnnularBraid s(n, {i});
      CHECK(same_element(AnnularBraid(n, tn) * s, s * AnnularBraid(n, tn)));
      if (i + 1 < n) {
        CHECK(same_element(t.inverse() * s * t, AnnularBraid(n, {i + 1})));
        CHECK(same_element(AnnularBraid(n, {i, i + 1, i}), AnnularBraid(n, {i + 1, i, i + 1})));
      }
    }
    // tau^n is the full twist of the n + 1 punctured disk.
    auto disk = disk_word(AnnularBraid(n, tn));
    auto d = Dynnikov<long long>::standard(n + 1);
    for (int l : disk) d.apply(std::abs(l), l > 0 ? 1 : -1);
    CHECK(d == Dynnikov<long long>::standard(n + 1));
    long sum = 0;
    for (int l : disk) sum += l > 0 ? 1 : -1;
    CHECK(sum == static_cast<long>(n) * (n + 1));
    // Inverse letters undo their generators.
    for (int l = 1; l <= n; ++l) CHECK(same_element(AnnularBraid(n, {l, -l}), AnnularBraid(n, {})));
  }
}

TEST_CASE("reading model annular motions reproduces the generators") {
  const int n = 4, samples = 200;
  auto slot = [&](int k) { return (k + 0.5) / n; };
  for (int i = 1; i < n; ++i)
    for (int sign : {1, -1}) {
      std::vector<std::vector<Eigen::Vector2d>> paths(n);
      for (int l = 0; l <= samples; ++l) {
        double u = static_cast<double>(l) / samples, bump = 0.2 * std::sin(3.14159265358979 * u);
        for (int k = 0; k < n; ++k) {
          double y = slot(k), x = 0.5;
          if (k == i - 1) y += u / n, x += sign * bump;
          if (k == i) y -= u / n, x -= sign * bump;
          paths[k].emplace_back(y, x);
        }
      }
      CHECK(read_motion(paths, true, true).word == std::vector<int>{sign * i});
    }
  for (int sign : {1, -1}) {
    std::vector<std::vector<Eigen::Vector2d>> paths(n);
    for (int l = 0; l <= 50; ++l)
      for (int k = 0; k < n; ++k) paths[k].emplace_back(slot(k) + sign * l / 50.0 / n, 0.5);
    CHECK(read_motion(paths, true, true).word == std::vector<int>{sign * n});
  }
}

TEST_CASE("transport by trivial Hamiltonians leaves the braid unchanged") {
  auto map = models::kicked_twist(0.02);
  auto b = extract_braid(birkhoff_set(map), map);
  for (const char* h : {"0", "0.37"}) {
    auto t = transport_braid(b, TimeHamiltonian(Expression::parse(h)));
    CHECK(t.word() == b.word());
  }
}

TEST_CASE("transport by a rigid rotation keeps the invariants") {
  auto map = models::kicked_twist(0.02);
  auto b = extract_braid(birkhoff_set(map), map);
  auto t = transport_braid(b, TimeHamiltonian(Expression::parse("0.3 * x")));
  CHECK(invariants(t) == invariants(b));
}

TEST_CASE("transport there and back is isotopic to the start") {
  auto map = models::kicked_twist(0.02);
  auto b = extract_braid(birkhoff_set(map), map);
  TimeHamiltonian h(Expression::parse("0.01 * sin(2 * pi * y) * x * x * (1 - x) * (1 - x)"));
  auto there = transport_braid(b, h);
  auto back = transport_braid(there, h.reversed());
  CHECK(is_isotopic(back, b) == Isotopy::isotopic);
}

TEST_CASE("braid words round-trip through the integer encoding") {
  AnnularBraid b(3, {1, -2, 3, -3, 3});
  CHECK(AnnularBraid::decode(3, b.encoded()).word() == b.word());
  CHECK(b.to_string() == "s1 s2^-1 t t^-1 t");
}
