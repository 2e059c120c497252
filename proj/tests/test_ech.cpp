#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "braidstab/ech.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace braidstab;
using namespace oracle;

namespace {

// CZ oracle: follow the Krein-positive eigenvalue of P R(2 pi k theta s) P^-1 and
// count its full turns.
int cz_by_eigenvalue_tracking(double theta, int k) {
  Eigen::Matrix2d p;
  p << 1.0, 0.7, 0.0, 1.0;
  Eigen::Matrix2d j;
  j << 0, -1, 1, 0;
  const int steps = 4000;
  double total = 0, prev = 0;
  for (int l = 1; l <= steps; ++l) {
    double a = 2 * std::numbers::pi * k * theta * l / steps;
    Eigen::Matrix2d r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    Eigen::EigenSolver<Eigen::Matrix2d> es(p * r * p.inverse());
    // At eigenvalue -1 the Krein sign is undefined; keep the previous argument.
    double arg = prev;
    for (int e = 0; e < 2; ++e) {
      Eigen::Vector2cd v = es.eigenvectors().col(e);
      std::complex<double> krein = v.adjoint() * j.cast<std::complex<double>>() * v;
      if (krein.imag() > 1e-9) arg = std::arg(es.eigenvalues()(e));
    }
    if (l == 1) total = arg;
    else total += std::remainder(arg - prev, 2 * std::numbers::pi);
    prev = arg;
  }
  return 2 * static_cast<int>(std::floor(total / (2 * std::numbers::pi))) + 1;
}

}  // namespace

TEST_CASE("hyperbolic partitions") {
  CHECK(positive_partition(OrbitSymbol::positive_hyperbolic(), 4) == Partition{1, 1, 1, 1});
  CHECK(negative_partition(OrbitSymbol::positive_hyperbolic(), 4) == Partition{1, 1, 1, 1});
  CHECK(positive_partition(OrbitSymbol::negative_hyperbolic(), 5) == Partition{2, 2, 1});
  CHECK(negative_partition(OrbitSymbol::negative_hyperbolic(), 5) == Partition{2, 2, 1});
  CHECK(positive_partition(OrbitSymbol::negative_hyperbolic(), 4) == Partition{2, 2});
}

TEST_CASE("elliptic partition examples") {
  CHECK(positive_partition(OrbitSymbol::elliptic(0.1), 2) == Partition{1, 1});
  CHECK(negative_partition(OrbitSymbol::elliptic(0.1), 2) == Partition{2});
  CHECK(positive_partition(OrbitSymbol::elliptic(0.9), 2) == Partition{2});
  CHECK(negative_partition(OrbitSymbol::elliptic(0.9), 2) == Partition{1, 1});
  CHECK_THROWS_AS(positive_partition(OrbitSymbol::elliptic(0.5), 2), DegeneracyError);
  CHECK_THROWS_AS(negative_partition(OrbitSymbol::elliptic(1.0 / 3), 4), DegeneracyError);
}

TEST_CASE("elliptic partitions match brute-force lattice paths") {
  for (int m = 1; m <= 10; ++m)
    for (int i = 0; i < 1000; ++i) {
      double theta = (i + 0.5) / 1000;
      auto s = OrbitSymbol::elliptic(theta);
      CHECK(positive_partition(s, m) == oracle_partition(theta, m, true));
      CHECK(negative_partition(s, m) == oracle_partition(theta, m, false));
    }
}

TEST_CASE("partition sums and shear invariance") {
  const double golden = (std::sqrt(5.0) - 1) / 2;
  for (int m = 1; m <= 64; ++m)
    for (auto s : {OrbitSymbol::elliptic(golden), OrbitSymbol::elliptic(-3 + std::sqrt(2.0)),
                   OrbitSymbol::positive_hyperbolic(2), OrbitSymbol::negative_hyperbolic(-1)}) {
      auto plus = positive_partition(s, m), minus = negative_partition(s, m);
      CHECK(std::accumulate(plus.begin(), plus.end(), 0) == m);
      CHECK(std::accumulate(minus.begin(), minus.end(), 0) == m);
      CHECK(std::is_sorted(plus.rbegin(), plus.rend()));
      if (s.kind == OrbitKind::elliptic) {
        auto shifted = s;
        shifted.theta += 1;
        CHECK(positive_partition(shifted, m) == plus);
        CHECK(negative_partition(shifted, m) == minus);
      }
    }
}

TEST_CASE("positive and negative elliptic partitions are disjoint") {
  CHECK(partitions_disjoint(OrbitSymbol::elliptic(0.1), 2) == Disjointness::disjoint);
  CHECK(partitions_disjoint(OrbitSymbol::elliptic(0.1), 1) == Disjointness::not_applicable);
  const double golden = (std::sqrt(5.0) - 1) / 2;
  for (int m = 2; m <= 10; ++m) {
    CHECK(partitions_disjoint(OrbitSymbol::elliptic(golden), m) == Disjointness::disjoint);
    for (int i = 0; i < 1000; ++i)
      CHECK(partitions_disjoint(OrbitSymbol::elliptic((i + 0.5) / 1000), m) == Disjointness::disjoint);
  }
}

TEST_CASE("Conley-Zehnder indices") {
  CHECK(conley_zehnder(OrbitSymbol::elliptic(0.3), 4) == 3);
  CHECK(conley_zehnder(OrbitSymbol::elliptic(0.3), 1) == 1);
  for (int k = 1; k <= 6; ++k) CHECK(conley_zehnder(OrbitSymbol::positive_hyperbolic(0), k) == 0);
  CHECK(conley_zehnder(OrbitSymbol::negative_hyperbolic(3), 2) == 6);
  CHECK_THROWS_AS(conley_zehnder(OrbitSymbol::elliptic(0.25), 4), DegeneracyError);
  for (double theta : {0.3, 0.71, -0.4, -0.37, 1.37, -2.23})
    for (int k = 1; k <= 4; ++k) CHECK(conley_zehnder(OrbitSymbol::elliptic(theta), k) == cz_by_eigenvalue_tracking(theta, k));
}

TEST_CASE("Fredholm index") {
  CHECK(fredholm_index({0, 0, {1}, {1}, 0}) == 0);
  CHECK(fredholm_index({0, 0, {1}, {0}, 0}) == 1);
  CHECK(fredholm_index({0, 0, {1}, {0, 0}, -1}) == 2);
}

TEST_CASE("ECH index") {
  const double golden = (std::sqrt(5.0) - 1) / 2;
  std::vector<std::pair<OrbitSymbol, int>> alpha{{OrbitSymbol::elliptic(golden), 3}, {OrbitSymbol::negative_hyperbolic(1), 2}};
  CHECK(ech_index(trivial_class_data(alpha, alpha)) == 0);
  CHECK(ech_index({1, 0, {3}, {1}, 0}) == 3);

  // Additivity and linearity on generated data.
  std::vector<OrbitSymbol> pool{OrbitSymbol::elliptic(0.3), OrbitSymbol::elliptic(1.7), OrbitSymbol::positive_hyperbolic(2),
                                OrbitSymbol::negative_hyperbolic(-1)};
  for (int trial = 0; trial < 200; ++trial) {
    auto pick = [&](int seed) {
      std::vector<std::pair<OrbitSymbol, int>> set;
      for (int e = 0; e < 1 + seed % 3; ++e) set.emplace_back(pool[(seed + e) % pool.size()], 1 + (seed / 3 + e) % 3);
      return set;
    };
    auto a = pick(trial), b = pick(trial * 7 + 1), c = pick(trial * 13 + 5);
    auto z = trivial_class_data(a, b), w = trivial_class_data(b, c), zw = trivial_class_data(a, c);
    z.c_tau = trial % 5 - 2, z.q_tau = trial % 7 - 3;
    w.c_tau = trial % 3, w.q_tau = -(trial % 4);
    zw.c_tau = z.c_tau + w.c_tau, zw.q_tau = z.q_tau + w.q_tau;
    CHECK(ech_index(z) + ech_index(w) == ech_index(zw));
    auto doubled = z;
    doubled.c_tau *= 2, doubled.q_tau *= 2;
    doubled.cz_plus.insert(doubled.cz_plus.end(), z.cz_plus.begin(), z.cz_plus.end());
    doubled.cz_minus.insert(doubled.cz_minus.end(), z.cz_minus.begin(), z.cz_minus.end());
    CHECK(ech_index(doubled) == 2 * ech_index(z));
    doubled.euler = 2 * z.euler;
    CHECK(fredholm_index(doubled) == 2 * fredholm_index(z));
  }
}

TEST_CASE("gluing counts") {
  CHECK(gluing_count({{OrbitSymbol::elliptic(0.3), 1}}).count == 1);
  CHECK(gluing_count({{OrbitSymbol::elliptic(0.3), 1}}).odd);
  auto ph = gluing_count({{OrbitSymbol::positive_hyperbolic(), 3}});
  CHECK(ph.count == 6);
  CHECK_FALSE(ph.odd);
  auto nh = gluing_count({{OrbitSymbol::negative_hyperbolic(), 5}});
  CHECK(nh.count == 8);
  CHECK_FALSE(nh.odd);
  CHECK(gluing_count({{OrbitSymbol::elliptic(0.3), 2}}).count == 0);
  CHECK(gluing_count({{OrbitSymbol::positive_hyperbolic(), 30}}).count ==
        boost::multiprecision::cpp_int("265252859812191058636308480000000"));
}

TEST_CASE("gluing parity is odd exactly for simple orbit sets") {
  std::vector<OrbitSymbol> kinds{OrbitSymbol::elliptic(0.3), OrbitSymbol::positive_hyperbolic(), OrbitSymbol::negative_hyperbolic()};
  for (int entries = 1; entries <= 4; ++entries) {
    int combos = 1;
    for (int e = 0; e < entries; ++e) combos *= 15;
    for (int c = 0; c < combos; ++c) {
      std::vector<std::pair<OrbitSymbol, int>> set;
      bool simple = true;
      for (int e = 0, code = c; e < entries; ++e, code /= 15) {
        int m = 1 + code % 15 % 5;
        set.emplace_back(kinds[code % 15 / 5], m);
        simple = simple && m == 1;
      }
      CHECK(gluing_count(set).odd == simple);
    }
  }
}

TEST_CASE("CSV tables") {
  auto table = partition_table({OrbitSymbol::elliptic(0.1)}, 2);
  CHECK(table == "kind,theta,r,m,positive,negative,disjoint\nelliptic,0.1,,1,1,1,not-applicable\nelliptic,0.1,,2,1 1,2,disjoint\n");
  auto cz = cz_table({OrbitSymbol::negative_hyperbolic(1)}, 2);
  CHECK(cz == "kind,theta,r,k,cz\nnegative_hyperbolic,,1,1,1\nnegative_hyperbolic,,1,2,2\n");
}
