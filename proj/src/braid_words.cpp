#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "braidstab/braid.hpp"
#include "braidstab/dynnikov.hpp"

namespace braidstab {

using BigInt = boost::multiprecision::cpp_int;

namespace {

// Model motions of the annular generators in the plane: slot k rests at angle
// (k + 1/2)/n + offset on the circle of radius 1.5 around the core at 0.
std::vector<std::vector<int>> simulate_generators(int n) {
  const double offset = 0.0123;
  const int samples = 400 * std::max(1, n);
  auto angle = [&](int k) { return (k + 0.5) / n + offset; };
  auto at = [](double radius, double turns) {
    return Eigen::Vector2d(radius * std::cos(2 * std::numbers::pi * turns), radius * std::sin(2 * std::numbers::pi * turns));
  };
  auto read = [&](auto&& position) {
    std::vector<std::vector<Eigen::Vector2d>> paths(n + 1);
    for (int l = 0; l <= samples; ++l) {
      double u = static_cast<double>(l) / samples;
      paths[0].emplace_back(0.0, 0.0);
      for (int k = 0; k < n; ++k) paths[k + 1].push_back(position(k, u));
    }
    return read_motion(paths, false, false, 1e-9).word;
  };
  // Letter code c in [-n, n] \ {0} is stored at index c + n.
  std::vector<std::vector<int>> table(2 * n + 1);
  for (int k = 1; k < n; ++k)
    for (int sign : {1, -1}) {
      table[sign * k + n] = read([&](int j, double u) {
        double a = angle(k - 1), b = angle(k), bulge = 0.3 * std::sin(std::numbers::pi * u);
        if (j == k - 1) return at(1.5 + sign * bulge, a + (b - a) * u);
        if (j == k) return at(1.5 - sign * bulge, b - (b - a) * u);
        return at(1.5, angle(j));
      });
    }
  for (int sign : {1, -1})
    table[sign * n + n] = read([&](int j, double u) { return at(1.5, angle(j) + sign * u / n); });
  return table;
}

template <class T>
bool act(Dynnikov<T>& d, const std::vector<int>& disk, double limit) {
  for (int l : disk) {
    d.apply(std::abs(l), l > 0 ? 1 : -1);
    if (limit > 0) {
      for (const auto& v : d.a())
        if (std::abs(static_cast<double>(v)) > limit) return false;
      for (const auto& v : d.b())
        if (std::abs(static_cast<double>(v)) > limit) return false;
    }
  }
  return true;
}

template <class T>
std::string key_of(const Dynnikov<T>& d) {
  std::ostringstream os;
  for (const auto& v : d.a()) os << v << ',';
  os << '|';
  for (const auto& v : d.b()) os << v << ',';
  return os.str();
}

// Image of the standard curve system under the disk word, as a string.
std::string action_key(const std::vector<int>& disk, int punctures) {
  if (punctures <= 2) return "";
  auto d = Dynnikov<long long>::standard(punctures);
  if (act(d, disk, 1e17)) return key_of(d);
  auto big = Dynnikov<BigInt>::standard(punctures);
  act(big, disk, 0.0);
  return key_of(big);
}

long exponent_sum(const std::vector<int>& disk) {
  long e = 0;
  for (int l : disk) e += l > 0 ? 1 : -1;
  return e;
}

using BigMatrix = std::vector<std::vector<BigInt>>;

BigMatrix multiply(const BigMatrix& a, const BigMatrix& b) {
  const std::size_t n = a.size();
  BigMatrix c(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// Reduced Burau matrix at t = -1 of a disk word on `punctures` strands.
BigMatrix burau_minus_one(const std::vector<int>& disk, int punctures) {
  const int n = punctures - 1;
  BigMatrix m(n, std::vector<BigInt>(n));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  for (int l : disk) {
    int i = std::abs(l) - 1;  // 0-based generator index
    bool inv = l < 0;
    // Right multiplication by the generator matrix only mixes columns i-1, i, i+1.
    for (int r = 0; r < n; ++r) {
      BigInt left = i > 0 ? m[r][i - 1] : BigInt(0), mid = m[r][i], right = i + 1 < n ? m[r][i + 1] : BigInt(0);
      if (n == 1) continue;  // 1x1 block is [1] at t = -1
      if (!inv) {
        // columns: (i-1) unchanged; i <- -left + mid + right; (i+1) unchanged
        m[r][i] = (i > 0 ? -left : BigInt(0)) + mid + (i + 1 < n ? right : BigInt(0));
      } else {
        m[r][i] = (i > 0 ? left : BigInt(0)) + mid - (i + 1 < n ? right : BigInt(0));
      }
    }
  }
  return m;
}

}  // namespace

const std::vector<int>& disk_letter(int strands, int letter) {
  static std::mutex mutex;
  static std::map<int, std::vector<std::vector<int>>> cache;
  if (letter == 0 || std::abs(letter) > strands) throw std::invalid_argument("letter out of range");
  std::lock_guard lock(mutex);
  auto it = cache.find(strands);
  if (it == cache.end()) it = cache.emplace(strands, simulate_generators(strands)).first;
  return it->second[letter + strands];
}

std::vector<int> disk_word(const AnnularBraid& b) {
  std::vector<int> out;
  for (int l : b.word()) {
    const auto& w = disk_letter(b.strands(), l);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

bool same_element(const AnnularBraid& a, const AnnularBraid& b) {
  if (a.strands() != b.strands()) return false;
  auto da = disk_word(a), db = disk_word(b);
  return exponent_sum(da) == exponent_sum(db) && action_key(da, a.strands() + 1) == action_key(db, b.strands() + 1);
}

BraidInvariants invariants(const AnnularBraid& b) {
  BraidInvariants inv;
  const int n = b.strands();
  const auto& perm = b.permutation();
  std::vector<int> cycle(n, -1);
  std::vector<int> length, winding;
  for (int s = 0; s < n; ++s) {
    if (cycle[s] >= 0) continue;
    int c = static_cast<int>(length.size()), len = 0, w = 0;
    for (int x = s; cycle[x] < 0; x = perm[x]) {
      cycle[x] = c;
      ++len;
      w += b.strand_winding()[x];
    }
    length.push_back(len);
    winding.push_back(w);
  }
  const int k = static_cast<int>(length.size());
  std::vector<std::vector<long>> link(k, std::vector<long>(k, 0));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int l : b.word()) {
    int g = std::abs(l);
    if (g == n) {
      if (l > 0) std::rotate(order.begin(), order.end() - 1, order.end());
      else std::rotate(order.begin(), order.begin() + 1, order.end());
      inv.tau_exponent += l > 0 ? 1 : -1;
      continue;
    }
    int sign = l > 0 ? 1 : -1;
    inv.exponent_sum += sign;
    int c1 = cycle[order[g - 1]], c2 = cycle[order[g]];
    link[c1][c2] += sign;
    if (c1 != c2) link[c2][c1] += sign;
    std::swap(order[g - 1], order[g]);
  }
  for (int c = 0; c < k; ++c) {
    inv.cycle_type.push_back(length[c]);
    inv.windings.emplace_back(length[c], winding[c]);
  }
  std::sort(inv.cycle_type.begin(), inv.cycle_type.end());
  std::sort(inv.windings.begin(), inv.windings.end());

  // Canonical linking matrix: components sorted by (length, winding); ties
  // resolved by the lexicographically smallest relabelling when feasible.
  std::vector<int> comp(k);
  std::iota(comp.begin(), comp.end(), 0);
  auto base_less = [&](int x, int y) {
    return std::tie(length[x], winding[x], link[x][x]) < std::tie(length[y], winding[y], link[y][y]);
  };
  std::sort(comp.begin(), comp.end(), base_less);
  std::vector<std::pair<int, int>> groups;
  double combos = 1;
  for (int i = 0; i < k;) {
    int j = i;
    while (j < k && !base_less(comp[i], comp[j]) && !base_less(comp[j], comp[i])) ++j;
    groups.emplace_back(i, j);
    for (int f = 2; f <= j - i; ++f) combos *= f;
    i = j;
  }
  auto flatten = [&](const std::vector<int>& p) {
    std::vector<long> flat;
    for (int x : p)
      for (int y : p) flat.push_back(link[x][y]);
    return flat;
  };
  std::vector<int> best = comp;
  if (combos <= 5040) {
    auto best_flat = flatten(best);
    std::vector<int> cur = comp;
    auto rec = [&](auto&& self, std::size_t g) -> void {
      if (g == groups.size()) {
        auto f = flatten(cur);
        if (f < best_flat) {
          best_flat = f;
          best = cur;
        }
        return;
      }
      auto [lo, hi] = groups[g];
      std::sort(cur.begin() + lo, cur.begin() + hi);
      do self(self, g + 1);
      while (std::next_permutation(cur.begin() + lo, cur.begin() + hi));
    };
    rec(rec, 0);
  } else {
    for (auto [lo, hi] : groups)
      std::sort(best.begin() + lo, best.begin() + hi, [&](int x, int y) {
        auto rx = link[x], ry = link[y];
        std::sort(rx.begin(), rx.end());
        std::sort(ry.begin(), ry.end());
        return rx < ry;
      });
  }
  for (int x : best) {
    std::vector<long> row;
    for (int y : best) row.push_back(link[x][y]);
    inv.linking.push_back(row);
  }

  auto disk = disk_word(b);
  BigMatrix m = burau_minus_one(disk, n + 1), power = m;
  for (int p = 1; p <= n; ++p) {
    BigInt tr = 0;
    for (int i = 0; i < n; ++i) tr += power[i][i];
    inv.burau_traces.push_back(tr.str());
    if (p < n) power = multiply(power, m);
  }
  return inv;
}

Isotopy is_isotopic(const AnnularBraid& a, const AnnularBraid& b, const ConjugacySearch& s) {
  if (a.strands() != b.strands()) throw std::invalid_argument("braids have different strand counts");
  if (!(invariants(a) == invariants(b))) return Isotopy::not_isotopic;
  const int n = a.strands();
  const int punctures = n + 1;
  auto target = action_key(disk_word(b), punctures);
  auto wa = disk_word(a);
  if (exponent_sum(wa) == exponent_sum(disk_word(b)) && action_key(wa, punctures) == target) return Isotopy::isotopic;
  if (n == 1) return Isotopy::isotopic;  // abelian: the invariants decide
  const auto& word = a.word();
  for (std::size_t r = 1; r < word.size(); ++r) {
    std::vector<int> rotated(word.begin() + r, word.end());
    rotated.insert(rotated.end(), word.begin(), word.begin() + r);
    if (action_key(disk_word(AnnularBraid(n, rotated)), punctures) == target) return Isotopy::isotopic;
  }
  // Breadth-first search over conjugators g, testing g a g^{-1} = b.
  std::vector<int> gens;
  for (int i = 1; i < n; ++i) gens.insert(gens.end(), {i, -i});
  gens.insert(gens.end(), {n, -n});
  std::set<std::string> seen{action_key({}, punctures) + "#0"};
  std::deque<std::vector<int>> queue{{}};
  int tested = 0;
  while (!queue.empty()) {
    auto g = queue.front();
    queue.pop_front();
    if (static_cast<int>(g.size()) >= s.max_length) continue;
    for (int x : gens) {
      if (!g.empty() && g.back() == -x) continue;
      auto h = g;
      h.push_back(x);
      AnnularBraid hb(n, h);
      auto hd = disk_word(hb);
      if (!seen.insert(action_key(hd, punctures) + "#" + std::to_string(exponent_sum(hd))).second) continue;
      auto conj = disk_word(hb * a * hb.inverse());
      if (action_key(conj, punctures) == target) return Isotopy::isotopic;
      if (++tested >= s.max_conjugators) return Isotopy::indeterminate;
      queue.push_back(std::move(h));
    }
  }
  return Isotopy::indeterminate;
}

}  // namespace braidstab
