#include "braidstab/braid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace braidstab {

AnnularBraid::AnnularBraid(int strands, std::vector<int> word) : n_(strands), word_(std::move(word)) {
  if (n_ < 1) throw std::invalid_argument("a braid needs at least one strand");
  std::vector<int> order(n_);
  std::iota(order.begin(), order.end(), 0);
  strand_winding_.assign(n_, 0);
  for (int l : word_) {
    int g = std::abs(l);
    if (l == 0 || g > n_) throw std::invalid_argument("letter " + std::to_string(l) + " out of range for " +
                                                      std::to_string(n_) + " strands");
    if (g == n_) {
      if (l > 0) {
        ++strand_winding_[order.back()];
        std::rotate(order.begin(), order.end() - 1, order.end());
      } else {
        --strand_winding_[order.front()];
        std::rotate(order.begin(), order.begin() + 1, order.end());
      }
    } else {
      std::swap(order[g - 1], order[g]);
    }
  }
  perm_.assign(n_, 0);
  for (int slot = 0; slot < n_; ++slot) perm_[order[slot]] = slot;
}

int AnnularBraid::total_winding() const { return std::accumulate(strand_winding_.begin(), strand_winding_.end(), 0); }

AnnularBraid AnnularBraid::inverse() const {
  std::vector<int> w(word_.rbegin(), word_.rend());
  for (int& l : w) l = -l;
  return AnnularBraid(n_, std::move(w));
}

AnnularBraid AnnularBraid::operator*(const AnnularBraid& other) const {
  if (other.n_ != n_) throw std::invalid_argument("strand counts differ");
  std::vector<int> w = word_;
  w.insert(w.end(), other.word_.begin(), other.word_.end());
  return AnnularBraid(n_, std::move(w));
}

std::vector<int> AnnularBraid::encoded() const {
  std::vector<int> out;
  for (int l : word_) out.push_back(l == n_ ? 0 : l);
  return out;
}

AnnularBraid AnnularBraid::decode(int strands, const std::vector<int>& letters) {
  std::vector<int> w;
  for (int l : letters) w.push_back(l == 0 ? strands : l);
  return AnnularBraid(strands, std::move(w));
}

std::string AnnularBraid::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int l : word_) {
    if (!first) os << ' ';
    first = false;
    if (is_tau(l)) os << (l > 0 ? "t" : "t^-1");
    else os << 's' << std::abs(l) << (l < 0 ? "^-1" : "");
  }
  return os.str();
}

AnnularBraid AnnularBraid::parse(int strands, const std::string& text) {
  std::istringstream in(text);
  std::vector<int> word;
  for (std::string tok; in >> tok;) {
    bool inverse = tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0;
    std::string head = inverse ? tok.substr(0, tok.size() - 3) : tok;
    int letter = 0;
    if (head == "t") {
      letter = strands;
    } else if (head.size() > 1 && head[0] == 's' && head.find_first_not_of("0123456789", 1) == std::string::npos) {
      letter = std::stoi(head.substr(1));
      if (letter < 1 || letter >= strands) throw std::invalid_argument("generator out of range: " + tok);
    } else {
      throw std::invalid_argument("bad braid token: " + tok);
    }
    word.push_back(inverse ? -letter : letter);
  }
  return AnnularBraid(strands, word);
}

const char* to_string(Isotopy i) {
  switch (i) {
    case Isotopy::isotopic: return "isotopic";
    case Isotopy::not_isotopic: return "not_isotopic";
    case Isotopy::indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

struct Event {
  double t;
  bool cut;
  int a, b;  // cut: strand a, b = direction; swap: mover a passes above b
};

}  // namespace

MotionReading read_motion(const std::vector<std::vector<Eigen::Vector2d>>& paths, bool cyclic, bool mover_greater,
                          double tolerance) {
  const int n = static_cast<int>(paths.size());
  MotionReading r;
  if (n == 0) return r;
  const std::size_t samples = paths[0].size();
  for (const auto& p : paths)
    if (p.size() != samples || samples < 2) throw std::invalid_argument("paths need equal sample counts >= 2");
  auto key = [&](double u) { return cyclic ? u - std::floor(u) : u; };
  std::vector<int> order(n), pos(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    double ui = key(paths[i][0].x()), uj = key(paths[j][0].x());
    return ui != uj ? ui < uj : paths[i][0].y() < paths[j][0].y();
  });
  for (int s = 0; s < n; ++s) pos[order[s]] = s;
  r.initial_order = order;
  auto fail = [&](const std::string& what, double t) {
    std::ostringstream os;
    os << what << " near sample " << t << "; strands collide or sampling is too coarse (increase samples)";
    throw BraidResolutionError(os.str());
  };
  std::vector<Event> events;
  for (std::size_t l = 0; l + 1 < samples; ++l) {
    events.clear();
    for (int j = 0; j < n && cyclic; ++j) {
      double u0 = paths[j][l].x(), u1 = paths[j][l + 1].x();
      double k0 = std::floor(u0), k1 = std::floor(u1);
      for (double m = k0 + 1; m <= k1; ++m) events.push_back({(m - u0) / (u1 - u0), true, j, +1});
      for (double m = k0; m >= k1 + 1; --m) events.push_back({(m - u0) / (u1 - u0), true, j, -1});
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double d0 = paths[i][l].x() - paths[j][l].x(), d1 = paths[i][l + 1].x() - paths[j][l + 1].x();
        int mover = d1 > d0 ? i : j, other = d1 > d0 ? j : i;
        if (cyclic) {
          double lo = std::min(d0, d1), hi = std::max(d0, d1);
          for (double m = std::floor(lo) + 1; m <= hi; ++m)
            if (m > lo) events.push_back({(m - d0) / (d1 - d0), false, mover, other});
        } else if ((d0 < 0) != (d1 < 0)) {
          events.push_back({-d0 / (d1 - d0), false, mover, other});
        }
      }
    std::stable_sort(events.begin(), events.end(), [](const Event& x, const Event& y) { return x.t < y.t; });
    for (const auto& e : events) {
      if (e.cut) {
        if (e.b > 0) {
          if (pos[e.a] != n - 1) fail("cut crossing out of order", l + e.t);
          std::rotate(order.begin(), order.end() - 1, order.end());
          r.word.push_back(n);
        } else {
          if (pos[e.a] != 0) fail("cut crossing out of order", l + e.t);
          std::rotate(order.begin(), order.begin() + 1, order.end());
          r.word.push_back(-n);
        }
      } else {
        if (pos[e.b] != pos[e.a] + 1) fail("non-adjacent exchange", l + e.t);
        auto v = [&](int s) { return paths[s][l].y() + e.t * (paths[s][l + 1].y() - paths[s][l].y()); };
        double vm = v(e.a), vo = v(e.b);
        if (std::abs(vm - vo) < tolerance) fail("strand collision", l + e.t);
        int sign = ((vm > vo) == mover_greater) ? 1 : -1;
        r.word.push_back(sign * (pos[e.a] + 1));
        std::swap(order[pos[e.a]], order[pos[e.b]]);
      }
      for (int s = 0; s < n; ++s) pos[order[s]] = s;
    }
  }
  r.final_order = order;
  return r;
}

AnnularBraid braid_from_geometry(std::shared_ptr<const BraidGeometry> g, double tolerance) {
  const int n = static_cast<int>(g->fiber.size());
  if (n == 0) throw std::invalid_argument("braid geometry has no strands");
  const std::size_t samples = g->fiber[0].size();
  std::vector<std::vector<Eigen::Vector2d>> paths(n);
  for (int j = 0; j < n; ++j) {
    const auto& f = g->fiber[j];
    bool constant = std::all_of(f.begin(), f.end(), [&](const Point& q) { return q == f.front(); });
    std::vector<Point> product;
    if (!g->product.empty()) {
      product = g->product[j];
    } else if (constant) {
      product = g->map.suspension_path(f.front(), static_cast<int>(samples) - 1);
    } else {
      for (std::size_t l = 0; l < samples; ++l)
        product.push_back(g->map.partial(static_cast<double>(l) / (samples - 1), f[l]));
    }
    for (const auto& p : product) paths[j].emplace_back(p.y(), p.x());
  }
  MotionReading r = read_motion(paths, true, true, tolerance);
  // The closing condition: the strand ending in slot s lands on the start of the strand that began there.
  for (int s = 0; s < n; ++s) {
    const auto& end = paths[r.final_order[s]].back();
    const auto& start = paths[r.initial_order[s]].front();
    double dy = end.x() - start.x();
    if (std::hypot(end.y() - start.y(), dy - std::round(dy)) > 1e-6)
      throw BraidResolutionError("strands do not close up under the map (slot " + std::to_string(s) + ")");
  }
  std::vector<int> word;
  for (int l : r.word) word.push_back(l);
  AnnularBraid b(n, std::move(word));
  for (int s = 0; s < n; ++s) {
    int final_slot = static_cast<int>(std::find(r.final_order.begin(), r.final_order.end(), r.initial_order[s]) -
                                      r.final_order.begin());
    if (b.permutation()[s] != final_slot) throw std::logic_error("word permutation disagrees with strand tracking");
  }
  // Store strands in slot order so that strand j of the geometry is slot j.
  auto sorted = std::make_shared<BraidGeometry>(BraidGeometry{g->map, {}, {}});
  for (int s = 0; s < n; ++s) {
    sorted->fiber.push_back(g->fiber[r.initial_order[s]]);
    if (!g->product.empty()) sorted->product.push_back(g->product[r.initial_order[s]]);
  }
  b.set_geometry(std::move(sorted));
  return b;
}

AnnularBraid extract_braid(const OrbitSet& alpha, const SurfaceMap& map, const ExtractionSettings& s) {
  if (!alpha.simple()) throw std::invalid_argument("braid extraction needs a simple orbit set");
  if (s.samples < 2) throw std::invalid_argument("at least two samples are needed");
  auto g = std::make_shared<BraidGeometry>(BraidGeometry{map, {}, {}});
  for (const auto& p : alpha.points()) g->fiber.emplace_back(s.samples + 1, p);
  return braid_from_geometry(std::move(g), s.tolerance);
}

AnnularBraid transport_braid(const AnnularBraid& b, const TimeHamiltonian& h, const FlowSettings& s, int samples) {
  const auto& g = b.geometry();
  if (!g) throw std::invalid_argument("transport needs a braid with strand geometry");
  if (samples < 2) throw std::invalid_argument("at least two samples are needed");
  const SurfaceMap& base = g->map;
  const double m = static_cast<double>(base.stages().size());
  auto out = std::make_shared<BraidGeometry>(BraidGeometry{flow_time_1(base, h, s), {}, {}});
  for (const auto& strand : g->fiber) {
    std::vector<Point> fiber, product;
    const double last = static_cast<double>(strand.size() - 1);
    for (int l = 0; l <= samples; ++l) {
      double t = static_cast<double>(l) / samples;
      double u = t * last;
      std::size_t k = std::min(static_cast<std::size_t>(u), strand.size() - 2);
      Point q = strand[k] + (u - k) * (strand[k + 1] - strand[k]);
      fiber.push_back(flow(h, t, 0.0, q, s));
      // partial_t of phi o phi_1^H at phi_t^{-1}(q), written as one flow.
      double hamiltonian_end = 1.0 / (m + 1.0);
      if (t <= hamiltonian_end)
        product.push_back(flow(h, t, (m + 1.0) * t, q, s));
      else
        product.push_back(base.partial((t * (m + 1.0) - 1.0) / m, flow(h, t, 1.0, q, s)));
    }
    out->fiber.push_back(std::move(fiber));
    out->product.push_back(std::move(product));
  }
  return braid_from_geometry(std::move(out));
}

}  // namespace braidstab
