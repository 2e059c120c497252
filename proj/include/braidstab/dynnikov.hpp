#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace braidstab {

// Dynnikov coordinates (a_1..a_{n-2}, b_1..b_{n-2}) of an integral lamination in
// the n-punctured disk and the piecewise-linear action of the braid generators.
// The update is positively homogeneous, so T may be an integer type (exact word
// problem) or a floating type (growth rates with rescaling).
template <class T>
class Dynnikov {
 public:
  explicit Dynnikov(int punctures) : n_(punctures), a_(std::max(0, punctures - 2)), b_(std::max(0, punctures - 2)) {
    if (punctures < 2) throw std::invalid_argument("Dynnikov coordinates need at least two punctures");
  }

  // Coordinates of the curve system surrounding consecutive punctures (a = 0, b = 1).
  static Dynnikov standard(int punctures) {
    Dynnikov d(punctures);
    std::fill(d.b_.begin(), d.b_.end(), T(1));
    return d;
  }

  int punctures() const { return n_; }
  std::vector<T>& a() { return a_; }
  std::vector<T>& b() { return b_; }
  const std::vector<T>& a() const { return a_; }
  const std::vector<T>& b() const { return b_; }

  bool operator==(const Dynnikov& o) const { return n_ == o.n_ && a_ == o.a_ && b_ == o.b_; }

  // Applies sigma_i^{sign}, 1 <= i <= n-1.
  void apply(int i, int sign) {
    if (i < 1 || i >= n_) throw std::out_of_range("generator index out of range");
    if (n_ == 2) return;  // the twice-punctured disk carries no essential curves
    const int m = n_ - 2;
    // 0-based storage: coordinate k (1-based) lives at index k-1.
    auto A = [&](int k) -> T& { return a_[k - 1]; };
    auto B = [&](int k) -> T& { return b_[k - 1]; };
    if (i == 1) {
      T b1 = sign > 0 ? T(A(1) + pos(B(1))) : T(-A(1) + pos(B(1)));
      A(1) = sign > 0 ? T(-B(1) + pos(b1)) : T(B(1) - pos(b1));
      B(1) = b1;
      return;
    }
    if (i == n_ - 1) {
      T bm = sign > 0 ? T(A(m) + neg(B(m))) : T(-A(m) + neg(B(m)));
      A(m) = sign > 0 ? T(-B(m) + neg(bm)) : T(B(m) - neg(bm));
      B(m) = bm;
      return;
    }
    const T aj = A(i - 1), ai = A(i), bj = B(i - 1), bi = B(i);
    if (sign > 0) {
      T c = aj - ai - pos(bi) + neg(bj);
      A(i - 1) = aj - pos(bj) - pos(T(pos(bi) + c));
      B(i - 1) = bi + neg(c);
      A(i) = ai - neg(bi) - neg(T(neg(bj) - c));
      B(i) = bj - neg(c);
    } else {
      T d = aj - ai + pos(bi) - neg(bj);
      A(i - 1) = aj + pos(bj) + pos(T(pos(bi) - d));
      B(i - 1) = bi - pos(d);
      A(i) = ai + neg(bi) + neg(T(neg(bj) + d));
      B(i) = bj + pos(d);
    }
  }

  // Geometric intersection number with the horizontal diameter system; grows
  // like the dilatation under pseudo-Anosov braids.
  T crossings() const {
    T total(0), run(0), worst(0);
    bool first = true;
    const int m = n_ - 2;
    for (int k = 0; k < m; ++k) {
      T v = abs_(a_[k]) + pos(a_[k]) + run;
      if (first || v > worst) worst = v;
      first = false;
      run += b_[k];
    }
    for (int k = 0; k < m; ++k) total += abs_(a_[k]);
    T bsum(0);
    for (int k = 0; k < m; ++k) bsum += abs_(b_[k]);
    return 2 * worst + total + bsum;
  }

 private:
  static T pos(const T& x) { return x > T(0) ? x : T(0); }
  static T neg(const T& x) { return x < T(0) ? x : T(0); }
  static T abs_(const T& x) { return x < T(0) ? T(-x) : x; }

  int n_;
  std::vector<T> a_, b_;
};

}  // namespace braidstab
