#pragma once

#include <cmath>

namespace braidstab {

inline double value_of(double a);

// Forward-mode dual number carrying a value and its gradient in (x, y).
// Nesting Jet<Jet<double>> yields second derivatives.
template <typename T>
struct Jet {
  T v{};
  T dx{};
  T dy{};

  Jet() = default;
  Jet(double c) : v(c), dx(0.0), dy(0.0) {}  // NOLINT: implicit constants
  Jet(T value, T gx, T gy) : v(value), dx(gx), dy(gy) {}
};

template <typename T> Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) { return {a.v + b.v, a.dx + b.dx, a.dy + b.dy}; }
template <typename T> Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) { return {a.v - b.v, a.dx - b.dx, a.dy - b.dy}; }
template <typename T> Jet<T> operator-(const Jet<T>& a) { return {-a.v, -a.dx, -a.dy}; }
template <typename T> Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy};
}
template <typename T> Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  T inv = T(1.0) / b.v;
  T q = a.v * inv;
  return {q, (a.dx - q * b.dx) * inv, (a.dy - q * b.dy) * inv};
}

// Chain rule helper: f(a) with f' evaluated at a.v.
template <typename T> Jet<T> chain(const Jet<T>& a, T f, T fp) { return {f, fp * a.dx, fp * a.dy}; }

template <typename T> Jet<T> sin(const Jet<T>& a) { using std::sin, std::cos; return chain(a, sin(a.v), cos(a.v)); }
template <typename T> Jet<T> cos(const Jet<T>& a) { using std::sin, std::cos; return chain(a, cos(a.v), -sin(a.v)); }
template <typename T> Jet<T> exp(const Jet<T>& a) { using std::exp; T e = exp(a.v); return chain(a, e, e); }
template <typename T> Jet<T> sqrt(const Jet<T>& a) { using std::sqrt; T s = sqrt(a.v); return chain(a, s, T(0.5) / s); }
template <typename T> Jet<T> log(const Jet<T>& a) { using std::log; return chain(a, log(a.v), T(1.0) / a.v); }

inline double value_of(double a) { return a; }
template <typename T> double value_of(const Jet<T>& a) { return value_of(a.v); }

template <typename T> bool operator<(const Jet<T>& a, const Jet<T>& b) { return value_of(a) < value_of(b); }
template <typename T> bool operator>(const Jet<T>& a, const Jet<T>& b) { return value_of(a) > value_of(b); }

}  // namespace braidstab
