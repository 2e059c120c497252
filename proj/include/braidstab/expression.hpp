#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "braidstab/jet.hpp"

namespace braidstab {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Small arithmetic grammar over t, x, y and named parameters:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
// Functions: sin cos exp sqrt log bump(u[,lo,hi]) ramp(u[,lo,hi]); constant pi.
class Expression {
 public:
  Expression() = default;
  static Expression parse(const std::string& source, const std::vector<std::string>& parameters = {});
  static Expression constant(double c);

  const std::string& source() const { return source_; }
  bool depends_on_time() const { return uses_[0]; }
  bool depends_on_x() const { return uses_[1]; }
  bool depends_on_y() const { return uses_[2]; }
  bool empty() const { return nodes_.empty(); }

  // Parameter values in the order given to parse().
  void bind(const std::vector<double>& values) { params_ = values; }
  const std::vector<double>& bound() const { return params_; }
  const std::vector<std::string>& parameter_names() const { return param_names_; }

  template <typename T>
  T operator()(const T& t, const T& x, const T& y) const {
    if (nodes_.empty()) return T(0.0);
    return eval<T>(root_, t, x, y);
  }

 private:
  enum class Op { Const, Var, Param, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt, Log, Bump, Ramp };
  struct Node {
    Op op = Op::Const;
    double value = 0.0;
    int index = 0;
    int a = -1, b = -1, c = -1;
  };

  friend class ExpressionParser;

  template <typename T>
  T eval(int id, const T& t, const T& x, const T& y) const;

  std::string source_;
  std::vector<Node> nodes_;
  int root_ = -1;
  bool uses_[3] = {false, false, false};
  std::vector<std::string> param_names_;
  std::vector<double> params_;
};

namespace detail {

inline double smooth_exp(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

template <typename T>
T ipow(T base, int n) {
  T result(1.0);
  bool neg = n < 0;
  for (int k = 0; k < (neg ? -n : n); ++k) result = result * base;
  return neg ? T(1.0) / result : result;
}

}  // namespace detail

template <typename T>
T Expression::eval(int id, const T& t, const T& x, const T& y) const {
  using std::sin, std::cos, std::exp, std::sqrt, std::log;
  const Node& n = nodes_[id];
  switch (n.op) {
    case Op::Const: return T(n.value);
    case Op::Var: return n.index == 0 ? t : (n.index == 1 ? x : y);
    case Op::Param: return T(params_.at(n.index));
    case Op::Neg: return -eval<T>(n.a, t, x, y);
    case Op::Add: return eval<T>(n.a, t, x, y) + eval<T>(n.b, t, x, y);
    case Op::Sub: return eval<T>(n.a, t, x, y) - eval<T>(n.b, t, x, y);
    case Op::Mul: return eval<T>(n.a, t, x, y) * eval<T>(n.b, t, x, y);
    case Op::Div: return eval<T>(n.a, t, x, y) / eval<T>(n.b, t, x, y);
    case Op::Pow: {
      T base = eval<T>(n.a, t, x, y);
      const Node& e = nodes_[n.b];
      if (e.op == Op::Const && e.value == std::round(e.value) && std::abs(e.value) <= 64)
        return detail::ipow(base, static_cast<int>(e.value));
      return exp(eval<T>(n.b, t, x, y) * log(base));
    }
    case Op::Sin: return sin(eval<T>(n.a, t, x, y));
    case Op::Cos: return cos(eval<T>(n.a, t, x, y));
    case Op::Exp: return exp(eval<T>(n.a, t, x, y));
    case Op::Sqrt: return sqrt(eval<T>(n.a, t, x, y));
    case Op::Log: return log(eval<T>(n.a, t, x, y));
    case Op::Bump: {
      // C-infinity bump supported on (lo, hi), value 1 at the midpoint.
      T u = eval<T>(n.a, t, x, y);
      double lo = n.b >= 0 ? value_of(eval<T>(n.b, t, x, y)) : 0.1;
      double hi = n.c >= 0 ? value_of(eval<T>(n.c, t, x, y)) : 0.9;
      T s = (T(2.0) * u - T(lo + hi)) / T(hi - lo);
      double sv = value_of(s);
      if (sv <= -1.0 || sv >= 1.0) return T(0.0);
      return exp(T(1.0) - T(1.0) / (T(1.0) - s * s));
    }
    case Op::Ramp: {
      // C-infinity step: 0 below lo, 1 above hi.
      T u = eval<T>(n.a, t, x, y);
      double lo = n.b >= 0 ? value_of(eval<T>(n.b, t, x, y)) : 0.0;
      double hi = n.c >= 0 ? value_of(eval<T>(n.c, t, x, y)) : 1.0;
      T s = (u - T(lo)) / T(hi - lo);
      double sv = value_of(s);
      if (sv <= 0.0) return T(0.0);
      if (sv >= 1.0) return T(1.0);
      T f = exp(T(-1.0) / s);
      T g = exp(T(-1.0) / (T(1.0) - s));
      return f / (f + g);
    }
  }
  return T(0.0);
}

}  // namespace braidstab
