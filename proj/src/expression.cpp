#include "braidstab/expression.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace braidstab {

class ExpressionParser {
 public:
  ExpressionParser(Expression& e, const std::string& s) : e_(e), s_(s) {}

  int parse() {
    int root = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  int add(Op op, int a = -1, int b = -1, int c = -1, double value = 0.0, int index = 0) {
    Expression::Node n;
    n.op = op;
    n.a = a;
    n.b = b;
    n.c = c;
    n.value = value;
    n.index = index;
    e_.nodes_.push_back(n);
    return static_cast<int>(e_.nodes_.size()) - 1;
  }

  int expr() {
    int lhs = term();
    for (;;) {
      if (accept('+')) lhs = add(Op::Add, lhs, term());
      else if (accept('-')) lhs = add(Op::Sub, lhs, term());
      else return lhs;
    }
  }
  int term() {
    int lhs = unary();
    for (;;) {
      if (accept('*')) lhs = add(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = add(Op::Div, lhs, unary());
      else return lhs;
    }
  }
  int unary() {
    if (accept('-')) return add(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  int power() {
    int base = atom();
    if (accept('^')) return add(Op::Pow, base, unary());
    return base;
  }
  int atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (accept('(')) {
      int inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return add(Op::Const, -1, -1, -1, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (accept('(')) return call(name);
      if (name == "t" || name == "x" || name == "y") {
        int idx = name == "t" ? 0 : (name == "x" ? 1 : 2);
        e_.uses_[idx] = true;
        return add(Op::Var, -1, -1, -1, 0.0, idx);
      }
      if (name == "pi") return add(Op::Const, -1, -1, -1, 3.14159265358979323846);
      for (std::size_t k = 0; k < e_.param_names_.size(); ++k)
        if (e_.param_names_[k] == name) return add(Op::Param, -1, -1, -1, 0.0, static_cast<int>(k));
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  int call(const std::string& name) {
    std::vector<int> args;
    if (!accept(')')) {
      do args.push_back(expr());
      while (accept(','));
      if (!accept(')')) fail("expected ')' after arguments");
    }
    auto unary_fn = [&](Op op) {
      if (args.size() != 1) fail(name + " takes one argument");
      return add(op, args[0]);
    };
    if (name == "sin") return unary_fn(Op::Sin);
    if (name == "cos") return unary_fn(Op::Cos);
    if (name == "exp") return unary_fn(Op::Exp);
    if (name == "sqrt") return unary_fn(Op::Sqrt);
    if (name == "log") return unary_fn(Op::Log);
    if (name == "bump" || name == "ramp") {
      if (args.size() != 1 && args.size() != 3) fail(name + " takes one or three arguments");
      Op op = name == "bump" ? Op::Bump : Op::Ramp;
      return args.size() == 1 ? add(op, args[0]) : add(op, args[0], args[1], args[2]);
    }
    fail("unknown function '" + name + "'");
  }

  Expression& e_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

Expression Expression::parse(const std::string& source, const std::vector<std::string>& parameters) {
  Expression e;
  e.source_ = source;
  e.param_names_ = parameters;
  e.params_.assign(parameters.size(), 0.0);
  ExpressionParser parser(e, e.source_);
  e.root_ = parser.parse();
  return e;
}

Expression Expression::constant(double c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  return parse(buf);
}

}  // namespace braidstab
