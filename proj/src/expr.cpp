#include "bladegauge/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <vector>

namespace bladegauge {

enum class Op { number, coordinate, negate, add, subtract, multiply, divide, power, call };

enum class Fn { sin, cos, tan, exp, log, sqrt, arccos, arcsin };

struct Expression::Node {
  Op op = Op::number;
  double number = 0.0;
  int index = 0;
  Fn fn = Fn::sin;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr leaf(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->number = v;
  return n;
}

NodePtr binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

  int max_coordinate = -1;

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParameterError("expression \"" + s_ + "\": " + what + " at position " + std::to_string(pos_));
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

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (accept('+')) left = binary(Op::add, left, term());
      else if (accept('-')) left = binary(Op::subtract, left, term());
      else return left;
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      if (accept('*')) left = binary(Op::multiply, left, unary());
      else if (accept('/')) left = binary(Op::divide, left, unary());
      else return left;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Expression::Node>();
      n->op = Op::negate;
      n->a = unary();
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Op::power, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return leaf(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "pi") return leaf(kPi);
      if (name.size() == 2 && name[0] == 'x' && std::isdigit(static_cast<unsigned char>(name[1]))) {
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::coordinate;
        n->index = name[1] - '0';
        max_coordinate = std::max(max_coordinate, n->index);
        return n;
      }
      static const std::vector<std::pair<std::string, Fn>> fns = {
          {"sin", Fn::sin},   {"cos", Fn::cos},   {"tan", Fn::tan},       {"exp", Fn::exp},
          {"log", Fn::log},   {"sqrt", Fn::sqrt}, {"arccos", Fn::arccos}, {"arcsin", Fn::arcsin}};
      for (const auto& [fname, fn] : fns) {
        if (fname != name) continue;
        if (!accept('(')) fail("expected '(' after " + name);
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::call;
        n->fn = fn;
        n->a = expr();
        if (!accept(')')) fail("expected ')'");
        return n;
      }
      pos_ = start;
      fail("unknown name '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

Jet<double> eval(const Expression::Node& n, const Point& x, int order) {
  const int d = static_cast<int>(x.size());
  switch (n.op) {
    case Op::number:
      return constant_jet(n.number, d, order);
    case Op::coordinate:
      if (n.index >= d) throw DimensionError("expression uses x" + std::to_string(n.index) + " on a chart of dimension " + std::to_string(d));
      return coordinate_jet(x, n.index, order);
    case Op::negate:
      return -eval(*n.a, x, order);
    case Op::add:
      return eval(*n.a, x, order) + eval(*n.b, x, order);
    case Op::subtract:
      return eval(*n.a, x, order) - eval(*n.b, x, order);
    case Op::multiply:
      return eval(*n.a, x, order) * eval(*n.b, x, order);
    case Op::divide:
      return eval(*n.a, x, order) * reciprocal(eval(*n.b, x, order));
    case Op::power: {
      if (n.b->op == Op::number) return pow(eval(*n.a, x, order), n.b->number);
      return exp(eval(*n.b, x, order) * log(eval(*n.a, x, order)));
    }
    case Op::call: {
      const Jet<double> a = eval(*n.a, x, order);
      switch (n.fn) {
        case Fn::sin: return sin(a);
        case Fn::cos: return cos(a);
        case Fn::tan: return sin(a) * reciprocal(cos(a));
        case Fn::exp: return exp(a);
        case Fn::log: return log(a);
        case Fn::sqrt: return sqrt(a);
        case Fn::arccos: return arccos(a);
        case Fn::arcsin: return arcsin(a);
      }
    }
  }
  throw InconsistencyError("expression: corrupt node");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  Expression e;
  e.root_ = p.run();
  e.text_ = text;
  e.max_coordinate_ = p.max_coordinate;
  return e;
}

Jet<double> Expression::jet(const Point& x, int order) const {
  return eval(*root_, x, order);
}

ScalarField Expression::field(int dim) const {
  if (max_coordinate_ >= dim) {
    throw DimensionError("expression \"" + text_ + "\" uses x" + std::to_string(max_coordinate_) +
                         " on a chart of dimension " + std::to_string(dim));
  }
  const Expression self = *this;
  return ScalarField::analytic(dim, 2, [self](const Point& x, int order) { return self.jet(x, order); });
}

}  // namespace bladegauge
