#include "frob/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace frob {

namespace {

class Parser {
 public:
  Parser(std::string_view text, int dim, std::vector<Expression::Node>& out)
      : s_(text), dim_(dim), out_(out) {}

  void run() {
    skip();
    if (pos_ == s_.size()) throw SyntaxError("empty expression", pos_);
    expr();
    skip();
    if (pos_ != s_.size()) throw SyntaxError(std::string("unexpected '") + s_[pos_] + "'", pos_);
  }

 private:
  int emit(Expression::Node n) {
    out_.push_back(n);
    return static_cast<int>(out_.size()) - 1;
  }
  int binary(Op op, int a, int b) { return emit({op, a, b, 0, 0.0}); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  int expr() {
    int lhs = term();
    for (;;) {
      if (eat('+')) lhs = binary(Op::Add, lhs, term());
      else if (eat('-')) lhs = binary(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  int term() {
    int lhs = unary();
    for (;;) {
      if (eat('*')) lhs = binary(Op::Mul, lhs, unary());
      else if (eat('/')) lhs = binary(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  int unary() {
    if (eat('-')) return emit({Op::Neg, unary(), -1, 0, 0.0});
    return power();
  }

  int power() {
    int base = primary();
    if (!eat('^')) return base;
    skip();
    const std::size_t at = pos_;
    bool neg = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    int e = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), e);
    if (ec != std::errc() || ptr == s_.data() + pos_) throw SyntaxError("exponent must be an integer literal", at);
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      throw SyntaxError("exponent must be an integer literal", at);
    if (peek() == '^') throw SyntaxError("chained exponent; use parentheses", pos_);
    return emit({Op::Pow, base, -1, neg ? -e : e, 0.0});
  }

  int primary() {
    const char c = peek();
    const std::size_t at = pos_;
    if (c == '(') {
      ++pos_;
      int inner = expr();
      if (!eat(')')) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
      std::string_view name = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (peek() == '(') {
        Op op;
        if (name == "sin") op = Op::Sin;
        else if (name == "cos") op = Op::Cos;
        else if (name == "exp") op = Op::Exp;
        else if (name == "log") op = Op::Log;
        else if (name == "sqrt") op = Op::Sqrt;
        else throw SyntaxError("unknown function '" + std::string(name) + "'", at);
        ++pos_;
        int arg = expr();
        if (!eat(')')) throw SyntaxError("expected ')'", pos_);
        return emit({op, arg, -1, 0, 0.0});
      }
      if (name.size() >= 2 && name[0] == 'x') {
        int k = 0;
        auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
        if (ec == std::errc() && ptr == name.data() + name.size() && name[1] != '0') {
          if (k < 1 || k > dim_)
            throw SyntaxError("unknown coordinate '" + std::string(name) + "' (dimension " + std::to_string(dim_) + ")", at);
          return emit({Op::Coord, -1, -1, k - 1, 0.0});
        }
      }
      throw SyntaxError("unknown identifier '" + std::string(name) + "'", at);
    }
    if (c == '\0') throw SyntaxError("unexpected end of expression", pos_);
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  int number() {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == s_.data() + pos_) throw SyntaxError("malformed number", pos_);
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return emit({Op::Literal, -1, -1, 0, v});
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int dim_;
  std::vector<Expression::Node>& out_;
};

const char* func_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    default: return "?";
  }
}

}  // namespace

Expression Expression::parse(std::string_view text, int dimension) {
  if (dimension < 1) throw Error("dimension must be positive");
  Expression e;
  e.nodes_.clear();
  e.dim_ = dimension;
  Parser(text, dimension, e.nodes_).run();
  return e;
}

Expression Expression::constant(double c, int dimension) {
  Expression e;
  e.dim_ = dimension;
  e.nodes_.clear();
  if (c < 0.0) {
    e.nodes_.push_back({Op::Literal, -1, -1, 0, -c});
    e.nodes_.push_back({Op::Neg, 0, -1, 0, 0.0});
  } else {
    e.nodes_.push_back({Op::Literal, -1, -1, 0, c});
  }
  return e;
}

std::string Expression::serialize_node(int i) const {
  const Node& n = nodes_.at(static_cast<std::size_t>(i));
  switch (n.op) {
    case Op::Coord: return "x" + std::to_string(n.k + 1);
    case Op::Literal: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      return buf;
    }
    case Op::Add: return "(" + serialize_node(n.a) + " + " + serialize_node(n.b) + ")";
    case Op::Sub: return "(" + serialize_node(n.a) + " - " + serialize_node(n.b) + ")";
    case Op::Mul: return "(" + serialize_node(n.a) + " * " + serialize_node(n.b) + ")";
    case Op::Div: return "(" + serialize_node(n.a) + " / " + serialize_node(n.b) + ")";
    case Op::Neg: return "(-" + serialize_node(n.a) + ")";
    case Op::Pow: return "(" + serialize_node(n.a) + "^" + std::to_string(n.k) + ")";
    default: return std::string(func_name(n.op)) + "(" + serialize_node(n.a) + ")";
  }
}

void Expression::domain_fail(int node, const char* what) const {
  throw DomainError(what, serialize_node(node));
}

double Expression::eval_gradient(const double* p, int n, double* grad, double* scratch) const {
  if (n < dim_) throw Error("point has dimension " + std::to_string(n) + ", expected " + std::to_string(dim_));
  const int w = n + 1;  // slot layout: value, then n partials
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& nd = nodes_[i];
    const int idx = static_cast<int>(i);
    double* r = scratch + i * w;
    const double* a = nd.a >= 0 ? scratch + nd.a * w : nullptr;
    const double* b = nd.b >= 0 ? scratch + nd.b * w : nullptr;
    switch (nd.op) {
      case Op::Coord:
        r[0] = p[nd.k];
        for (int m = 0; m < n; ++m) r[1 + m] = m == nd.k ? 1.0 : 0.0;
        break;
      case Op::Literal:
        r[0] = nd.value;
        for (int m = 0; m < n; ++m) r[1 + m] = 0.0;
        break;
      case Op::Add:
        for (int m = 0; m < w; ++m) r[m] = a[m] + b[m];
        break;
      case Op::Sub:
        for (int m = 0; m < w; ++m) r[m] = a[m] - b[m];
        break;
      case Op::Mul:
        for (int m = 1; m < w; ++m) r[m] = a[m] * b[0] + a[0] * b[m];
        r[0] = a[0] * b[0];
        break;
      case Op::Div: {
        if (b[0] == 0.0) domain_fail(idx, "division by zero");
        const double q = a[0] / b[0];
        for (int m = 1; m < w; ++m) r[m] = (a[m] - q * b[m]) / b[0];
        r[0] = q;
        break;
      }
      case Op::Neg:
        for (int m = 0; m < w; ++m) r[m] = -a[m];
        break;
      case Op::Pow: {
        double v, dv;
        if (nd.k == 0) {
          v = 1.0;
          dv = 0.0;
        } else if (nd.k > 0) {
          const double lower = detail::ipow(a[0], nd.k - 1);
          v = lower * a[0];
          dv = nd.k * lower;
        } else {
          if (a[0] == 0.0) domain_fail(idx, "negative power of zero");
          v = 1.0 / detail::ipow(a[0], -nd.k);
          dv = nd.k * v / a[0];
        }
        for (int m = 1; m < w; ++m) r[m] = dv * a[m];
        r[0] = v;
        break;
      }
      case Op::Sin: {
        const double c = std::cos(a[0]);
        for (int m = 1; m < w; ++m) r[m] = c * a[m];
        r[0] = std::sin(a[0]);
        break;
      }
      case Op::Cos: {
        const double s = -std::sin(a[0]);
        for (int m = 1; m < w; ++m) r[m] = s * a[m];
        r[0] = std::cos(a[0]);
        break;
      }
      case Op::Exp: {
        const double e = std::exp(a[0]);
        for (int m = 1; m < w; ++m) r[m] = e * a[m];
        r[0] = e;
        break;
      }
      case Op::Log:
        if (!(a[0] > 0.0)) domain_fail(idx, "log of non-positive value");
        for (int m = 1; m < w; ++m) r[m] = a[m] / a[0];
        r[0] = std::log(a[0]);
        break;
      case Op::Sqrt: {
        if (!(a[0] > 0.0)) domain_fail(idx, "sqrt outside its domain");
        const double s = std::sqrt(a[0]);
        for (int m = 1; m < w; ++m) r[m] = 0.5 * a[m] / s;
        r[0] = s;
        break;
      }
    }
    if (!std::isfinite(r[0])) domain_fail(idx, "non-finite value");
  }
  const double* top = scratch + (nodes_.size() - 1) * w;
  for (int m = 0; m < n; ++m) grad[m] = top[1 + m];
  return top[0];
}

std::pair<double, double> Expression::directional_derivative(const Vector& p, const Vector& v) const {
  const D1 r = eval<D1>(seed_point(p, v));
  return {r.re, r.du};
}

double Expression::second_directional(const Vector& p, const Vector& u, const Vector& v) const {
  // Inner level carries v, outer level carries u.
  Vec<D2> x(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) x(i) = D2(D1(p(i), v(i)), D1(u(i), 0.0));
  return eval<D2>(x).du.du;
}

}  // namespace frob
