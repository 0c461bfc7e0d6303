#pragma once

// Scalar expressions in the coordinates x1..xn.
//
// Grammar (standard precedence, binary operators left-associative):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | 'x'<k> | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | log | sqrt
//
// Evaluation is templated on the scalar so derivatives come from dual
// propagation. Domain violations throw DomainError naming the subterm.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frob/dual.hpp"
#include "frob/errors.hpp"
#include "frob/linalg.hpp"

namespace frob {

enum class Op : std::uint8_t { Coord, Literal, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Log, Sqrt };

class Expression {
 public:
  struct Node {
    Op op = Op::Literal;
    int a = -1;  // child indices, always smaller than the node's own index
    int b = -1;
    int k = 0;   // coordinate index (0-based) or integer exponent
    double value = 0.0;
  };

  Expression() : nodes_{Node{}} {}

  static Expression parse(std::string_view text, int dimension);
  static Expression constant(double c, int dimension);

  int dimension() const { return dim_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  // Fully parenthesized canonical form; literals carry 17 significant digits.
  std::string serialize() const { return serialize_node(static_cast<int>(nodes_.size()) - 1); }
  std::string serialize_node(int i) const;

  template <class S>
  S eval(const Vec<S>& p) const;

  double evaluate(const Vector& p) const { return eval<double>(p); }
  // Value and full gradient in one sweep. scratch needs nodes().size()·(n+1)
  // doubles; grad receives n entries. Same domain checks as eval.
  double eval_gradient(const double* p, int n, double* grad, double* scratch) const;
  // (e(p), D_v e(p))
  std::pair<double, double> directional_derivative(const Vector& p, const Vector& v) const;
  // D_u D_v e(p)
  double second_directional(const Vector& p, const Vector& u, const Vector& v) const;

 private:
  [[noreturn]] void domain_fail(int node, const char* what) const;

  std::vector<Node> nodes_;
  int dim_ = 1;
};

namespace detail {

template <class S>
S ipow(S base, int e) {
  S result(1.0);
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

}  // namespace detail

template <class S>
S Expression::eval(const Vec<S>& p) const {
  using std::cos; using std::exp; using std::log; using std::sin; using std::sqrt;
  if (p.size() < dim_) throw Error("point has dimension " + std::to_string(p.size()) + ", expected " + std::to_string(dim_));
  std::vector<S> val(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& nd = nodes_[i];
    const int idx = static_cast<int>(i);
    S r;
    switch (nd.op) {
      case Op::Coord: r = p(nd.k); break;
      case Op::Literal: r = S(nd.value); break;
      case Op::Add: r = val[nd.a] + val[nd.b]; break;
      case Op::Sub: r = val[nd.a] - val[nd.b]; break;
      case Op::Mul: r = val[nd.a] * val[nd.b]; break;
      case Op::Div:
        if (primal(val[nd.b]) == 0.0) domain_fail(idx, "division by zero");
        r = val[nd.a] / val[nd.b];
        break;
      case Op::Neg: r = -val[nd.a]; break;
      case Op::Pow:
        if (nd.k >= 0) {
          r = detail::ipow(val[nd.a], nd.k);
        } else {
          if (primal(val[nd.a]) == 0.0) domain_fail(idx, "negative power of zero");
          r = S(1.0) / detail::ipow(val[nd.a], -nd.k);
        }
        break;
      case Op::Sin: r = sin(val[nd.a]); break;
      case Op::Cos: r = cos(val[nd.a]); break;
      case Op::Exp: r = exp(val[nd.a]); break;
      case Op::Log:
        if (!(primal(val[nd.a]) > 0.0)) domain_fail(idx, "log of non-positive value");
        r = log(val[nd.a]);
        break;
      case Op::Sqrt:
        // sqrt(0) has a finite value but no derivative.
        if (is_dual_v<S> ? !(primal(val[nd.a]) > 0.0) : primal(val[nd.a]) < 0.0)
          domain_fail(idx, "sqrt outside its domain");
        r = sqrt(val[nd.a]);
        break;
    }
    if (!std::isfinite(primal(r))) domain_fail(idx, "non-finite value");
    val[i] = r;
  }
  return val.back();
}

}  // namespace frob
