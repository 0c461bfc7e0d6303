#include <doctest.h>

#include <random>
#include <string>

#include "frob/expr.hpp"
#include "test_support.hpp"

using frob::Expression;
using test::vec;

TEST_CASE("parse and evaluate small expressions") {
  CHECK(Expression::parse("x1", 3).evaluate(vec({0.7, 2, 3})) == 0.7);
  CHECK(Expression::parse("x1^2 + sin(x2)", 2).evaluate(vec({2, 0})) == 4.0);
  CHECK(Expression::parse("exp(x1)", 1).evaluate(vec({0})) == 1.0);
  CHECK(Expression::parse("x1*x2 + x3^3", 3).evaluate(vec({1, 2, 2})) == 10.0);
}

TEST_CASE("precedence and associativity") {
  const auto p = vec({3, 2});
  CHECK(Expression::parse("-x1^2", 2).evaluate(p) == -9.0);
  CHECK(Expression::parse("8/4/2", 2).evaluate(p) == 1.0);
  CHECK(Expression::parse("1-2-3", 2).evaluate(p) == -4.0);
  CHECK(Expression::parse("1+2*x1^2", 2).evaluate(p) == 19.0);
  CHECK(Expression::parse("x2^-1", 2).evaluate(p) == 0.5);
  CHECK(Expression::parse("(1+x1)*(x2-1)", 2).evaluate(p) == 4.0);
  CHECK(Expression::parse("2.5e-1*x1", 2).evaluate(p) == 0.75);
}

TEST_CASE("syntax errors carry a byte offset") {
  try {
    Expression::parse("x4", 3);
    FAIL("expected an error");
  } catch (const frob::SyntaxError& e) {
    CHECK(std::string(e.what()).find("unknown coordinate") != std::string::npos);
    CHECK(e.offset() == 0);
  }
  try {
    Expression::parse("x1 + * x2", 2);
    FAIL("expected an error");
  } catch (const frob::SyntaxError& e) {
    CHECK(e.offset() == 5);
  }
  CHECK_THROWS_AS(Expression::parse("tan(x1)", 1), frob::SyntaxError);
  CHECK_THROWS_AS(Expression::parse("x1^0.5", 1), frob::SyntaxError);
  CHECK_THROWS_AS(Expression::parse("(x1", 1), frob::SyntaxError);
  CHECK_THROWS_AS(Expression::parse("", 1), frob::SyntaxError);
}

TEST_CASE("domain violations name the subterm") {
  try {
    Expression::parse("1/x1", 1).evaluate(vec({0}));
    FAIL("expected an error");
  } catch (const frob::DomainError& e) {
    CHECK(e.subterm().find("x1") != std::string::npos);
  }
  CHECK_THROWS_AS(Expression::parse("log(x1)", 1).evaluate(vec({-1})), frob::DomainError);
  CHECK_THROWS_AS(Expression::parse("sqrt(x1)", 1).evaluate(vec({-1})), frob::DomainError);
}

TEST_CASE("directional and second derivatives") {
  auto d = Expression::parse("x1^2", 1).directional_derivative(vec({3}), vec({1}));
  CHECK(d.first == 9.0);
  CHECK(d.second == 6.0);
  d = Expression::parse("sin(x1)*x2", 2).directional_derivative(vec({0, 2}), vec({1, 0}));
  CHECK(d.first == 0.0);
  CHECK(d.second == doctest::Approx(2.0).epsilon(1e-12));
  d = Expression::parse("exp(x1)*cos(x2)", 2).directional_derivative(vec({0.3, 0.1}), vec({0, 0}));
  CHECK(d.second == 0.0);

  CHECK(Expression::parse("x1*x2", 2).second_directional(vec({0.4, -2}), vec({1, 0}), vec({0, 1})) == 1.0);
  CHECK(Expression::parse("x1^2", 1).second_directional(vec({5}), vec({1}), vec({1})) == 2.0);
  CHECK(Expression::parse("sin(x1)", 1).second_directional(vec({0}), vec({1}), vec({1})) == 0.0);
}

namespace {

// Random expressions over x1..x3 that stay inside their domain everywhere.
std::string random_expression(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_int_distribution<int> var(1, 3);
  std::uniform_real_distribution<double> lit(-2.0, 2.0);
  switch (pick(rng)) {
    case 0: return "x" + std::to_string(var(rng));
    case 1: return std::to_string(lit(rng));
    case 2: return "(" + random_expression(rng, depth - 1) + " + " + random_expression(rng, depth - 1) + ")";
    case 3: return "(" + random_expression(rng, depth - 1) + " - " + random_expression(rng, depth - 1) + ")";
    case 4: return "(" + random_expression(rng, depth - 1) + " * " + random_expression(rng, depth - 1) + ")";
    case 5: return "sin(" + random_expression(rng, depth - 1) + ")";
    case 6: return "cos(" + random_expression(rng, depth - 1) + ")";
    case 7: return "(" + random_expression(rng, depth - 1) + ")^2";
    case 8: return "log(1 + (" + random_expression(rng, depth - 1) + ")^2)";
    default: return "(" + random_expression(rng, depth - 1) + ") / (2 + sin(" + random_expression(rng, depth - 1) + "))";
  }
}

}  // namespace

TEST_CASE("dual derivatives agree with central differences on random expressions") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-6;
  int tried = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Expression e = Expression::parse(random_expression(rng, 4), 3);
    const frob::Vector p = vec({u(rng), u(rng), u(rng)});
    const frob::Vector v = vec({u(rng), u(rng), u(rng)});
    const auto [value, deriv] = e.directional_derivative(p, v);
    const double fd = (e.evaluate(p + h * v) - e.evaluate(p - h * v)) / (2 * h);
    double grad[3], scratch[4096];
    REQUIRE(e.nodes().size() * 4 <= 4096);
    const double gv = e.eval_gradient(p.data(), 3, grad, scratch);
    const double gscale = std::abs(grad[0]) + std::abs(grad[1]) + std::abs(grad[2]);
    CHECK(value == doctest::Approx(e.evaluate(p)).epsilon(1e-14));
    CHECK(gv == doctest::Approx(value).epsilon(1e-14));
    CHECK(std::abs(deriv - fd) <= 1e-6 * (1 + gscale));
    CHECK(std::abs(grad[0] * v(0) + grad[1] * v(1) + grad[2] * v(2) - deriv) <= 1e-12 * (1 + gscale));
    ++tried;
  }
  CHECK(tried == 1000);
}

TEST_CASE("second directional derivative is symmetric") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Expression e = Expression::parse(random_expression(rng, 3), 3);
    const frob::Vector p = vec({u(rng), u(rng), u(rng)});
    const frob::Vector a = vec({u(rng), u(rng), u(rng)}), b = vec({u(rng), u(rng), u(rng)});
    const double ab = e.second_directional(p, a, b), ba = e.second_directional(p, b, a);
    CHECK(std::abs(ab - ba) <= 1e-10 * (1 + std::abs(ab)));
  }
}

TEST_CASE("serialization round trip preserves values") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Expression e = Expression::parse(random_expression(rng, 4), 3);
    const Expression back = Expression::parse(e.serialize(), 3);
    CHECK(back.serialize() == e.serialize());
    for (int k = 0; k < 5; ++k) {
      const frob::Vector p = vec({u(rng), u(rng), u(rng)});
      CHECK(back.evaluate(p) == e.evaluate(p));
    }
  }
}
