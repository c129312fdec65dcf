#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "weylpinch/expr.hpp"

using namespace weylpinch;

namespace {

const std::vector<std::string> kCoords = {"x1", "x2", "x3", "x4"};

// independent reference interpreter over the tree
double ref_eval(const Expr& e, const std::array<double, 4>& x) {
  switch (e->kind) {
    case ExprKind::Const: return e->value;
    case ExprKind::Coord: return x[e->coord];
    case ExprKind::Add: return ref_eval(e->lhs, x) + ref_eval(e->rhs, x);
    case ExprKind::Sub: return ref_eval(e->lhs, x) - ref_eval(e->rhs, x);
    case ExprKind::Mul: return ref_eval(e->lhs, x) * ref_eval(e->rhs, x);
    case ExprKind::Div: return ref_eval(e->lhs, x) / ref_eval(e->rhs, x);
    case ExprKind::Pow: return std::pow(ref_eval(e->lhs, x), ref_eval(e->rhs, x));
    case ExprKind::Neg: return -ref_eval(e->lhs, x);
    case ExprKind::Sin: return std::sin(ref_eval(e->lhs, x));
    case ExprKind::Cos: return std::cos(ref_eval(e->lhs, x));
    case ExprKind::Tan: return std::tan(ref_eval(e->lhs, x));
    case ExprKind::Sinh: return std::sinh(ref_eval(e->lhs, x));
    case ExprKind::Cosh: return std::cosh(ref_eval(e->lhs, x));
    case ExprKind::Tanh: return std::tanh(ref_eval(e->lhs, x));
    case ExprKind::Exp: return std::exp(ref_eval(e->lhs, x));
    case ExprKind::Log: return std::log(ref_eval(e->lhs, x));
    case ExprKind::Sqrt: return std::sqrt(ref_eval(e->lhs, x));
  }
  return 0.0;
}

Expr random_ast(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_real_distribution<double> val(0.3, 2.5);
  std::uniform_int_distribution<int> coord(0, 3);
  switch (pick(rng)) {
    case 0: return expr_const(val(rng));
    case 1: return expr_coord(coord(rng));
    case 2: return expr_binary(ExprKind::Add, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 3: return expr_binary(ExprKind::Sub, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 4: return expr_binary(ExprKind::Mul, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 5: return expr_binary(ExprKind::Div, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 6: {
      std::uniform_int_distribution<int> ex(0, 3);
      return expr_binary(ExprKind::Pow, random_ast(rng, depth - 1),
                         expr_const(static_cast<double>(ex(rng))));
    }
    case 7: return expr_unary(ExprKind::Neg, random_ast(rng, depth - 1));
    case 8: {
      std::uniform_int_distribution<int> fn(0, 5);
      ExprKind kinds[] = {ExprKind::Sin, ExprKind::Cos, ExprKind::Tanh,
                          ExprKind::Exp, ExprKind::Sinh, ExprKind::Cosh};
      return expr_unary(kinds[fn(rng)], random_ast(rng, depth - 1));
    }
    default: {
      std::uniform_int_distribution<int> fn(0, 1);
      // keep log/sqrt fed by positive-leaning subtrees: wrap in cosh
      ExprKind k = fn(rng) ? ExprKind::Log : ExprKind::Sqrt;
      return expr_unary(k, expr_unary(ExprKind::Cosh, random_ast(rng, depth - 1)));
    }
  }
}

} // namespace

TEST_CASE("expression parsing basics") {
  Expr one = parse_expression("1", kCoords);
  CHECK(one->kind == ExprKind::Const);
  CHECK(expr_eval(one, std::array<double, 4>{0, 0, 0, 0}) == 1.0);

  Expr s = parse_expression("sin(x2)^2", kCoords);
  std::array<double, 4> x = {0.0, 0.6, 0.0, 0.0};
  CHECK(expr_eval(s, x) == doctest::Approx(std::sin(0.6) * std::sin(0.6)).epsilon(1e-15));

  // the exponent is itself an expression, so this runs through exp/log
  CHECK(expr_eval(parse_expression("2^3^2", kCoords), x) ==
        doctest::Approx(512.0).epsilon(1e-13));
  CHECK(expr_eval(parse_expression("2^9", kCoords), x) == 512.0);
  CHECK(expr_eval(parse_expression("-x2^2", kCoords), x) ==
        doctest::Approx(-0.36).epsilon(1e-15));
  CHECK(expr_eval(parse_expression("2-3-4", kCoords), x) == -5.0);
  CHECK(expr_eval(parse_expression("2*3+4*5", kCoords), x) == 26.0);
  CHECK(expr_eval(parse_expression("2*pi", kCoords), x) ==
        doctest::Approx(6.283185307179586).epsilon(1e-16));
  CHECK(expr_eval(parse_expression("x2^-2", kCoords), x) ==
        doctest::Approx(1.0 / 0.36).epsilon(1e-14));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_expression("1 +", kCoords), ParseError);
  try {
    parse_expression("1 +", kCoords, 1, 11);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.column() == 13); // the dangling '+' sits at column 13 of the line
    CHECK(e.line() == 1);
  }
  CHECK_THROWS_AS(parse_expression("sin x1", kCoords), ParseError);
  CHECK_THROWS_AS(parse_expression("foo(x1)", kCoords), ParseError);
  CHECK_THROWS_AS(parse_expression("(x1", kCoords), ParseError);
  CHECK_THROWS_AS(parse_expression("x1 @ 2", kCoords), ParseError);
  try {
    parse_expression("x1 + quux", kCoords);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
    CHECK(e.column() == 6);
  }
}

TEST_CASE("evaluation fails loudly instead of producing NaN") {
  std::array<double, 4> x = {0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(expr_eval(parse_expression("1/x1", kCoords), x), EvalError);
  CHECK_THROWS_AS(expr_eval(parse_expression("log(x1 - 1)", kCoords), x), EvalError);
  CHECK_THROWS_AS(expr_eval(parse_expression("sqrt(x1 - 1)", kCoords), x), EvalError);
  CHECK_THROWS_AS(expr_eval(parse_expression("x1^-1", kCoords), x), EvalError);
  CHECK_THROWS_AS(expr_eval(parse_expression("(x1 - 1)^0.5", kCoords), x), EvalError);
  CHECK_THROWS_AS(expr_eval(parse_expression("exp(exp(exp(exp(9))))", kCoords), x),
                  EvalError);
}

TEST_CASE("print/parse round trip preserves structure and value") {
  std::mt19937 rng(1234u);
  std::uniform_real_distribution<double> pt(0.4, 1.7);
  int evaluated = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Expr ast = random_ast(rng, 6);
    std::string text = print_expression(ast, kCoords);
    Expr back = parse_expression(text, kCoords);
    REQUIRE(expr_equal(ast, back));

    std::array<double, 4> x = {pt(rng), pt(rng), pt(rng), pt(rng)};
    try {
      double a = expr_eval(ast, x);
      double r = ref_eval(back, x); // reference interpreter on the printed form
      double b = expr_eval(back, x);
      CHECK(a == b); // same tree, same arithmetic
      CHECK(a == doctest::Approx(r).epsilon(1e-12));
      ++evaluated;
    } catch (const EvalError&) {
      // overflow etc.; structural round-trip already checked
    }
  }
  CHECK(evaluated > 700);
}

TEST_CASE("hyperdual evaluation agrees with double evaluation") {
  std::mt19937 rng(99u);
  std::uniform_real_distribution<double> pt(0.4, 1.7);
  for (int trial = 0; trial < 200; ++trial) {
    Expr ast = random_ast(rng, 5);
    std::array<double, 4> x = {pt(rng), pt(rng), pt(rng), pt(rng)};
    try {
      double v = expr_eval(ast, x);
      std::array<HyperDual, 4> hx;
      for (int i = 0; i < 4; ++i) hx[i] = hd_coord(x[i], i);
      HyperDual h = expr_eval(ast, hx);
      CHECK(h.v == doctest::Approx(v).epsilon(1e-13));
    } catch (const EvalError&) {
    }
  }
}
