#include <doctest.h>

#include <cmath>
#include <random>

#include "jengap/funcspace.hpp"

using namespace jengap;

TEST_CASE("grammar smoke tests") {
  const FuncExpr f = parse_expr("t^2");
  REQUIRE(f.ast->kind == ExprKind::Pow);
  CHECK(f.ast->lhs->kind == ExprKind::Variable);
  CHECK(f.ast->rhs->kind == ExprKind::Constant);
  CHECK(f.ast->rhs->value == 2.0);

  const FuncExpr g = parse_expr("-log(t)");
  REQUIRE(g.ast->kind == ExprKind::Neg);
  CHECK(g.ast->lhs->kind == ExprKind::Log);
  CHECK(g.ast->lhs->lhs->kind == ExprKind::Variable);
}

TEST_CASE("parse errors carry the byte offset") {
  try {
    parse_expr("exp(t");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 5);  // end of input
    CHECK(!e.expected.empty());
  }

  try {
    parse_expr("2 + * 3");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
  }

  CHECK_THROWS_AS(parse_expr(""), ParseError);
  CHECK_THROWS_AS(parse_expr("min(t)"), ParseError);    // needs two arguments
  CHECK_THROWS_AS(parse_expr("exp(t, t)"), ParseError); // needs one
  CHECK_THROWS_AS(parse_expr("sin(t)"), ParseError);    // unknown function
  CHECK_THROWS_AS(parse_expr("(t"), ParseError);
  CHECK_THROWS_AS(parse_expr("t 2"), ParseError);       // trailing input
}

TEST_CASE("precedence and associativity") {
  CHECK(eval(parse_expr("-t^2"), 3.0) == -9.0);           // ^ above unary minus
  CHECK(eval(parse_expr("2^3^2"), 0.0) == 512.0);         // ^ right-assoc
  CHECK(eval(parse_expr("1-2-3"), 0.0) == -4.0);          // - left-assoc
  CHECK(eval(parse_expr("12/2/3"), 0.0) == 2.0);          // / left-assoc
  CHECK(eval(parse_expr("2+3*4"), 0.0) == 14.0);
  CHECK(eval(parse_expr("-2*t"), 5.0) == -10.0);          // (-2)*t
  CHECK(eval(parse_expr("t^-1"), 4.0) == 0.25);
  CHECK(eval(parse_expr("min(t, 2*t)"), -1.0) == -2.0);
  CHECK(eval(parse_expr("max(abs(t), 1)"), -3.0) == 3.0);
  CHECK(eval(parse_expr("2.5e-1 + 1"), 0.0) == 1.25);
}

TEST_CASE("evaluation leaves the domain loudly") {
  CHECK_THROWS_AS(eval(parse_expr("log(t)"), -1.0), DomainError);
  CHECK_THROWS_AS(eval(parse_expr("log(t)"), 0.0), DomainError);
  CHECK_THROWS_AS(eval(parse_expr("1/t"), 0.0), DomainError);
  CHECK_THROWS_AS(eval(parse_expr("t^0.5"), -1.0), DomainError);
  CHECK_THROWS_AS(eval(parse_expr("exp(t)"), 1e9), DomainError);

  const FuncExpr restricted = parse_expr("t", Interval::closed(0.0, 1.0));
  CHECK_THROWS_AS(eval(restricted, 2.0), DomainError);
  CHECK(eval(restricted, 0.5) == 0.5);

  const FuncExpr open = parse_expr("t", Interval::open(0.0, 1.0));
  CHECK_THROWS_AS(eval(open, 0.0), DomainError);
}

namespace {

ExprPtr random_ast(std::mt19937_64& eng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_real_distribution<double> num(0.0, 8.0);
  switch (pick(eng)) {
    case 0: return expr_const(num(eng));
    case 1: return expr_var();
    case 2: return expr_add(random_ast(eng, depth - 1), random_ast(eng, depth - 1));
    case 3: return expr_sub(random_ast(eng, depth - 1), random_ast(eng, depth - 1));
    case 4: return expr_mul(random_ast(eng, depth - 1), random_ast(eng, depth - 1));
    case 5: return expr_div(random_ast(eng, depth - 1), random_ast(eng, depth - 1));
    case 6: return expr_pow(random_ast(eng, depth - 1), random_ast(eng, depth - 1));
    case 7: return expr_neg(random_ast(eng, depth - 1));
    case 8: return expr_call(ExprKind::Exp, random_ast(eng, depth - 1));
    default:
      return expr_call(eng() % 2 ? ExprKind::Min : ExprKind::Max,
                       random_ast(eng, depth - 1), random_ast(eng, depth - 1));
  }
}

}  // namespace

TEST_CASE("printing then reparsing reproduces the identical tree") {
  std::mt19937_64 eng(7);
  for (int i = 0; i < 300; ++i) {
    const ExprPtr ast = random_ast(eng, 4);
    const std::string text = print_expr(ast);
    CAPTURE(text);
    const FuncExpr back = parse_expr(text);
    CHECK(ast_equal(ast, back.ast));
    CHECK(back.source == text);
  }

  // Constants print in the shortest form that round-trips exactly.
  const ExprPtr third = expr_const(1.0 / 3.0);
  const FuncExpr back = parse_expr(print_expr(third));
  CHECK(back.ast->value == 1.0 / 3.0);
}

TEST_CASE("convexity classification of the canonical shapes") {
  CHECK(check_convexity(parse_expr("t^2"), Interval::closed(-5, 5)).classification ==
        Convexity::StrictlyConvex);
  CHECK(check_convexity(parse_expr("abs(t)"), Interval::closed(-1, 1)).classification ==
        Convexity::Convex);
  CHECK(check_convexity(parse_expr("log(t)"), Interval::closed(0.1, 10)).classification ==
        Convexity::StrictlyConcave);
  CHECK(check_convexity(parse_expr("-abs(t)"), Interval::closed(-1, 1)).classification ==
        Convexity::Concave);
  CHECK(check_convexity(parse_expr("exp(t)"), Interval::closed(-10, 10)).classification ==
        Convexity::StrictlyConvex);
  CHECK(check_convexity(parse_expr("t^4"), Interval::closed(-10, 10)).classification ==
        Convexity::StrictlyConvex);
}

TEST_CASE("neither comes with witnesses for both signs") {
  const ConvexityReport rep =
      check_convexity(parse_expr("t^3"), Interval::closed(-1, 1));
  REQUIRE(rep.classification == Convexity::Neither);
  REQUIRE(rep.has_witness);
  CHECK(rep.convexity_violation.value < 0.0);
  CHECK(rep.concavity_violation.value > 0.0);
  CHECK(rep.convexity_violation.points[1] < 0.0);  // cubic curves down left of 0
  CHECK(rep.concavity_violation.points[1] > 0.0);
}

TEST_CASE("affine functions classify as affine for random coefficients") {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double a = coef(eng), b = coef(eng);
    const FuncExpr f = from_ast(
        expr_add(expr_mul(expr_const(a), expr_var()), expr_const(b)));
    CHECK(check_convexity(f, Interval::closed(-7, 9)).classification ==
          Convexity::Affine);
  }
}

TEST_CASE("negation swaps the classification") {
  const auto swap_of = [](Convexity c) {
    switch (c) {
      case Convexity::StrictlyConvex: return Convexity::StrictlyConcave;
      case Convexity::Convex: return Convexity::Concave;
      case Convexity::StrictlyConcave: return Convexity::StrictlyConvex;
      case Convexity::Concave: return Convexity::Convex;
      default: return c;
    }
  };
  for (const char* src : {"t^2", "abs(t)", "exp(t)", "t^3", "2*t+1"}) {
    const FuncExpr f = parse_expr(src);
    const Interval window = Interval::closed(-3, 3);
    const Convexity direct = check_convexity(f, window).classification;
    const Convexity negated = check_convexity(negate(f), window).classification;
    CHECK(negated == swap_of(direct));
  }
}

TEST_CASE("convexity preconditions") {
  CHECK_THROWS_AS(check_convexity(parse_expr("t"), Interval::closed(0, 1), 8),
                  InvalidArgument);
  CHECK_THROWS_AS(check_convexity(parse_expr("t"), Interval::all()),
                  InvalidArgument);
  CHECK_THROWS_AS(check_convexity(parse_expr("log(t)"), Interval::closed(-1, 1)),
                  DomainError);
}
