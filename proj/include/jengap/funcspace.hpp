#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "jengap/errors.hpp"

namespace jengap {

/// Interval of extended reals with open/closed endpoint flags.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval all() { return {}; }
  static Interval closed(double a, double b) { return {a, b, true, true}; }
  static Interval open(double a, double b) { return {a, b, false, false}; }
  static Interval left_open(double a, double b) { return {a, b, false, true}; }

  bool contains(double x) const {
    if (x < lo || (x == lo && !lo_closed)) return false;
    if (x > hi || (x == hi && !hi_closed)) return false;
    return true;
  }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double width() const { return hi - lo; }
};

enum class ExprKind {
  Constant,
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Exp,
  Log,
  Abs,
  Min,
  Max,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree over one real variable t.
struct ExprNode {
  ExprKind kind;
  double value = 0.0;  // Constant only
  ExprPtr lhs;
  ExprPtr rhs;
};

// Node builders. expr_const normalizes negative inputs to Neg(Constant) so
// that printing and reparsing always reproduces the identical tree.
ExprPtr expr_const(double v);
ExprPtr expr_var();
ExprPtr expr_add(ExprPtr a, ExprPtr b);
ExprPtr expr_sub(ExprPtr a, ExprPtr b);
ExprPtr expr_mul(ExprPtr a, ExprPtr b);
ExprPtr expr_div(ExprPtr a, ExprPtr b);
ExprPtr expr_pow(ExprPtr a, ExprPtr b);
ExprPtr expr_neg(ExprPtr a);
ExprPtr expr_call(ExprKind fn, ExprPtr a, ExprPtr b = nullptr);

bool ast_equal(const ExprPtr& a, const ExprPtr& b);
std::string print_expr(const ExprPtr& ast);

/// A parsed one-variable function together with its domain interval.
/// Evaluation anywhere in the open interior of the domain is expected to be
/// finite; failures raise DomainError instead of returning infinities.
struct FuncExpr {
  std::string source;
  ExprPtr ast;
  Interval domain = Interval::all();
};

/// Grammar (standard precedence, ^ right-associative and binding tighter
/// than unary minus):
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := ("-" factor) | power
///   power  := atom ("^" factor)?
///   atom   := number | "t" | fname "(" expr ("," expr)? ")" | "(" expr ")"
///   fname  in {exp, log, abs, min, max}
FuncExpr parse_expr(std::string_view text);
FuncExpr parse_expr(std::string_view text, Interval domain);

/// Wraps a programmatically built tree, rendering its source text.
FuncExpr from_ast(ExprPtr ast, Interval domain = Interval::all());

/// -f, sharing the operand tree.
FuncExpr negate(const FuncExpr& f);

double eval(const ExprPtr& ast, double t);
double eval(const FuncExpr& f, double t);

enum class Convexity {
  StrictlyConvex,
  Convex,
  StrictlyConcave,
  Concave,
  Affine,
  Neither,
};

const char* to_string(Convexity c);

/// Grid triple (x-h, x, x+h) at which a second difference broke one of the
/// sign requirements, together with the offending value.
struct SecondDifferenceWitness {
  std::array<double, 3> points{};
  double value = 0.0;
};

struct ConvexityReport {
  Convexity classification = Convexity::Neither;
  std::vector<double> grid;
  bool has_witness = false;
  SecondDifferenceWitness convexity_violation;   // a second difference < -tol
  SecondDifferenceWitness concavity_violation;   // a second difference > +tol
};

/// Classifies f on a bounded interval by second differences on a uniform
/// grid. A difference counts as strictly positive (negative) when it exceeds
/// tol * max(1, |f|) on its stencil; affine means every difference is within
/// that band. grid_size must be at least 16.
ConvexityReport check_convexity(const FuncExpr& f, Interval interval,
                                int grid_size = 129, double tol = 1e-9);

}  // namespace jengap
