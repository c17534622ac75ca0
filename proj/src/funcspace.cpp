#include "jengap/funcspace.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace jengap {

// ---------------------------------------------------------------------------
// builders

static ExprPtr make_node(ExprKind k, double v, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->value = v;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

ExprPtr expr_const(double v) {
  if (std::signbit(v)) {
    // Negative literals do not exist in the grammar; render as Neg(|v|).
    return make_node(ExprKind::Neg, 0.0, expr_const(-v), nullptr);
  }
  return make_node(ExprKind::Constant, v, nullptr, nullptr);
}

ExprPtr expr_var() { return make_node(ExprKind::Variable, 0.0, nullptr, nullptr); }
ExprPtr expr_add(ExprPtr a, ExprPtr b) { return make_node(ExprKind::Add, 0, std::move(a), std::move(b)); }
ExprPtr expr_sub(ExprPtr a, ExprPtr b) { return make_node(ExprKind::Sub, 0, std::move(a), std::move(b)); }
ExprPtr expr_mul(ExprPtr a, ExprPtr b) { return make_node(ExprKind::Mul, 0, std::move(a), std::move(b)); }
ExprPtr expr_div(ExprPtr a, ExprPtr b) { return make_node(ExprKind::Div, 0, std::move(a), std::move(b)); }
ExprPtr expr_pow(ExprPtr a, ExprPtr b) { return make_node(ExprKind::Pow, 0, std::move(a), std::move(b)); }
ExprPtr expr_neg(ExprPtr a) { return make_node(ExprKind::Neg, 0, std::move(a), nullptr); }

ExprPtr expr_call(ExprKind fn, ExprPtr a, ExprPtr b) {
  switch (fn) {
    case ExprKind::Exp:
    case ExprKind::Log:
    case ExprKind::Abs:
      if (b) throw InvalidArgument("unary function given two arguments");
      break;
    case ExprKind::Min:
    case ExprKind::Max:
      if (!b) throw InvalidArgument("min/max need two arguments");
      break;
    default:
      throw InvalidArgument("expr_call expects a function kind");
  }
  return make_node(fn, 0, std::move(a), std::move(b));
}

bool ast_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind == ExprKind::Constant && a->value != b->value) return false;
  return ast_equal(a->lhs, b->lhs) && ast_equal(a->rhs, b->rhs);
}

// ---------------------------------------------------------------------------
// printing

// Shortest decimal form that parses back to the identical double.
static std::string format_number(double v) {
  char buf[40];
  for (int prec : {1, 3, 6, 9, 12, 15, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {
// Grammar levels: 0 expr, 1 term, 2 factor, 3 power, 4 atom.
int level_of(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 0;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 1;
    case ExprKind::Neg:
      return 2;
    case ExprKind::Pow:
      return 3;
    default:
      return 4;
  }
}

void print_node(const ExprPtr& n, int min_level, std::string& out) {
  const bool parens = level_of(*n) < min_level;
  if (parens) out += '(';
  switch (n->kind) {
    case ExprKind::Constant:
      out += format_number(n->value);
      break;
    case ExprKind::Variable:
      out += 't';
      break;
    case ExprKind::Add:
      print_node(n->lhs, 0, out);
      out += '+';
      print_node(n->rhs, 1, out);
      break;
    case ExprKind::Sub:
      print_node(n->lhs, 0, out);
      out += '-';
      print_node(n->rhs, 1, out);
      break;
    case ExprKind::Mul:
      print_node(n->lhs, 1, out);
      out += '*';
      print_node(n->rhs, 2, out);
      break;
    case ExprKind::Div:
      print_node(n->lhs, 1, out);
      out += '/';
      print_node(n->rhs, 2, out);
      break;
    case ExprKind::Neg:
      out += '-';
      print_node(n->lhs, 2, out);
      break;
    case ExprKind::Pow:
      print_node(n->lhs, 4, out);
      out += '^';
      print_node(n->rhs, 2, out);
      break;
    case ExprKind::Exp:
    case ExprKind::Log:
    case ExprKind::Abs:
      out += n->kind == ExprKind::Exp ? "exp" : n->kind == ExprKind::Log ? "log" : "abs";
      out += '(';
      print_node(n->lhs, 0, out);
      out += ')';
      break;
    case ExprKind::Min:
    case ExprKind::Max:
      out += n->kind == ExprKind::Min ? "min" : "max";
      out += '(';
      print_node(n->lhs, 0, out);
      out += ',';
      print_node(n->rhs, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}
}  // namespace

std::string print_expr(const ExprPtr& ast) {
  std::string out;
  print_node(ast, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// lexer / parser

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok type;
  double num = 0.0;
  std::string text;
  std::size_t offset = 0;
};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  Token next() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    const std::size_t start = pos;
    if (pos >= src.size()) return {Tok::End, 0, "", start};
    const char c = src[pos];
    switch (c) {
      case '+': ++pos; return {Tok::Plus, 0, "+", start};
      case '-': ++pos; return {Tok::Minus, 0, "-", start};
      case '*': ++pos; return {Tok::Star, 0, "*", start};
      case '/': ++pos; return {Tok::Slash, 0, "/", start};
      case '^': ++pos; return {Tok::Caret, 0, "^", start};
      case '(': ++pos; return {Tok::LParen, 0, "(", start};
      case ')': ++pos; return {Tok::RParen, 0, ")", start};
      case ',': ++pos; return {Tok::Comma, 0, ",", start};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t p = pos;
      while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
      if (p < src.size() && src[p] == '.') {
        ++p;
        while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
      }
      if (p - pos == 1 && c == '.') {
        throw ParseError("expected digits in number", pos, {"number"});
      }
      if (p < src.size() && (src[p] == 'e' || src[p] == 'E')) {
        std::size_t q = p + 1;
        if (q < src.size() && (src[q] == '+' || src[q] == '-')) ++q;
        if (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) {
          ++q;
          while (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) ++q;
          p = q;
        }
      }
      const std::string text(src.substr(pos, p - pos));
      const double v = std::strtod(text.c_str(), nullptr);
      pos = p;
      return {Tok::Number, v, text, start};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t p = pos;
      while (p < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '_'))
        ++p;
      const std::string text(src.substr(pos, p - pos));
      pos = p;
      return {Tok::Ident, 0, text, start};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start,
                     {"number", "t", "function", "(", ")", "operator"});
  }
};

struct Parser {
  Lexer lex;
  Token cur;

  explicit Parser(std::string_view s) : lex{s} { cur = lex.next(); }

  void advance() { cur = lex.next(); }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::ostringstream os;
    os << "parse error at offset " << cur.offset << ": unexpected "
       << (cur.type == Tok::End ? std::string("end of input")
                                : "'" + cur.text + "'")
       << ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) os << " | ";
      os << expected[i];
    }
    throw ParseError(os.str(), cur.offset, std::move(expected));
  }

  void expect(Tok t, const char* what) {
    if (cur.type != t) fail({what});
    advance();
  }

  ExprPtr parse_atom() {
    switch (cur.type) {
      case Tok::Number: {
        ExprPtr c = expr_const(cur.num);
        advance();
        return c;
      }
      case Tok::LParen: {
        advance();
        ExprPtr e = parse_sum();
        expect(Tok::RParen, ")");
        return e;
      }
      case Tok::Ident: {
        const std::string name = cur.text;
        if (name == "t") {
          advance();
          return expr_var();
        }
        ExprKind fn;
        bool binary = false;
        if (name == "exp") fn = ExprKind::Exp;
        else if (name == "log") fn = ExprKind::Log;
        else if (name == "abs") fn = ExprKind::Abs;
        else if (name == "min") { fn = ExprKind::Min; binary = true; }
        else if (name == "max") { fn = ExprKind::Max; binary = true; }
        else fail({"t", "exp", "log", "abs", "min", "max"});
        advance();
        expect(Tok::LParen, "(");
        ExprPtr a = parse_sum();
        ExprPtr b;
        if (binary) {
          expect(Tok::Comma, ",");
          b = parse_sum();
        }
        expect(Tok::RParen, binary ? ")" : ")");
        return expr_call(fn, std::move(a), std::move(b));
      }
      default:
        fail({"number", "t", "function", "("});
    }
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (cur.type == Tok::Caret) {
      advance();
      return expr_pow(std::move(base), parse_factor());
    }
    return base;
  }

  ExprPtr parse_factor() {
    if (cur.type == Tok::Minus) {
      advance();
      return expr_neg(parse_factor());
    }
    return parse_power();
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (cur.type == Tok::Star || cur.type == Tok::Slash) {
      const bool mul = cur.type == Tok::Star;
      advance();
      ExprPtr r = parse_factor();
      e = mul ? expr_mul(std::move(e), std::move(r))
              : expr_div(std::move(e), std::move(r));
    }
    return e;
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_term();
    while (cur.type == Tok::Plus || cur.type == Tok::Minus) {
      const bool add = cur.type == Tok::Plus;
      advance();
      ExprPtr r = parse_term();
      e = add ? expr_add(std::move(e), std::move(r))
              : expr_sub(std::move(e), std::move(r));
    }
    return e;
  }
};

}  // namespace

FuncExpr parse_expr(std::string_view text, Interval domain) {
  if (text.empty()) throw ParseError("empty expression", 0, {"expression"});
  Parser p(text);
  ExprPtr ast = p.parse_sum();
  if (p.cur.type != Tok::End) p.fail({"operator", "end of input"});
  return FuncExpr{std::string(text), std::move(ast), domain};
}

FuncExpr parse_expr(std::string_view text) {
  return parse_expr(text, Interval::all());
}

FuncExpr from_ast(ExprPtr ast, Interval domain) {
  std::string src = print_expr(ast);
  return FuncExpr{std::move(src), std::move(ast), domain};
}

FuncExpr negate(const FuncExpr& f) {
  return from_ast(expr_neg(f.ast), f.domain);
}

// ---------------------------------------------------------------------------
// evaluation

double eval(const ExprPtr& ast, double t) {
  switch (ast->kind) {
    case ExprKind::Constant:
      return ast->value;
    case ExprKind::Variable:
      return t;
    case ExprKind::Add:
      return eval(ast->lhs, t) + eval(ast->rhs, t);
    case ExprKind::Sub:
      return eval(ast->lhs, t) - eval(ast->rhs, t);
    case ExprKind::Mul:
      return eval(ast->lhs, t) * eval(ast->rhs, t);
    case ExprKind::Div: {
      const double d = eval(ast->rhs, t);
      if (d == 0.0) throw DomainError("division by zero");
      return eval(ast->lhs, t) / d;
    }
    case ExprKind::Pow: {
      const double r = std::pow(eval(ast->lhs, t), eval(ast->rhs, t));
      if (!std::isfinite(r)) throw DomainError("power is not finite");
      return r;
    }
    case ExprKind::Neg:
      return -eval(ast->lhs, t);
    case ExprKind::Exp: {
      const double r = std::exp(eval(ast->lhs, t));
      if (!std::isfinite(r)) throw DomainError("exp overflow");
      return r;
    }
    case ExprKind::Log: {
      const double a = eval(ast->lhs, t);
      if (!(a > 0.0)) throw DomainError("log of a nonpositive number");
      return std::log(a);
    }
    case ExprKind::Abs:
      return std::abs(eval(ast->lhs, t));
    case ExprKind::Min:
      return std::min(eval(ast->lhs, t), eval(ast->rhs, t));
    case ExprKind::Max:
      return std::max(eval(ast->lhs, t), eval(ast->rhs, t));
  }
  throw DomainError("corrupt expression node");
}

double eval(const FuncExpr& f, double t) {
  if (!f.domain.contains(t)) {
    std::ostringstream os;
    os.precision(17);
    os << "point " << t << " outside the declared domain of " << f.source;
    throw DomainError(os.str());
  }
  const double v = eval(f.ast, t);
  if (!std::isfinite(v)) throw DomainError("evaluation not finite");
  return v;
}

// ---------------------------------------------------------------------------
// convexity

const char* to_string(Convexity c) {
  switch (c) {
    case Convexity::StrictlyConvex: return "strictly-convex";
    case Convexity::Convex: return "convex";
    case Convexity::StrictlyConcave: return "strictly-concave";
    case Convexity::Concave: return "concave";
    case Convexity::Affine: return "affine";
    case Convexity::Neither: return "neither";
  }
  return "?";
}

ConvexityReport check_convexity(const FuncExpr& f, Interval interval,
                                int grid_size, double tol) {
  if (grid_size < 16) throw InvalidArgument("grid_size must be at least 16");
  if (!interval.bounded()) {
    throw InvalidArgument(
        "convexity check needs a bounded interval; pass a bounded "
        "sub-interval covering the data range");
  }
  if (!(interval.lo < interval.hi)) {
    throw InvalidArgument("degenerate interval");
  }

  ConvexityReport rep;
  const int n = grid_size;
  const double h = interval.width() / (n - 1);
  rep.grid.resize(n);
  std::vector<double> fx(n);
  for (int i = 0; i < n; ++i) {
    const double x = i + 1 == n ? interval.hi : interval.lo + i * h;
    rep.grid[i] = x;
    fx[i] = eval(f, x);
  }

  bool any_above = false;   // some second difference > +tol band
  bool any_below = false;   // some second difference < -tol band
  bool all_strict_pos = true, all_strict_neg = true;
  for (int i = 1; i + 1 < n; ++i) {
    const double d = fx[i - 1] - 2.0 * fx[i] + fx[i + 1];
    // Scale per stencil: a global max|f| would swamp genuinely strict
    // curvature wherever the function spans many orders of magnitude.
    const double scale = std::max(
        {1.0, std::abs(fx[i - 1]), std::abs(fx[i]), std::abs(fx[i + 1])});
    const double band = tol * scale;
    if (d > band) {
      if (!any_above) {
        rep.concavity_violation = {{rep.grid[i - 1], rep.grid[i], rep.grid[i + 1]}, d};
      }
      any_above = true;
      all_strict_neg = false;
    } else if (d < -band) {
      if (!any_below) {
        rep.convexity_violation = {{rep.grid[i - 1], rep.grid[i], rep.grid[i + 1]}, d};
      }
      any_below = true;
      all_strict_pos = false;
    } else {
      all_strict_pos = false;
      all_strict_neg = false;
    }
  }

  if (!any_above && !any_below) {
    rep.classification = Convexity::Affine;
  } else if (!any_below) {
    rep.classification = all_strict_pos ? Convexity::StrictlyConvex : Convexity::Convex;
  } else if (!any_above) {
    rep.classification = all_strict_neg ? Convexity::StrictlyConcave : Convexity::Concave;
  } else {
    rep.classification = Convexity::Neither;
    rep.has_witness = true;
  }
  return rep;
}

}  // namespace jengap
