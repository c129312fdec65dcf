#ifndef WEYLPINCH_EXPR_HPP
#define WEYLPINCH_EXPR_HPP

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weylpinch/errors.hpp"
#include "weylpinch/hyperdual.hpp"

namespace weylpinch {

// -------------------------------------------------------------------
// Small scalar expression language for metric components.
//
// Grammar (standard infix precedence, '^' right-associative):
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' unary)?
//   atom    := number | coord | 'pi' | func '(' expr ')' | '(' expr ')'
//   func    := sin cos tan sinh cosh tanh exp log sqrt
//
// Trees are immutable and shared; there is no simplification pass.
// -------------------------------------------------------------------

enum class ExprKind {
  Const, Coord,
  Add, Sub, Mul, Div, Pow, Neg,
  Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt,
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  double value = 0.0; // Const
  int coord = -1;     // Coord, 0-based
  Expr lhs, rhs;      // rhs only for binary kinds
};

inline Expr expr_const(double v) {
  return std::make_shared<ExprNode>(ExprNode{ExprKind::Const, v, -1, nullptr, nullptr});
}

inline Expr expr_coord(int i) {
  return std::make_shared<ExprNode>(ExprNode{ExprKind::Coord, 0.0, i, nullptr, nullptr});
}

inline Expr expr_binary(ExprKind k, Expr a, Expr b) {
  return std::make_shared<ExprNode>(ExprNode{k, 0.0, -1, std::move(a), std::move(b)});
}

inline Expr expr_unary(ExprKind k, Expr a) {
  return std::make_shared<ExprNode>(ExprNode{k, 0.0, -1, std::move(a), nullptr});
}

inline Expr operator+(Expr a, Expr b) { return expr_binary(ExprKind::Add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return expr_binary(ExprKind::Sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return expr_binary(ExprKind::Mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return expr_binary(ExprKind::Div, std::move(a), std::move(b)); }

inline bool expr_equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Const: return a->value == b->value;
    case ExprKind::Coord: return a->coord == b->coord;
    default:
      if (!expr_equal(a->lhs, b->lhs)) return false;
      if ((a->rhs == nullptr) != (b->rhs == nullptr)) return false;
      return !a->rhs || expr_equal(a->rhs, b->rhs);
  }
}

// ---- evaluation ----------------------------------------------------

namespace detail {

inline double scalar_value(double x) { return x; }
inline double scalar_value(const HyperDual& x) { return x.v; }

inline bool all_finite(double x) { return std::isfinite(x); }
inline bool all_finite(const HyperDual& x) {
  if (!std::isfinite(x.v)) return false;
  for (double d : x.d)
    if (!std::isfinite(d)) return false;
  for (double h : x.h)
    if (!std::isfinite(h)) return false;
  return true;
}

template <class T>
T int_pow(const T& base, long n) {
  if (n == 0) return T{} * 0.0 + 1.0;
  bool neg = n < 0;
  unsigned long m = neg ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  T acc = base;
  T out = acc;
  bool have = false;
  while (m > 0) {
    if (m & 1ul) {
      out = have ? out * acc : acc;
      have = true;
    }
    m >>= 1;
    if (m) acc = acc * acc;
  }
  if (neg) return 1.0 / out;
  return out;
}

inline bool const_integer_exponent(const Expr& e, long& n) {
  const ExprNode* node = e.get();
  bool negate = false;
  while (node && node->kind == ExprKind::Neg) {
    negate = !negate;
    node = node->lhs.get();
  }
  if (!node || node->kind != ExprKind::Const) return false;
  double v = node->value;
  if (v != std::floor(v) || std::abs(v) > 32.0) return false;
  n = static_cast<long>(v);
  if (negate) n = -n;
  return true;
}

} // namespace detail

/// Evaluate over doubles or HyperDual jets. Throws EvalError instead of
/// producing NaN/inf: division by zero, log of a non-positive value,
/// sqrt of a negative value, and any non-finite intermediate all fail.
template <class T>
T expr_eval(const Expr& e, const std::array<T, 4>& x) {
  using detail::scalar_value;
  using std::sin; using std::cos; using std::tan;
  using std::sinh; using std::cosh; using std::tanh;
  using std::exp; using std::log; using std::sqrt;
  if (!e) throw EvalError("empty expression");
  T r{};
  switch (e->kind) {
    case ExprKind::Const: r = T{} + e->value; break;
    case ExprKind::Coord: r = x[e->coord]; break;
    case ExprKind::Add: r = expr_eval(e->lhs, x) + expr_eval(e->rhs, x); break;
    case ExprKind::Sub: r = expr_eval(e->lhs, x) - expr_eval(e->rhs, x); break;
    case ExprKind::Mul: r = expr_eval(e->lhs, x) * expr_eval(e->rhs, x); break;
    case ExprKind::Div: {
      T a = expr_eval(e->lhs, x);
      T b = expr_eval(e->rhs, x);
      if (scalar_value(b) == 0.0) throw EvalError("division by zero");
      r = a / b;
      break;
    }
    case ExprKind::Pow: {
      T a = expr_eval(e->lhs, x);
      long n = 0;
      if (detail::const_integer_exponent(e->rhs, n)) {
        if (n < 0 && scalar_value(a) == 0.0)
          throw EvalError("zero raised to a negative power");
        r = detail::int_pow(a, n);
      } else {
        T b = expr_eval(e->rhs, x);
        if (scalar_value(a) <= 0.0)
          throw EvalError("power with non-positive base and non-integer exponent");
        r = exp(b * log(a));
      }
      break;
    }
    case ExprKind::Neg: r = -expr_eval(e->lhs, x); break;
    case ExprKind::Sin: r = sin(expr_eval(e->lhs, x)); break;
    case ExprKind::Cos: r = cos(expr_eval(e->lhs, x)); break;
    case ExprKind::Tan: r = tan(expr_eval(e->lhs, x)); break;
    case ExprKind::Sinh: r = sinh(expr_eval(e->lhs, x)); break;
    case ExprKind::Cosh: r = cosh(expr_eval(e->lhs, x)); break;
    case ExprKind::Tanh: r = tanh(expr_eval(e->lhs, x)); break;
    case ExprKind::Exp: r = exp(expr_eval(e->lhs, x)); break;
    case ExprKind::Log: {
      T a = expr_eval(e->lhs, x);
      if (scalar_value(a) <= 0.0) throw EvalError("log of a non-positive value");
      r = log(a);
      break;
    }
    case ExprKind::Sqrt: {
      T a = expr_eval(e->lhs, x);
      if (scalar_value(a) < 0.0) throw EvalError("sqrt of a negative value");
      r = sqrt(a);
      break;
    }
  }
  if (!detail::all_finite(r)) throw EvalError("non-finite value in expression evaluation");
  return r;
}

// ---- printing ------------------------------------------------------

namespace detail {

inline int expr_prec(ExprKind k) {
  switch (k) {
    case ExprKind::Add: case ExprKind::Sub: return 1;
    case ExprKind::Mul: case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void print_rec(const Expr& e, std::span<const std::string> names,
                      std::string& out) {
  auto child = [&](const Expr& c, bool parens) {
    if (parens) out.push_back('(');
    print_rec(c, names, out);
    if (parens) out.push_back(')');
  };
  int p = expr_prec(e->kind);
  switch (e->kind) {
    case ExprKind::Const: out += format_number(e->value); break;
    case ExprKind::Coord:
      out += (e->coord < static_cast<int>(names.size()))
                 ? names[e->coord]
                 : "x" + std::to_string(e->coord + 1);
      break;
    case ExprKind::Add:
      child(e->lhs, expr_prec(e->lhs->kind) < p);
      out += " + ";
      // right operand needs parens at equal precedence, or the reparse
      // would rebuild the tree left-associatively
      child(e->rhs, expr_prec(e->rhs->kind) <= p);
      break;
    case ExprKind::Sub:
      child(e->lhs, expr_prec(e->lhs->kind) < p);
      out += " - ";
      child(e->rhs, expr_prec(e->rhs->kind) <= p);
      break;
    case ExprKind::Mul:
      child(e->lhs, expr_prec(e->lhs->kind) < p);
      out += "*";
      child(e->rhs, expr_prec(e->rhs->kind) <= p);
      break;
    case ExprKind::Div:
      child(e->lhs, expr_prec(e->lhs->kind) < p);
      out += "/";
      child(e->rhs, expr_prec(e->rhs->kind) <= p);
      break;
    case ExprKind::Pow:
      child(e->lhs, expr_prec(e->lhs->kind) <= p);
      out += "^";
      child(e->rhs, expr_prec(e->rhs->kind) < 3); // exponent parses as unary
      break;
    case ExprKind::Neg:
      out.push_back('-');
      child(e->lhs, expr_prec(e->lhs->kind) < p);
      break;
    case ExprKind::Sin: out += "sin"; child(e->lhs, true); break;
    case ExprKind::Cos: out += "cos"; child(e->lhs, true); break;
    case ExprKind::Tan: out += "tan"; child(e->lhs, true); break;
    case ExprKind::Sinh: out += "sinh"; child(e->lhs, true); break;
    case ExprKind::Cosh: out += "cosh"; child(e->lhs, true); break;
    case ExprKind::Tanh: out += "tanh"; child(e->lhs, true); break;
    case ExprKind::Exp: out += "exp"; child(e->lhs, true); break;
    case ExprKind::Log: out += "log"; child(e->lhs, true); break;
    case ExprKind::Sqrt: out += "sqrt"; child(e->lhs, true); break;
  }
}

} // namespace detail

inline std::string print_expression(const Expr& e,
                                    std::span<const std::string> coord_names = {}) {
  std::string out;
  detail::print_rec(e, coord_names, out);
  return out;
}

// ---- parsing -------------------------------------------------------

namespace detail {

struct Token {
  enum Kind { Number, Ident, Op, LParen, RParen, End } kind;
  std::string text;
  double number = 0.0;
  int column = 0; // 1-based within the full line
};

class ExprParser {
public:
  ExprParser(std::string_view src, std::span<const std::string> coord_names,
             int line, int column_offset)
      : src_(src), names_(coord_names), line_(line), offset_(column_offset) {
    advance();
  }

  Expr parse() {
    Expr e = parse_sum();
    if (cur_.kind != Token::End)
      fail("unexpected '" + cur_.text + "'", cur_.column);
    return e;
  }

private:
  std::string_view src_;
  std::span<const std::string> names_;
  int line_;
  int offset_;
  std::size_t pos_ = 0;
  Token cur_;
  Token prev_;

  [[noreturn]] void fail(const std::string& msg, int column) const {
    throw ParseError(msg, line_, column);
  }

  void advance() {
    prev_ = cur_;
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    int col = offset_ + static_cast<int>(pos_);
    if (pos_ >= src_.size()) {
      cur_ = Token{Token::End, "", 0.0, col};
      return;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
        ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t mark = pos_;
        ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        } else {
          pos_ = mark;
        }
      }
      std::string text(src_.substr(start, pos_ - start));
      char* end = nullptr;
      double v = std::strtod(text.c_str(), &end);
      if (end == text.c_str() || *end != '\0')
        fail("malformed number '" + text + "'", col);
      cur_ = Token{Token::Number, text, v, col};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      cur_ = Token{Token::Ident, std::string(src_.substr(start, pos_ - start)), 0.0, col};
      return;
    }
    ++pos_;
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        cur_ = Token{Token::Op, std::string(1, c), 0.0, col};
        return;
      case '(': cur_ = Token{Token::LParen, "(", 0.0, col}; return;
      case ')': cur_ = Token{Token::RParen, ")", 0.0, col}; return;
      default:
        fail(std::string("unexpected character '") + c + "'", col);
    }
  }

  bool accept_op(char c) {
    if (cur_.kind == Token::Op && cur_.text[0] == c) {
      advance();
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr e = parse_term();
    for (;;) {
      if (accept_op('+')) e = expr_binary(ExprKind::Add, e, parse_term());
      else if (accept_op('-')) e = expr_binary(ExprKind::Sub, e, parse_term());
      else return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      if (accept_op('*')) e = expr_binary(ExprKind::Mul, e, parse_unary());
      else if (accept_op('/')) e = expr_binary(ExprKind::Div, e, parse_unary());
      else return e;
    }
  }

  Expr parse_unary() {
    if (accept_op('-')) return expr_unary(ExprKind::Neg, parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (accept_op('^')) return expr_binary(ExprKind::Pow, base, parse_unary());
    return base;
  }

  Expr parse_atom() {
    if (cur_.kind == Token::End) {
      // Report a dangling operator at its own column.
      if (prev_.kind == Token::Op)
        fail("missing operand after '" + prev_.text + "'", prev_.column);
      fail("unexpected end of expression", cur_.column);
    }
    if (cur_.kind == Token::Number) {
      double v = cur_.number;
      advance();
      return expr_const(v);
    }
    if (cur_.kind == Token::LParen) {
      advance();
      Expr e = parse_sum();
      if (cur_.kind != Token::RParen) fail("expected ')'", cur_.column);
      advance();
      return e;
    }
    if (cur_.kind == Token::Ident) {
      Token t = cur_;
      advance();
      static const std::pair<const char*, ExprKind> funcs[] = {
          {"sin", ExprKind::Sin},   {"cos", ExprKind::Cos},
          {"tan", ExprKind::Tan},   {"sinh", ExprKind::Sinh},
          {"cosh", ExprKind::Cosh}, {"tanh", ExprKind::Tanh},
          {"exp", ExprKind::Exp},   {"log", ExprKind::Log},
          {"sqrt", ExprKind::Sqrt},
      };
      for (const auto& [name, kind] : funcs) {
        if (t.text == name) {
          if (cur_.kind != Token::LParen)
            fail("expected '(' after function '" + t.text + "'", cur_.column);
          advance();
          Expr arg = parse_sum();
          if (cur_.kind != Token::RParen) fail("expected ')'", cur_.column);
          advance();
          return expr_unary(kind, arg);
        }
      }
      if (t.text == "pi") return expr_const(3.14159265358979323846);
      for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == t.text) return expr_coord(static_cast<int>(i));
      fail("unknown identifier '" + t.text + "'", t.column);
    }
    fail("unexpected '" + cur_.text + "'", cur_.column);
  }
};

} // namespace detail

/// Parse one expression. `line` and `column_offset` locate the text inside
/// a larger source for error reporting (column_offset is the 1-based column
/// of the expression's first character).
inline Expr parse_expression(std::string_view text,
                             std::span<const std::string> coord_names,
                             int line = 1, int column_offset = 1) {
  detail::ExprParser p(text, coord_names, line, column_offset);
  return p.parse();
}

} // namespace weylpinch

#endif
