#include "sfpde/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace sfpde {

char var_name(Var v) {
  switch (v) {
    case Var::t: return 't';
    case Var::x: return 'x';
    case Var::u: return 'u';
    case Var::v: return 'v';
  }
  return '?';
}

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position) {}

struct Expr::Node {
  Kind kind = Kind::constant;
  cplx value{};
  Var var = Var::t;
  int exponent = 0;
  int position = -1;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

bool is_binary(Expr::Kind k) {
  using K = Expr::Kind;
  return k == K::add || k == K::sub || k == K::mul || k == K::div;
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(cplx value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->var = v;
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs, int position) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs.node_);
  n->rhs = std::move(rhs.node_);
  n->position = position;
  return Expr(std::move(n));
}

Expr Expr::unary(Kind kind, Expr arg, int position) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(arg.node_);
  n->position = position;
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent, int position) {
  if (exponent < 0) throw DomainError("negative exponent");
  auto n = std::make_shared<Node>();
  n->kind = Kind::pow;
  n->lhs = std::move(base.node_);
  n->exponent = exponent;
  n->position = position;
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
cplx Expr::value() const { return node_->value; }
Var Expr::var() const { return node_->var; }
int Expr::exponent() const { return node_->exponent; }
Expr Expr::lhs() const { return Expr(node_->lhs); }
Expr Expr::rhs() const { return Expr(node_->rhs); }
int Expr::position() const { return node_->position; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::constant: return a.value() == b.value();
    case Expr::Kind::variable: return a.var() == b.var();
    case Expr::Kind::pow: return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    default: break;
  }
  if (is_binary(a.kind())) return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  return a.lhs() == b.lhs();
}

// ---------------------------------------------------------------------------
// Simplifying constructors
// ---------------------------------------------------------------------------

namespace {

cplx ipow(cplx base, int n) {
  cplx result{1.0, 0.0};
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::binary(Expr::Kind::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr::binary(Expr::Kind::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::binary(Expr::Kind::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != cplx(0.0))
    return Expr::constant(a.value() / b.value());
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr::binary(Expr::Kind::div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.kind() == Expr::Kind::neg) return a.lhs();
  return Expr::unary(Expr::Kind::neg, a);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant()) return Expr::constant(ipow(base.value(), exponent));
  return Expr::power(base, exponent);
}

Expr exp(const Expr& a) {
  if (a.is_constant()) return Expr::constant(std::exp(a.value()));
  return Expr::unary(Expr::Kind::exp, a);
}

Expr log(const Expr& a) {
  if (a.is_constant() && a.value() != cplx(0.0)) return Expr::constant(std::log(a.value()));
  return Expr::unary(Expr::Kind::log, a);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Type { number, ident, op, lparen, rparen, end } type = Type::end;
  std::string text;
  cplx number{};
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token tok;
    tok.pos = pos_;
    if (pos_ >= src_.size()) return tok;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      tok.type = Token::Type::ident;
      tok.text = std::string(src_.substr(pos_, end - pos_));
      pos_ = end;
      return tok;
    }
    ++pos_;
    tok.text = std::string(1, c);
    switch (c) {
      case '(': tok.type = Token::Type::lparen; return tok;
      case ')': tok.type = Token::Type::rparen; return tok;
      case '+': case '-': case '*': case '/': case '^':
        tok.type = Token::Type::op;
        return tok;
      default: throw ParseError(std::string("unexpected character '") + c + "'", tok.pos);
    }
  }

  std::size_t size() const { return src_.size(); }

 private:
  Token lex_number() {
    Token tok;
    tok.pos = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    };
    digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      digits();
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t probe = end + 1;
      if (probe < src_.size() && (src_[probe] == '+' || src_[probe] == '-')) ++probe;
      if (probe < src_.size() && std::isdigit(static_cast<unsigned char>(src_[probe]))) {
        end = probe;
        digits();
      }
    }
    const std::string text(src_.substr(pos_, end - pos_));
    if (text == ".") throw ParseError("malformed number", pos_);
    const double value = std::strtod(text.c_str(), nullptr);
    tok.type = Token::Type::number;
    tok.text = text;
    if (end < src_.size() && src_[end] == 'i' &&
        !(end + 1 < src_.size() && std::isalnum(static_cast<unsigned char>(src_[end + 1])))) {
      tok.number = cplx(0.0, value);
      ++end;
    } else {
      tok.number = cplx(value, 0.0);
    }
    pos_ = end;
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// Syntax errors abort immediately; semantic errors (unknown names, bad exponents)
// are remembered and reported only if the text is syntactically complete.
class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { advance(); }

  Expr run() {
    Expr e = expression();
    if (tok_.type != Token::Type::end) throw ParseError("unexpected '" + tok_.text + "'", tok_.pos);
    if (semantic_) throw *semantic_;
    return e;
  }

 private:
  void advance() { tok_ = lex_.next(); }

  bool at_op(char c) const { return tok_.type == Token::Type::op && tok_.text[0] == c; }

  void semantic(const std::string& what, std::size_t pos) {
    if (!semantic_) semantic_ = ParseError(what, pos);
  }

  static Expr fold(Expr::Kind kind, const Expr& a, const Expr& b, int pos) {
    if (a.is_constant() && b.is_constant()) {
      switch (kind) {
        case Expr::Kind::add: return Expr::constant(a.value() + b.value());
        case Expr::Kind::sub: return Expr::constant(a.value() - b.value());
        case Expr::Kind::mul: return Expr::constant(a.value() * b.value());
        case Expr::Kind::div:
          if (b.value() != cplx(0.0)) return Expr::constant(a.value() / b.value());
          break;
        default: break;
      }
    }
    return Expr::binary(kind, a, b, pos);
  }

  Expr expression() {
    Expr e = term();
    while (at_op('+') || at_op('-')) {
      const auto kind = at_op('+') ? Expr::Kind::add : Expr::Kind::sub;
      const int pos = static_cast<int>(tok_.pos);
      advance();
      e = fold(kind, e, term(), pos);
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (at_op('*') || at_op('/')) {
      const auto kind = at_op('*') ? Expr::Kind::mul : Expr::Kind::div;
      const int pos = static_cast<int>(tok_.pos);
      advance();
      e = fold(kind, e, unary(), pos);
    }
    return e;
  }

  Expr unary() {
    if (at_op('-')) {
      const int pos = static_cast<int>(tok_.pos);
      advance();
      Expr arg = unary();
      if (arg.is_constant()) return Expr::constant(-arg.value());
      return Expr::unary(Expr::Kind::neg, arg, pos);
    }
    if (at_op('+')) {
      advance();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!at_op('^')) return base;
    const std::size_t pos = tok_.pos;
    advance();
    const std::size_t exp_pos = tok_.pos;
    Expr ex = exponent_operand();
    int n = 0;
    if (!ex.is_constant() || ex.value().imag() != 0.0) {
      semantic("non-integer exponent", exp_pos);
    } else {
      const double r = ex.value().real();
      if (r != std::floor(r))
        semantic("non-integer exponent", exp_pos);
      else if (r < 0)
        semantic("negative exponent", exp_pos);
      else if (r > 64)
        semantic("exponent too large", exp_pos);
      else
        n = static_cast<int>(r);
    }
    if (at_op('^')) throw ParseError("chained exponent needs parentheses", tok_.pos);
    if (base.is_constant()) return Expr::constant(ipow(base.value(), n));
    return Expr::power(base, n, static_cast<int>(pos));
  }

  Expr exponent_operand() {
    if (at_op('-')) {
      advance();
      Expr arg = exponent_operand();
      return arg.is_constant() ? Expr::constant(-arg.value()) : -arg;
    }
    return primary();
  }

  Expr primary() {
    const Token tok = tok_;
    switch (tok.type) {
      case Token::Type::number:
        advance();
        return Expr::constant(tok.number);
      case Token::Type::lparen: {
        advance();
        Expr inner = expression();
        if (tok_.type != Token::Type::rparen) throw ParseError("expected ')'", tok_.pos);
        advance();
        return inner;
      }
      case Token::Type::ident: return identifier();
      case Token::Type::end: throw ParseError("unexpected end of input", tok.pos);
      default: throw ParseError("unexpected '" + tok.text + "'", tok.pos);
    }
  }

  Expr identifier() {
    const Token tok = tok_;
    advance();
    const std::string& name = tok.text;
    if (name == "exp" || name == "log") {
      if (tok_.type != Token::Type::lparen)
        throw ParseError("expected '(' after " + name, tok_.pos);
      advance();
      Expr arg = expression();
      if (tok_.type != Token::Type::rparen) throw ParseError("expected ')'", tok_.pos);
      advance();
      const auto kind = name == "exp" ? Expr::Kind::exp : Expr::Kind::log;
      if (arg.is_constant() && (kind == Expr::Kind::exp || arg.value() != cplx(0.0)))
        return Expr::constant(kind == Expr::Kind::exp ? std::exp(arg.value())
                                                      : std::log(arg.value()));
      return Expr::unary(kind, arg, static_cast<int>(tok.pos));
    }
    if (name == "t") return Expr::variable(Var::t);
    if (name == "x") return Expr::variable(Var::x);
    if (name == "u") return Expr::variable(Var::u);
    if (name == "v") return Expr::variable(Var::v);
    if (name == "i") return Expr::constant(cplx(0.0, 1.0));
    semantic("unknown identifier '" + name + "'", tok.pos);
    return Expr::constant(0.0);
  }

  Lexer lex_;
  Token tok_;
  std::optional<ParseError> semantic_;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double d) {
  if (!std::isfinite(d)) throw DomainError("cannot print a non-finite constant");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

void print_into(const Expr& e, std::string& out) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: {
      const cplx c = e.value();
      if (c.imag() == 0.0 && !std::signbit(c.real())) {
        out += format_double(c.real());
      } else if (c.imag() == 0.0) {
        out += "(" + format_double(c.real()) + ")";
      } else {
        out += "(" + format_double(c.real());
        const std::string im = format_double(c.imag());
        out += (im[0] == '-' ? "" : "+") + im + "i)";
      }
      return;
    }
    case K::variable: out += var_name(e.var()); return;
    case K::neg:
      out += "(-";
      print_into(e.lhs(), out);
      out += ")";
      return;
    case K::pow:
      out += "(";
      print_into(e.lhs(), out);
      out += "^" + std::to_string(e.exponent()) + ")";
      return;
    case K::exp:
    case K::log:
      out += e.kind() == K::exp ? "exp(" : "log(";
      print_into(e.lhs(), out);
      out += ")";
      return;
    default: break;
  }
  const char* op = e.kind() == K::add ? " + " : e.kind() == K::sub ? " - "
                   : e.kind() == K::mul ? "*" : "/";
  out += "(";
  print_into(e.lhs(), out);
  out += op;
  print_into(e.rhs(), out);
  out += ")";
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

std::string where(const Expr& e) {
  if (e.position() >= 0) return "at offset " + std::to_string(e.position());
  return "in " + print(e);
}

}  // namespace

cplx eval(const Expr& e, const Point& p) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: return e.value();
    case K::variable:
      switch (e.var()) {
        case Var::t: return p.t;
        case Var::x: return p.x;
        case Var::u: return p.u;
        case Var::v: return p.v;
      }
      return 0.0;
    case K::add: return eval(e.lhs(), p) + eval(e.rhs(), p);
    case K::sub: return eval(e.lhs(), p) - eval(e.rhs(), p);
    case K::mul: return eval(e.lhs(), p) * eval(e.rhs(), p);
    case K::div: {
      const cplx den = eval(e.rhs(), p);
      if (std::abs(den) < 1e-300) throw EvalError("division by zero " + where(e));
      return eval(e.lhs(), p) / den;
    }
    case K::neg: return -eval(e.lhs(), p);
    case K::pow: return ipow(eval(e.lhs(), p), e.exponent());
    case K::exp: return std::exp(eval(e.lhs(), p));
    case K::log: {
      const cplx arg = eval(e.lhs(), p);
      if (arg == cplx(0.0)) throw EvalError("log of zero " + where(e));
      return std::log(arg);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Symbolic calculus
// ---------------------------------------------------------------------------

Expr diff(const Expr& e, Var var) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: return Expr::constant(0.0);
    case K::variable: return Expr::constant(e.var() == var ? 1.0 : 0.0);
    case K::add: return diff(e.lhs(), var) + diff(e.rhs(), var);
    case K::sub: return diff(e.lhs(), var) - diff(e.rhs(), var);
    case K::mul:
      return diff(e.lhs(), var) * e.rhs() + e.lhs() * diff(e.rhs(), var);
    case K::div: {
      // (f/g)' = f'/g - f g'/g^2
      const Expr& f = e.lhs();
      const Expr& g = e.rhs();
      return diff(f, var) / g - (f * diff(g, var)) / pow(g, 2);
    }
    case K::neg: return -diff(e.lhs(), var);
    case K::pow: {
      const int n = e.exponent();
      if (n == 0) return Expr::constant(0.0);
      return Expr::constant(static_cast<double>(n)) * pow(e.lhs(), n - 1) * diff(e.lhs(), var);
    }
    case K::exp: return e * diff(e.lhs(), var);
    case K::log: return diff(e.lhs(), var) / e.lhs();
  }
  return Expr::constant(0.0);
}

Expr substitute(const Expr& e, Var var, const Expr& replacement) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: return e;
    case K::variable: return e.var() == var ? replacement : e;
    case K::add: return substitute(e.lhs(), var, replacement) + substitute(e.rhs(), var, replacement);
    case K::sub: return substitute(e.lhs(), var, replacement) - substitute(e.rhs(), var, replacement);
    case K::mul: return substitute(e.lhs(), var, replacement) * substitute(e.rhs(), var, replacement);
    case K::div:
      return Expr::binary(K::div, substitute(e.lhs(), var, replacement),
                          substitute(e.rhs(), var, replacement), e.position());
    case K::neg: return -substitute(e.lhs(), var, replacement);
    case K::pow: return pow(substitute(e.lhs(), var, replacement), e.exponent());
    case K::exp: return exp(substitute(e.lhs(), var, replacement));
    case K::log:
      return Expr::unary(K::log, substitute(e.lhs(), var, replacement), e.position());
  }
  return e;
}

bool depends_on(const Expr& e, Var var) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: return false;
    case K::variable: return e.var() == var;
    default: break;
  }
  if (is_binary(e.kind())) return depends_on(e.lhs(), var) || depends_on(e.rhs(), var);
  return depends_on(e.lhs(), var);
}

std::size_t node_count(const Expr& e) {
  using K = Expr::Kind;
  if (e.kind() == K::constant || e.kind() == K::variable) return 1;
  if (is_binary(e.kind())) return 1 + node_count(e.lhs()) + node_count(e.rhs());
  return 1 + node_count(e.lhs());
}

}  // namespace sfpde

namespace sfpde {

void PdeSpec::validate() const {
  if (!(T0 > 0.0) || !(R0 > 0.0) || !(rho0 > 0.0))
    throw DomainError("domain parameters T0, R0, rho0 must be positive");
  if (T0 > weight.T0()) throw DomainError("T0 exceeds the weight's time range");
}

PdeSpec make_pde(std::string_view rhs, bool euler_form) {
  PdeSpec pde;
  pde.rhs = parse(rhs);
  pde.euler_form = euler_form;
  return pde;
}

}  // namespace sfpde
