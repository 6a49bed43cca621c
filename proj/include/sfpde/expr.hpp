#pragma once

#include "sfpde/core.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sfpde {

/// The four slots of a right-hand side F(t, x, u, v).
enum class Var { t, x, u, v };

char var_name(Var v);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable expression tree over complex scalars.
///
/// Nodes are shared, so copying an Expr is cheap. Only integer powers with
/// non-negative exponents are representable.
class Expr {
 public:
  enum class Kind { constant, variable, add, sub, mul, div, neg, pow, exp, log };

  Expr();  // the constant 0

  static Expr constant(cplx value);
  static Expr variable(Var v);
  static Expr binary(Kind kind, Expr lhs, Expr rhs, int position = -1);
  static Expr unary(Kind kind, Expr arg, int position = -1);
  static Expr power(Expr base, int exponent, int position = -1);

  Kind kind() const;
  cplx value() const;
  Var var() const;
  int exponent() const;
  /// First (or only) child.
  Expr lhs() const;
  Expr rhs() const;
  /// Offset in the parsed source, -1 for synthesized nodes.
  int position() const;

  bool is_constant() const { return kind() == Kind::constant; }
  bool is_constant(cplx c) const { return is_constant() && value() == c; }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Simplifying constructors (constant folding, 0/1 elimination).
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int exponent);
Expr exp(const Expr& a);
Expr log(const Expr& a);

/// Parses the right-hand-side grammar: + - * / with usual precedence, `^` with a
/// non-negative integer exponent, exp(), log(), variables t x u v, and complex
/// literals such as `2.5`, `3i`, `1e-3i` or the bare imaginary unit `i`.
Expr parse(std::string_view text);

/// Fully parenthesized text that parses back to an equal-valued tree.
std::string print(const Expr& e);

struct Point {
  double t = 0.0;
  cplx x{};
  cplx u{};
  cplx v{};
};

cplx eval(const Expr& e, const Point& p);
inline cplx eval(const Expr& e, double t, cplx x, cplx u, cplx v) {
  return eval(e, Point{t, x, u, v});
}

/// Exact symbolic partial derivative.
Expr diff(const Expr& e, Var var);

/// Replaces every occurrence of `var` with `replacement`.
Expr substitute(const Expr& e, Var var, const Expr& replacement);

bool depends_on(const Expr& e, Var var);

/// Number of nodes; used by tests and generators.
std::size_t node_count(const Expr& e);

/// t u_t = F(t, x, u, v) with v = u_x, or v = x u_x when `euler_form` is set.
struct PdeSpec {
  Expr rhs;
  bool euler_form = false;
  WeightFn weight = WeightFn::power(1.0);
  double T0 = 1.0;
  double R0 = 1.0;
  double rho0 = 1.0;
  std::optional<Sector> sector;

  /// Throws DomainError on non-positive parameters.
  void validate() const;
};

PdeSpec make_pde(std::string_view rhs, bool euler_form = false);

}  // namespace sfpde
