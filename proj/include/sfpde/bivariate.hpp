#pragma once

#include "sfpde/core.hpp"
#include "sfpde/expr.hpp"

#include <stdexcept>
#include <vector>

namespace sfpde {

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated power series sum_{i<=deg_t, j<=deg_x} c_ij t^i x^j.
///
/// Truncation is rectangular, so coefficient (i,j) of every result depends only
/// on operand coefficients (i',j') with i'<=i and j'<=j and is exact.
class BiSeries {
 public:
  BiSeries(int deg_t, int deg_x);

  static BiSeries constant(int deg_t, int deg_x, cplx value);
  static BiSeries t_monomial(int deg_t, int deg_x);
  static BiSeries x_monomial(int deg_t, int deg_x);

  int deg_t() const { return deg_t_; }
  int deg_x() const { return deg_x_; }

  cplx& at(int i, int j) { return c_[index(i, j)]; }
  cplx at(int i, int j) const { return c_[index(i, j)]; }

  BiSeries& operator+=(const BiSeries& o);
  BiSeries& operator-=(const BiSeries& o);
  BiSeries& operator*=(cplx s);

  friend BiSeries operator+(BiSeries a, const BiSeries& b) { return a += b; }
  friend BiSeries operator-(BiSeries a, const BiSeries& b) { return a -= b; }
  friend BiSeries operator*(const BiSeries& a, const BiSeries& b);
  friend BiSeries operator*(BiSeries a, cplx s) { return a *= s; }
  friend BiSeries operator-(BiSeries a) { return a *= -1.0; }

  BiSeries reciprocal() const;
  BiSeries pow(int n) const;
  BiSeries exp() const;
  BiSeries log() const;

  /// d/dx, with the top x coefficient dropped.
  BiSeries dx() const;
  /// x d/dx (exact, no truncation).
  BiSeries euler_dx() const;
  /// t d/dt.
  BiSeries euler_dt() const;

  cplx eval(cplx t, cplx x) const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(deg_x_ + 1) +
           static_cast<std::size_t>(j);
  }
  void require_same_shape(const BiSeries& o) const;
  /// Sum over k of coeffs[k] * (this - c00)^k.
  BiSeries nilpotent_series(const std::vector<cplx>& coeffs) const;

  int deg_t_;
  int deg_x_;
  std::vector<cplx> c_;
};

BiSeries operator/(const BiSeries& a, const BiSeries& b);

/// Evaluates an expression with each variable replaced by a series.
BiSeries eval_series(const Expr& e, const BiSeries& t, const BiSeries& x, const BiSeries& u,
                     const BiSeries& v);

}  // namespace sfpde
