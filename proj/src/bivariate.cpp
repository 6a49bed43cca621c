#include "sfpde/bivariate.hpp"

#include <cmath>

namespace sfpde {

BiSeries::BiSeries(int deg_t, int deg_x)
    : deg_t_(deg_t),
      deg_x_(deg_x),
      c_(static_cast<std::size_t>((deg_t + 1) * (deg_x + 1)), cplx{}) {
  if (deg_t < 0 || deg_x < 0) throw SeriesError("negative truncation degree");
}

BiSeries BiSeries::constant(int deg_t, int deg_x, cplx value) {
  BiSeries s(deg_t, deg_x);
  s.at(0, 0) = value;
  return s;
}

BiSeries BiSeries::t_monomial(int deg_t, int deg_x) {
  BiSeries s(deg_t, deg_x);
  if (deg_t >= 1) s.at(1, 0) = 1.0;
  return s;
}

BiSeries BiSeries::x_monomial(int deg_t, int deg_x) {
  BiSeries s(deg_t, deg_x);
  if (deg_x >= 1) s.at(0, 1) = 1.0;
  return s;
}

void BiSeries::require_same_shape(const BiSeries& o) const {
  if (o.deg_t_ != deg_t_ || o.deg_x_ != deg_x_) throw SeriesError("series shape mismatch");
}

BiSeries& BiSeries::operator+=(const BiSeries& o) {
  require_same_shape(o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

BiSeries& BiSeries::operator-=(const BiSeries& o) {
  require_same_shape(o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

BiSeries& BiSeries::operator*=(cplx s) {
  for (auto& c : c_) c *= s;
  return *this;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) {
  a.require_same_shape(b);
  BiSeries out(a.deg_t_, a.deg_x_);
  for (int i1 = 0; i1 <= a.deg_t_; ++i1)
    for (int j1 = 0; j1 <= a.deg_x_; ++j1) {
      const cplx ca = a.at(i1, j1);
      if (ca == cplx{}) continue;
      for (int i2 = 0; i1 + i2 <= a.deg_t_; ++i2)
        for (int j2 = 0; j1 + j2 <= a.deg_x_; ++j2) out.at(i1 + i2, j1 + j2) += ca * b.at(i2, j2);
    }
  return out;
}

BiSeries BiSeries::nilpotent_series(const std::vector<cplx>& coeffs) const {
  // (this - c00)^k vanishes for k > deg_t + deg_x, so Horner on the truncated
  // polynomial in the nilpotent part is exact.
  BiSeries nil = *this;
  nil.at(0, 0) = 0.0;
  BiSeries acc = constant(deg_t_, deg_x_, coeffs.back());
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
    acc = acc * nil;
    acc.at(0, 0) += coeffs[k];
  }
  return acc;
}

BiSeries BiSeries::reciprocal() const {
  const cplx c0 = at(0, 0);
  if (std::abs(c0) < 1e-300) throw SeriesError("series division by a term vanishing at (0,0)");
  // 1/(c0 + n) = sum_k (-1)^k n^k / c0^(k+1)
  std::vector<cplx> coeffs(static_cast<std::size_t>(deg_t_ + deg_x_ + 1));
  cplx term = 1.0 / c0;
  for (auto& c : coeffs) {
    c = term;
    term *= -1.0 / c0;
  }
  return nilpotent_series(coeffs);
}

BiSeries BiSeries::pow(int n) const {
  if (n < 0) throw SeriesError("negative power");
  BiSeries result = constant(deg_t_, deg_x_, 1.0);
  BiSeries base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

BiSeries BiSeries::exp() const {
  const cplx c0 = at(0, 0);
  std::vector<cplx> coeffs(static_cast<std::size_t>(deg_t_ + deg_x_ + 1));
  cplx term = std::exp(c0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    coeffs[k] = term;
    term /= static_cast<double>(k + 1);
  }
  return nilpotent_series(coeffs);
}

BiSeries BiSeries::log() const {
  const cplx c0 = at(0, 0);
  if (c0 == cplx{}) throw SeriesError("series log of a term vanishing at (0,0)");
  std::vector<cplx> coeffs(static_cast<std::size_t>(deg_t_ + deg_x_ + 1));
  coeffs[0] = std::log(c0);
  cplx inv_pow = 1.0;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    inv_pow /= c0;
    coeffs[k] = (k % 2 == 1 ? 1.0 : -1.0) * inv_pow / static_cast<double>(k);
  }
  return nilpotent_series(coeffs);
}

BiSeries BiSeries::dx() const {
  BiSeries out(deg_t_, deg_x_);
  for (int i = 0; i <= deg_t_; ++i)
    for (int j = 0; j < deg_x_; ++j) out.at(i, j) = static_cast<double>(j + 1) * at(i, j + 1);
  return out;
}

BiSeries BiSeries::euler_dx() const {
  BiSeries out(deg_t_, deg_x_);
  for (int i = 0; i <= deg_t_; ++i)
    for (int j = 0; j <= deg_x_; ++j) out.at(i, j) = static_cast<double>(j) * at(i, j);
  return out;
}

BiSeries BiSeries::euler_dt() const {
  BiSeries out(deg_t_, deg_x_);
  for (int i = 0; i <= deg_t_; ++i)
    for (int j = 0; j <= deg_x_; ++j) out.at(i, j) = static_cast<double>(i) * at(i, j);
  return out;
}

cplx BiSeries::eval(cplx t, cplx x) const {
  cplx acc{};
  for (int i = deg_t_; i >= 0; --i) {
    cplx row{};
    for (int j = deg_x_; j >= 0; --j) row = row * x + at(i, j);
    acc = acc * t + row;
  }
  return acc;
}

BiSeries operator/(const BiSeries& a, const BiSeries& b) { return a * b.reciprocal(); }

BiSeries eval_series(const Expr& e, const BiSeries& t, const BiSeries& x, const BiSeries& u,
                     const BiSeries& v) {
  using K = Expr::Kind;
  auto rec = [&](const Expr& sub) { return eval_series(sub, t, x, u, v); };
  switch (e.kind()) {
    case K::constant: return BiSeries::constant(t.deg_t(), t.deg_x(), e.value());
    case K::variable:
      switch (e.var()) {
        case Var::t: return t;
        case Var::x: return x;
        case Var::u: return u;
        case Var::v: return v;
      }
      break;
    case K::add: return rec(e.lhs()) + rec(e.rhs());
    case K::sub: return rec(e.lhs()) - rec(e.rhs());
    case K::mul: {
      const Expr l = e.lhs();
      const Expr r = e.rhs();
      if (l.is_constant()) return rec(r) * l.value();
      if (r.is_constant()) return rec(l) * r.value();
      return rec(l) * rec(r);
    }
    case K::div: {
      const Expr r = e.rhs();
      if (r.is_constant()) {
        if (std::abs(r.value()) < 1e-300) throw SeriesError("series division by zero constant");
        return rec(e.lhs()) * (1.0 / r.value());
      }
      return rec(e.lhs()) / rec(r);
    }
    case K::neg: return -rec(e.lhs());
    case K::pow: return rec(e.lhs()).pow(e.exponent());
    case K::exp: return rec(e.lhs()).exp();
    case K::log: return rec(e.lhs()).log();
  }
  throw SeriesError("unknown expression node");
}

}  // namespace sfpde
