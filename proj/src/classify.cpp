#include "sfpde/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sfpde {

namespace {

// theta = (pi - arg c)/p reduced into (-pi/p, pi/p]; e^{i p theta} has period 2 pi/p.
double normalizing_angle(cplx c, int p) {
  const double period = 2.0 * kPi / p;
  double theta = std::remainder((kPi - std::arg(c)) / p, period);
  if (theta <= -kPi / p) theta += period;
  return std::abs(theta) < 1e-15 ? 0.0 : theta;
}


const Expr kZero = Expr::constant(0.0);

// Below this modulus c is evaluated from its Taylor polynomial to avoid cancellation.
constexpr double kTaylorRadius = 1e-2;

Expr at_origin_uv(const Expr& e) {
  return substitute(substitute(e, Var::u, kZero), Var::v, kZero);
}

/// Evaluates a t-only expression, nudging t = 0 to 1e-12 when it is singular there.
std::optional<cplx> eval_t(const Expr& e, double t) {
  try {
    const cplx z = eval(e, t, 0.0, 0.0, 0.0);
    if (std::isfinite(z.real()) && std::isfinite(z.imag())) return z;
  } catch (const EvalError&) {
  }
  if (t == 0.0) return eval_t(e, 1e-12);
  return std::nullopt;
}

std::vector<double> sample_times(double T0, int n) {
  std::vector<double> ts;
  for (int k = 0; k < n; ++k) ts.push_back(n == 1 ? 0.0 : T0 * k / (n - 1));
  return ts;
}

}  // namespace

cplx CaseClass::b(double t) const { return eval(b_expr, t, 0.0, 0.0, 0.0); }

cplx CaseClass::c(double t, cplx x) const {
  if (std::abs(x) >= kTaylorRadius) {
    cplx xs = 1.0;
    for (int k = 0; k < c_shift; ++k) xs *= x;
    return eval(c_num, t, x, 0.0, 0.0) / xs;
  }
  cplx acc{};
  for (std::size_t k = c_taylor.size(); k-- > 0;) acc = acc * x + eval(c_taylor[k], t, 0.0, 0.0, 0.0);
  return acc;
}

cplx CaseClass::lambda(double t, cplx x) const { return eval(lambda_expr, t, x, 0.0, 0.0); }

CaseClass classify(const PdeSpec& pde, int x_order, int t_samples, double tol) {
  if (x_order < 2) throw DomainError("x_order must be at least 2");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (t_samples < 1) throw DomainError("need at least one time sample");

  CaseClass cc;
  cc.euler_form = pde.euler_form;
  cc.tol = tol;
  cc.g = at_origin_uv(diff(pde.rhs, Var::v));
  cc.lambda_expr = at_origin_uv(diff(pde.rhs, Var::u));

  // Taylor coefficients g_k(t) = (d/dx)^k g (t,0) / k!, computed a few orders past
  // x_order so that c keeps a useful Taylor polynomial after the shift.
  const int extra = 8;
  std::vector<Expr> taylor;
  {
    Expr d = cc.g;
    double fact = 1.0;
    for (int k = 0; k <= x_order + extra; ++k) {
      if (k > 0) {
        d = diff(d, Var::x);
        fact *= k;
      }
      taylor.push_back(substitute(d, Var::x, kZero) * Expr::constant(1.0 / fact));
    }
  }

  const auto ts = sample_times(pde.T0, t_samples);
  for (int k = 0; k <= x_order; ++k) {
    double m = 0.0;
    bool any = false;
    for (double t : ts) {
      if (auto z = eval_t(taylor[static_cast<std::size_t>(k)], t)) {
        m = std::max(m, std::abs(*z));
        any = true;
      }
    }
    if (!any) {
      std::ostringstream os;
      os << "Taylor coefficient " << k << " of dF/dv cannot be evaluated on [0, T0]";
      throw EvalError(os.str());
    }
    cc.coeff_max.push_back(m);
  }

  // Non-Euler: g = b(t) + x^{p+1} c.  Euler: g = beta + x^p c with v = x u_x.
  int first = -1;
  for (int k = 1; k <= x_order; ++k) {
    const double m = cc.coeff_max[static_cast<std::size_t>(k)];
    if (m > tol) {
      first = k;
      break;
    }
    if (m >= tol / 10.0) {
      std::ostringstream os;
      os << "indeterminate classification: Taylor coefficient " << k << " has modulus " << m
         << " inside [tol/10, tol] with tol=" << tol;
      throw IndeterminateError(os.str());
    }
  }

  auto set_c = [&](int shift) {
    cc.c_shift = shift;
    cc.c_num = cc.g - taylor[0];
    for (int k = 1; k < shift; ++k)
      cc.c_num = cc.c_num - taylor[static_cast<std::size_t>(k)] * pow(Expr::variable(Var::x), k);
    cc.c_taylor.assign(taylor.begin() + shift, taylor.end());
  };

  if (pde.euler_form) {
    if (first < 0) {
      // The x u_x coefficient is t-dependent only. In u_x form this is g' = x beta(t),
      // i.e. Case 2 when beta is nonzero and Case 1 otherwise.
      const double m0 = cc.coeff_max[0];
      if (m0 > tol) {
        cc.case_id = 2;
        cc.p = 0;
        cc.b_expr = kZero;
        cc.c_shift = 0;
        cc.c_num = cc.g;
        cc.c_taylor = taylor;
      } else {
        cc.case_id = 1;
        cc.b_expr = kZero;
      }
      cc.convention = "x*u_x coefficient with no x^p c part";
    } else {
      cc.case_id = 3;
      cc.p = first;
      cc.b_expr = taylor[0];
      set_c(first);
      cc.convention = "beta(t,x) + x^p c(t,x) multiplying x*u_x";
    }
  } else {
    cc.b_expr = taylor[0];
    cc.convention = "b(t) + x^(p+1) c(t,x) multiplying u_x";
    if (first < 0) {
      cc.case_id = 1;
    } else if (first == 1) {
      cc.case_id = 2;
      cc.p = 0;
      set_c(1);
    } else {
      cc.case_id = 3;
      cc.p = first - 1;
      cc.shape_supported = false;
      set_c(first);
    }
  }

  if (auto l = eval_t(substitute(cc.lambda_expr, Var::x, kZero), 0.0)) cc.lambda00 = *l;
  else throw EvalError("lambda(0,0) cannot be evaluated");
  cc.flags.re_lambda_negative = cc.lambda00.real() < 0.0;

  if (cc.case_id >= 2) {
    if (!cc.c_taylor.empty()) {
      if (auto c0 = eval_t(cc.c_taylor[0], 0.0)) cc.c00 = *c0;
    }
  }

  if (cc.case_id == 2) {
    bool ok = true;
    const Disc d(pde.R0);
    auto pts = disc_points(d, 4, 16);
    pts.push_back(0.0);
    for (double t : sample_times(pde.T0, 9)) {
      const double tt = t == 0.0 ? 1e-12 : t;
      for (cplx x : pts) {
        try {
          if (cc.c(tt, x).real() > 1e-12) ok = false;
        } catch (const EvalError&) {
          ok = false;
        }
      }
    }
    cc.flags.re_c_nonpositive = ok;
  }

  if (cc.case_id == 3) {
    cc.flags.c00_negative = cc.c00.real() < 0.0 && std::abs(cc.c00.imag()) <= tol;
    if (std::abs(cc.c00) > tol)
      cc.flags.rotation_theta = normalizing_angle(cc.c00, cc.p);
  }

  // A2 trend on a default ladder toward t = 0.
  try {
    const double hi = std::min(pde.T0, pde.weight.T0());
    Grid grid{geometric_times(hi * 1e-8, hi, 33), disc_points(Disc(pde.R0), 4, 16)};
    const A2Report a2 = check_A2(pde, cc, grid);
    cc.flags.a2_alpha_bounded = a2.alpha_bounded;
    cc.flags.a2_b_bounded = a2.b_bounded;
  } catch (const std::exception&) {
    cc.flags.a2_alpha_bounded = false;
    cc.flags.a2_b_bounded = false;
  }
  return cc;
}

namespace {

bool bounded_trend(const std::vector<double>& times, const std::vector<double>& r) {
  if (r.empty()) return true;
  for (double v : r)
    if (!std::isfinite(v)) return false;
  // Compare the last sample with the one a decade above it.
  const double t_last = times.back();
  std::size_t k = 0;
  while (k + 1 < times.size() && times[k] > 10.0 * t_last * (1.0 + 1e-12)) ++k;
  const double rmax = *std::max_element(r.begin(), r.end());
  return r.back() - r[k] <= 1e-6 * std::max(1.0, rmax);
}

}  // namespace

A2Report check_A2(const PdeSpec& pde, const CaseClass& cc, const Grid& grid) {
  A2Report rep;
  rep.times = grid.times;
  std::sort(rep.times.begin(), rep.times.end(), std::greater<>());
  const Expr alpha = at_origin_uv(pde.rhs);
  for (double t : rep.times) {
    const double mu = pde.weight(t);
    double sup = 0.0;
    for (cplx x : grid.points) {
      double v;
      try {
        v = std::abs(eval(alpha, t, x, 0.0, 0.0));
      } catch (const EvalError&) {
        v = std::numeric_limits<double>::infinity();
      }
      sup = std::max(sup, v);
    }
    rep.alpha_ratio.push_back(sup / mu);
    double bv;
    try {
      bv = std::abs(cc.b(t));
    } catch (const EvalError&) {
      bv = std::numeric_limits<double>::infinity();
    }
    rep.b_ratio.push_back(bv / mu);
  }
  rep.alpha_bounded = bounded_trend(rep.times, rep.alpha_ratio);
  rep.b_bounded = bounded_trend(rep.times, rep.b_ratio);
  return rep;
}

std::pair<PdeSpec, double> rotate_x(const PdeSpec& pde, const CaseClass& cc) {
  if (cc.case_id != 3) throw DomainError("rotation applies to Case 3 only");
  if (std::abs(cc.c00) <= cc.tol) throw DomainError("c(0,0) vanishes, contradicting Case 3");
  const double theta = normalizing_angle(cc.c00, cc.p);
  PdeSpec out = pde;
  if (theta == 0.0) return {out, theta};
  const Expr rot = Expr::constant(std::polar(1.0, theta));
  Expr rhs = substitute(pde.rhs, Var::x, rot * Expr::variable(Var::x));
  // x u_x is invariant under scaling; u_x picks up e^{-i theta}.
  if (!pde.euler_form)
    rhs = substitute(rhs, Var::v, Expr::constant(std::polar(1.0, -theta)) * Expr::variable(Var::v));
  out.rhs = rhs;
  return {out, theta};
}

}  // namespace sfpde
