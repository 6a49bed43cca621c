#pragma once

#include "sfpde/core.hpp"
#include "sfpde/expr.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sfpde {

/// Raised when a Taylor coefficient falls in the ambiguous band [tol/10, tol].
class IndeterminateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HypothesisFlags {
  bool re_lambda_negative = false;
  /// Case 2 only: Re c <= 0 on sampled [0,T0] x D_R0.
  std::optional<bool> re_c_nonpositive;
  /// Case 3 only: c(0,0) is already a negative real.
  std::optional<bool> c00_negative;
  /// Case 3 only: angle that normalizes c(0,0) to a negative real.
  std::optional<double> rotation_theta;
  bool a2_alpha_bounded = true;
  bool a2_b_bounded = true;
};

/// Linear jet of F at (u,v) = (0,0) and the resulting case split.
struct CaseClass {
  int case_id = 1;
  /// 0 in Case 2, >= 1 in Case 3, unused (0) in Case 1.
  int p = 0;
  bool euler_form = false;
  /// False for Case 3 outside Euler form.
  bool shape_supported = true;
  std::string convention;

  Expr g;            // dF/dv(t,x,0,0)
  Expr lambda_expr;  // dF/du(t,x,0,0)
  Expr b_expr;       // depends on t only
  Expr c_num;        // c = c_num / x^c_shift away from 0
  int c_shift = 0;
  std::vector<Expr> c_taylor;  // Taylor coefficients of c in x, used near x = 0

  std::vector<double> coeff_max;  // max over t of |Taylor coefficient k of g|
  cplx lambda00{};
  cplx c00{};
  double tol = 1e-9;
  HypothesisFlags flags;

  cplx b(double t) const;
  cplx c(double t, cplx x) const;
  cplx lambda(double t, cplx x) const;
};

CaseClass classify(const PdeSpec& pde, int x_order = 8, int t_samples = 16, double tol = 1e-9);

struct A2Report {
  std::vector<double> times;        // descending
  std::vector<double> alpha_ratio;  // sup_x |F(t,x,0,0)| / mu(t)
  std::vector<double> b_ratio;      // |b(t)| / mu(t)
  bool alpha_bounded = true;
  bool b_bounded = true;
};

A2Report check_A2(const PdeSpec& pde, const CaseClass& cc, const Grid& grid);

/// Substitutes x -> e^{i theta} x so that the new c(0,0) is a negative real.
std::pair<PdeSpec, double> rotate_x(const PdeSpec& pde, const CaseClass& cc);

}  // namespace sfpde
