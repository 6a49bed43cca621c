#pragma once

#include "sfpde/bivariate.hpp"
#include "sfpde/classify.hpp"
#include "sfpde/core.hpp"
#include "sfpde/expr.hpp"

#include <string>
#include <vector>

namespace sfpde {

struct SmallDivisor {
  int i;
  int j;
  double modulus;
};

/// Truncated u0 = sum_{1<=i<=M, 0<=j<=N} u_ij t^i x^j.
class DoubleSeries {
 public:
  DoubleSeries(int M, int N);

  int M() const { return M_; }
  int N() const { return N_; }

  cplx& at(int i, int j);
  cplx at(int i, int j) const;  // zero for i = 0

  /// Row-major over i = 1..M, j = 0..N.
  const std::vector<cplx>& coeffs() const { return c_; }

  cplx eval(double t, cplx x) const;
  cplx eval_dx(double t, cplx x) const;
  /// t du/dt
  cplx eval_tdt(double t, cplx x) const;

  /// Divisors with modulus in [res_tol, 1e-3]; kept for reporting.
  std::vector<SmallDivisor> near_resonances;

 private:
  int M_;
  int N_;
  std::vector<cplx> c_;
};

class ResonanceError : public SeriesError {
 public:
  ResonanceError(const std::string& what, std::vector<SmallDivisor> log)
      : SeriesError(what), log_(std::move(log)) {}
  const std::vector<SmallDivisor>& log() const { return log_; }

 private:
  std::vector<SmallDivisor> log_;
};

/// Order-by-order solve of t u_t = F for Cases 1 and 2.
///
/// Coefficients are fixed in order of total degree i+j, then i. Each divisor is
/// measured from the composed series, so it equals i - lambda(0) - j c(0) whenever
/// the linear jet has the expected form.
DoubleSeries build_solution(const PdeSpec& pde, const CaseClass& cc, int M, int N,
                            double res_tol = 1e-8);

/// max |t u_t - F(t, x, u, v)| of the truncated series over the grid.
double residual(const PdeSpec& pde, const DoubleSeries& s, const Grid& grid);

inline cplx series_eval(const DoubleSeries& s, double t, cplx x) { return s.eval(t, x); }

std::string series_to_json(const DoubleSeries& s);
DoubleSeries series_from_json(const std::string& text);

}  // namespace sfpde
