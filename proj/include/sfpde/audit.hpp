#pragma once

#include "sfpde/characteristics.hpp"
#include "sfpde/classify.hpp"
#include "sfpde/core.hpp"
#include "sfpde/expr.hpp"
#include "sfpde/series.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sfpde {

/// A candidate solution u(t, x) with its x-derivative and t u_t.
struct SolutionField {
  std::string name;
  std::string provenance;  // closed-form | series | sampled
  Field2 u;
  Field2 ux;
  Field2 tut;

  cplx v(double t, cplx x, bool euler_form) const {
    return euler_form ? x * ux(t, x) : ux(t, x);
  }
};

/// u given as an expression in t and x; derivatives are symbolic.
SolutionField solution_from_expr(const std::string& name, const Expr& u);
SolutionField solution_from_series(const std::string& name, const DoubleSeries& s);
/// Derivatives by a Cauchy circle in x and a central difference in t.
SolutionField solution_from_function(const std::string& name, Field2 u, double radius = 1e-3);
SolutionField zero_solution();

/// max |t u_t - F(t, x, u, v)| over the grid.
double pde_residual(const PdeSpec& pde, const SolutionField& u, const Grid& grid);

struct AuditOptions {
  std::vector<double> R_ladder{0.1, 0.05, 0.025, 0.0125};    // or eta ladder for sectors
  std::vector<double> sigma_ladder{1e-2, 1e-4, 1e-6, 1e-8};
  std::vector<double> eta_ladder{1.0, 0.5, 0.25, 0.125};
  int density = 1000;
  int circles = 8;
  int rays = 64;
  int radii = 12;
  int angles = 17;
  int times = 12;
  double zero_tol = 1e-3;
  /// Tolerance for the direct comparison sup|u - u0|.
  double tol = 1e-8;
};

/// Builds the default R ladder R0, R0/2, R0/4, R0/8.
std::vector<double> halving_ladder(double R0, int rungs = 4);

enum class Trend { tends_to_zero, tends_to_positive, diverges };
enum class Verdict { uniqueness_applies, criterion_fails, hypotheses_fail, inconclusive };
std::string to_string(Trend t);
std::string to_string(Verdict v);

struct AuditReport {
  std::string kind;  // disc | sector
  std::string solution;
  std::vector<double> space_ladder;
  std::vector<double> sigma_ladder;
  std::vector<std::vector<double>> Q;  // rows: space rung, columns: sigma rung
  std::vector<double> inner;
  std::vector<bool> sigma_monotone;
  Trend trend = Trend::tends_to_zero;
  double estimate = 0.0;
  std::string failure;  // evaluation failure location, if any

  bool sup_tends_to_zero = false;  // sup over the domain decreases to 0 as t -> 0
  double decay_exponent = 0.0;     // local log-slope of sup|u| against mu(t)

  // Filled by verdict().
  std::optional<CaseClass> classification;
  bool hypotheses_ok = false;
  std::vector<std::string> hypothesis_notes;
  std::optional<double> sup_diff;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> notes;
};

AuditReport audit_disc(const SolutionField& u, const AuditOptions& opt = {},
                       const WeightFn& weight = WeightFn::power(1.0));
AuditReport audit_sector(const SolutionField& u, const Sector& s, const AuditOptions& opt = {},
                         const WeightFn& weight = WeightFn::power(1.0));

/// Coefficient fields a, b of the linear problem satisfied by w = u - u0.
FieldSpec hadamard_fields(const PdeSpec& pde, const CaseClass& cc, const SolutionField& u0,
                          const SolutionField& u, double a_decay = 0.4);

/// max |t w_t - drift w_x - (lambda + a) w| on the grid.
double hadamard_residual(const FieldSpec& f, const SolutionField& u0, const SolutionField& u,
                         const Grid& grid);

AuditReport verdict(const PdeSpec& pde, const CaseClass& cc, const SolutionField& u,
                    const SolutionField& u0, const AuditOptions& opt = {});

std::string audit_to_json(const AuditReport& r);

}  // namespace sfpde
