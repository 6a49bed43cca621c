#pragma once

#include "sfpde/core.hpp"
#include "sfpde/stepper.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sfpde {

using Field2 = std::function<cplx(double, cplx)>;

/// Coefficients of the linear transport problem along characteristics.
///
/// Case 1: t w_t - b w_x = (lambda + a) w.
/// Case 2: t w_t - (b + x c) w_x = (lambda + a) w.
/// Case 3: t w_t - x (b + x^p c) w_x = (lambda + a) w, with q = x w_x.
/// Empty evaluators read as zero. When `ell` or `gamma` is empty it is derived from
/// the other coefficients by Cauchy-circle differentiation.
struct FieldSpec {
  int case_id = 1;
  int p = 0;
  Field2 b;
  Field2 c;
  Field2 lambda;
  Field2 a;
  Field2 gamma;
  Field2 ell;
  double a_decay = 0.1;
  double deriv_radius = 1e-3;

  cplx drift(double t, cplx x) const;
  cplx b_at(double t, cplx x) const;
  cplx c_at(double t, cplx x) const;
  cplx lambda_at(double t, cplx x) const;
  cplx a_at(double t, cplx x) const;
  cplx gamma_at(double t, cplx x) const;
  cplx ell_at(double t, cplx x) const;
  /// Coefficient of q in the q equation.
  cplx q_rate(double t, cplx x) const;
};

enum class TraceStatus { reached_tmin, exited_domain, step_failure };
std::string to_string(TraceStatus s);

struct CharTrace {
  std::vector<double> t;  // strictly decreasing from t0
  std::vector<cplx> x;
  std::vector<cplx> w;  // filled by transport()
  std::vector<cplx> q;
  TraceStatus status = TraceStatus::reached_tmin;
  std::optional<double> exit_t;
  std::optional<cplx> exit_x;
  std::string message;
  double t0 = 0.0;
  cplx xi{};
  bool transported() const { return !w.empty(); }
};

struct TraceOptions {
  double tol = 1e-10;
  /// Largest log-time step; also the maximum spacing of samples.
  double max_ds = 0.25;
};

/// Integrates t dx/dt = -drift(t, x) from (t0, xi) toward t_min in s = log t.
CharTrace trace(const FieldSpec& f, double t0, cplx xi, double t_min, const Domain& dom,
                const TraceOptions& opt = {});

/// Solves t dw/dt = (lambda + a) w and t dq/dt = gamma w + q_rate q along the trace.
CharTrace transport(const FieldSpec& f, const CharTrace& tr, cplx w0, cplx q0,
                    const TraceOptions& opt = {});

struct PairViolation {
  double t1;
  double tau;
  bool w_fails;
  bool q_fails;
};

struct DecayReport {
  long pairs_checked = 0;
  std::vector<PairViolation> violations;
  double gamma = 0.0;
  /// (t_min/t0)^a sup|w*|, the extrapolated bound on |w*(t0)|.
  double step5_bound = 0.0;
  bool pass() const { return violations.empty(); }
};

/// Checks |w*(tau)| <= (t1/tau)^a |w*(t1)| and the companion q* bound on pairs t1 < tau.
/// With max_pairs > 0 an evenly strided subset of all pairs is checked.
DecayReport verify_decay(const CharTrace& tr, double a_decay, double Gamma = 0.0,
                         long max_pairs = 0);

struct PositionReport {
  std::vector<double> lhs;  // |x(t1)|
  std::vector<double> rhs;
  bool bound_holds = true;
  /// |b| <= B0 mu + B1 |w*| + B2 |q*| along the trace.
  bool drift_bound_holds = true;
  double helper1_max = 0.0;  // max over t1 of int (t1/tau)^a dtau/tau, <= 1/a
  double helper2_max = 0.0;  // same with log(tau/t1), <= 1/a^2
  bool helpers_hold = true;
  bool pass() const { return bound_holds && helpers_hold; }
};

PositionReport verify_position(const FieldSpec& f, const CharTrace& tr, double B0, double B1,
                               double B2, const PhiWeight& phi, double Gamma);

struct EscapeBudget {
  double B0 = 0.0;
  double B1 = 0.0;
  double B2 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double sigma = 0.1;
};

struct EscapeReport {
  double A = 0.0;
  double L = 0.0;
  double Gamma = 0.0;
  double lhs = 0.0;  // B0 phi(sigma) + (B1/a + B2 Gamma/a^2) r1 + (B2/a) r2
  double half_radius = 0.0;
  bool radius_budget = false;
  bool rate_budget = false;  // A + L < a
  bool budget_holds() const { return radius_budget && rate_budget; }
  std::vector<TraceStatus> statuses;
  std::vector<double> final_t;
  bool all_confined = false;
  /// Budget implies confinement.
  bool pass() const { return !budget_holds() || all_confined; }
};

EscapeReport escape_check(const FieldSpec& f, const Disc& dom, const std::vector<cplx>& xi_set,
                          double t0, double t_min, const EscapeBudget& budget,
                          const PhiWeight& phi, const TraceOptions& opt = {});

struct PhiReport {
  std::vector<cplx> phi;  // per trace sample
  double theta_phi = 0.0;
  double delta = 0.0;  // the delta used for the angle check
  double observed_delta = 0.0;  // sup |int_t^t0 b dtau/tau|
  bool applicable = false;  // delta < log 2
  bool modulus_ok = true;
  bool angle_ok = true;
  bool pass() const { return !applicable || (modulus_ok && angle_ok); }
};

/// phi(t) = exp(-int_t^t0 b(tau, x(tau)) dtau/tau) along a Case 3 trace.
PhiReport phi_factor(const FieldSpec& f, const CharTrace& tr,
                     std::optional<double> delta = std::nullopt);

struct ReconstructReport {
  std::vector<cplx> reconstructed;
  std::vector<double> rel_dev;
  std::vector<bool> branch_flag;
  double max_rel_dev = 0.0;
  double C0 = 0.0;
  double eps1 = 0.0;
  double theta_phi = 0.0;
  bool envelope_applicable = false;
  bool lower_ok = true;
  bool upper_ok = true;
  bool arg_ok = true;
  bool nonzero = true;
};

/// Closed-form x(t1) from phi and int c/phi^p along the trace, compared with the trace.
ReconstructReport sector_reconstruct(const FieldSpec& f, const CharTrace& tr, int p,
                                     std::optional<double> C0 = std::nullopt,
                                     std::optional<double> eps1 = std::nullopt);

struct NagumoReport {
  long points_checked = 0;
  long points_excluded = 0;
  double sup_f = 0.0;
  double worst_ratio = 0.0;  // max |x f'| d_S / sup|f|
  bool pointwise_ok = true;
  /// For f = x^m: sup over S(eta theta/2, eta R/2) of |x f'| divided by eta^(m-1).
  std::vector<double> etas;
  std::vector<double> scaled_sup;
  bool scaling_ok = true;
};

NagumoReport nagumo_check(const std::function<cplx(cplx)>& f, const Sector& s, int radii = 24,
                          int angles = 17);
/// Scaling corollary on f(x) = x^m.
NagumoReport nagumo_power_scaling(int m, const Sector& s, const std::vector<double>& etas);

std::string trace_csv(const CharTrace& tr);

}  // namespace sfpde
