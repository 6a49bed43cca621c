#include "sfpde/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sfpde {

namespace {

cplx call(const Field2& f, double t, cplx x) { return f ? f(t, x) : cplx{}; }

StepperOptions stepper_options(const TraceOptions& opt) {
  StepperOptions so;
  so.tol = opt.tol;
  so.max_ds = opt.max_ds;
  so.h_init = std::min(1e-2, opt.max_ds);
  return so;
}

/// Cubic Hermite interpolation of x(s) on [s_k, s_k+1] at fraction th.
cplx hermite(cplx x0, cplx x1, cplx d0, cplx d1, double h, double th) {
  const double th2 = th * th, th3 = th2 * th;
  const double h00 = 2 * th3 - 3 * th2 + 1;
  const double h10 = th3 - 2 * th2 + th;
  const double h01 = -2 * th3 + 3 * th2;
  const double h11 = th3 - th2;
  return h00 * x0 + h10 * h * d0 + h01 * x1 + h11 * h * d1;
}

/// Piecewise view of a trace in log-time with Hermite-interpolated interior points.
struct TraceView {
  const FieldSpec& f;
  const CharTrace& tr;
  std::vector<double> s;
  std::vector<cplx> dx;  // dx/ds at samples

  TraceView(const FieldSpec& field, const CharTrace& trace) : f(field), tr(trace) {
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      s.push_back(std::log(tr.t[k]));
      dx.push_back(-f.drift(tr.t[k], tr.x[k]));
    }
  }
  std::size_t size() const { return s.size(); }
  double h(std::size_t k) const { return s[k + 1] - s[k]; }
  double s_at(std::size_t k, double th) const { return s[k] + th * h(k); }
  cplx x_at(std::size_t k, double th) const {
    if (th == 0.0) return tr.x[k];
    if (th == 1.0) return tr.x[k + 1];
    return hermite(tr.x[k], tr.x[k + 1], dx[k], dx[k + 1], h(k), th);
  }
  double t_at(std::size_t k, double th) const {
    if (th == 0.0) return tr.t[k];
    if (th == 1.0) return tr.t[k + 1];
    return std::exp(s_at(k, th));
  }
  /// Simpson rule for int g(s) ds over the sub-interval [th0, th1] of segment k,
  /// oriented toward decreasing s (so the result is int_{s(th1)}^{s(th0)}).
  template <class G>
  cplx simpson(std::size_t k, double th0, double th1, G&& g) const {
    const double thm = 0.5 * (th0 + th1);
    const double len = -(th1 - th0) * h(k);
    return len / 6.0 * (g(k, th0) + 4.0 * g(k, thm) + g(k, th1));
  }
};

/// Cumulative J_k = int_{t_k}^{t0} b dtau/tau and the segment-midpoint values.
struct BIntegral {
  std::vector<cplx> at_sample;
  std::vector<cplx> at_mid;  // J at the midpoint of segment k
};

BIntegral integrate_b(const TraceView& v) {
  BIntegral out;
  auto bval = [&](std::size_t k, double th) { return v.f.b_at(v.t_at(k, th), v.x_at(k, th)); };
  out.at_sample.push_back(0.0);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const cplx jk = out.at_sample.back();
    out.at_mid.push_back(jk + v.simpson(k, 0.0, 0.5, bval));
    out.at_sample.push_back(jk + v.simpson(k, 0.0, 1.0, bval));
  }
  return out;
}

}  // namespace

cplx FieldSpec::b_at(double t, cplx x) const { return call(b, t, x); }
cplx FieldSpec::c_at(double t, cplx x) const { return call(c, t, x); }
cplx FieldSpec::lambda_at(double t, cplx x) const { return call(lambda, t, x); }
cplx FieldSpec::a_at(double t, cplx x) const { return call(a, t, x); }

cplx FieldSpec::drift(double t, cplx x) const {
  switch (case_id) {
    case 1: return b_at(t, x);
    case 2: return b_at(t, x) + x * c_at(t, x);
    default: {
      cplx xp = 1.0;
      for (int k = 0; k < p; ++k) xp *= x;
      return x * (b_at(t, x) + xp * c_at(t, x));
    }
  }
}

cplx FieldSpec::ell_at(double t, cplx x) const {
  if (ell) return ell(t, x);
  const double r = deriv_radius;
  switch (case_id) {
    case 1: return cauchy_derivative([&](cplx z) { return b_at(t, z); }, x, r);
    case 2:
      return cauchy_derivative([&](cplx z) { return b_at(t, z); }, x, r) +
             x * cauchy_derivative([&](cplx z) { return c_at(t, z); }, x, r);
    default: {
      auto h = [&](cplx z) {
        cplx zp = 1.0;
        for (int k = 0; k < p; ++k) zp *= z;
        return b_at(t, z) + zp * c_at(t, z);
      };
      return x * cauchy_derivative(h, x, r);
    }
  }
}

cplx FieldSpec::gamma_at(double t, cplx x) const {
  if (gamma) return gamma(t, x);
  const cplx d = cauchy_derivative([&](cplx z) { return lambda_at(t, z) + a_at(t, z); }, x,
                                   deriv_radius);
  return case_id == 3 ? x * d : d;
}

cplx FieldSpec::q_rate(double t, cplx x) const {
  cplx r = lambda_at(t, x) + a_at(t, x) + ell_at(t, x);
  if (case_id == 2) r += c_at(t, x);
  return r;
}

std::string to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::reached_tmin: return "reached_tmin";
    case TraceStatus::exited_domain: return "exited_domain";
    case TraceStatus::step_failure: return "step_failure";
  }
  return "unknown";
}

CharTrace trace(const FieldSpec& f, double t0, cplx xi, double t_min, const Domain& dom,
                const TraceOptions& opt) {
  if (!(t_min > 0.0) || !(t_min < t0)) throw DomainError("trace needs 0 < t_min < t0");
  if (!domain_contains(dom, xi)) throw DomainError("initial point lies outside the domain");
  const OdeRhs rhs = [&f](double s, const State& y) { return State{-f.drift(std::exp(s), y[0])}; };
  const auto inside = [&dom](const State& y) { return domain_contains(dom, y[0]); };
  const double s0 = std::log(t0), s1 = std::log(t_min);
  const OdeResult r = integrate_ode(rhs, s0, s1, State{xi}, stepper_options(opt), inside);

  CharTrace tr;
  tr.t0 = t0;
  tr.xi = xi;
  for (std::size_t k = 0; k < r.s.size(); ++k) {
    double t = std::exp(r.s[k]);
    if (k == 0) t = t0;
    else if (r.s[k] == s1) t = t_min;
    if (!tr.t.empty() && !(t < tr.t.back())) continue;
    tr.t.push_back(t);
    tr.x.push_back(r.y[k][0]);
  }
  switch (r.status) {
    case StepStatus::reached_end: tr.status = TraceStatus::reached_tmin; break;
    case StepStatus::left_region:
      tr.status = TraceStatus::exited_domain;
      tr.exit_t = std::exp(r.exit_s);
      tr.exit_x = r.exit_y[0];
      break;
    case StepStatus::step_failure:
      tr.status = TraceStatus::step_failure;
      tr.message = r.message;
      break;
  }
  return tr;
}

CharTrace transport(const FieldSpec& f, const CharTrace& tr, cplx w0, cplx q0,
                    const TraceOptions& opt) {
  CharTrace out = tr;
  out.w.clear();
  out.q.clear();
  if (tr.t.empty()) return out;
  const OdeRhs rhs = [&f](double s, const State& y) {
    const double t = std::exp(s);
    const cplx x = y[0];
    const cplx lw = f.lambda_at(t, x) + f.a_at(t, x);
    return State{-f.drift(t, x), lw * y[1], f.gamma_at(t, x) * y[1] + f.q_rate(t, x) * y[2]};
  };
  std::vector<double> stops;
  for (double t : tr.t) stops.push_back(std::log(t));
  const OdeResult r =
      integrate_ode(rhs, stops.front(), stops.back(), State{tr.x.front(), w0, q0},
                    stepper_options(opt), {}, stops);
  std::size_t j = 0;
  for (std::size_t k = 0; k < stops.size(); ++k) {
    while (j < r.s.size() && r.s[j] != stops[k]) ++j;
    if (j == r.s.size()) break;
    out.w.push_back(r.y[j][1]);
    out.q.push_back(r.y[j][2]);
  }
  if (out.w.size() < out.t.size()) {
    out.t.resize(out.w.size());
    out.x.resize(out.w.size());
    out.status = TraceStatus::step_failure;
    out.message = "transport failed: " + r.message;
  }
  return out;
}

DecayReport verify_decay(const CharTrace& tr, double a_decay, double Gamma, long max_pairs) {
  if (!tr.transported()) throw DomainError("verify_decay needs a transported trace");
  DecayReport rep;
  rep.gamma = Gamma;
  const std::size_t n = tr.t.size();
  const long total = static_cast<long>(n * (n - 1) / 2);
  const long stride = (max_pairs > 0 && total > max_pairs) ? total / max_pairs : 1;
  long counter = 0;
  auto within = [](double lhs, double rhs) { return lhs <= rhs + 1e-9 * std::max(1.0, rhs); };
  for (std::size_t k = 0; k < n; ++k)        // tau = t_k
    for (std::size_t i = k + 1; i < n; ++i) {  // t1 = t_i < tau
      if (counter++ % stride != 0) continue;
      if (max_pairs > 0 && rep.pairs_checked >= max_pairs) continue;
      ++rep.pairs_checked;
      const double t1 = tr.t[i], tau = tr.t[k];
      const double fac = std::pow(t1 / tau, a_decay);
      const bool w_ok = within(std::abs(tr.w[k]), fac * std::abs(tr.w[i]));
      const double q_rhs =
          fac * (Gamma * std::abs(tr.w[i]) * std::log(tau / t1) + std::abs(tr.q[i]));
      const bool q_ok = within(std::abs(tr.q[k]), q_rhs);
      if (!w_ok || !q_ok) rep.violations.push_back({t1, tau, !w_ok, !q_ok});
    }
  double r1 = 0.0;
  for (const cplx& w : tr.w) r1 = std::max(r1, std::abs(w));
  rep.step5_bound = std::pow(tr.t.back() / tr.t.front(), a_decay) * r1;
  return rep;
}

PositionReport verify_position(const FieldSpec& f, const CharTrace& tr, double B0, double B1,
                               double B2, const PhiWeight& phi, double Gamma) {
  if (!tr.transported()) throw DomainError("verify_position needs a transported trace");
  PositionReport rep;
  const double a = f.a_decay;
  const double t0 = tr.t.front();
  const double phi0 = phi(t0);
  const double xi = std::abs(tr.x.front());
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const double t1 = tr.t[k];
    const double lhs = std::abs(tr.x[k]);
    const double rhs = xi + B0 * (phi0 - phi(t1)) + (B1 / a + B2 * Gamma / (a * a)) * std::abs(tr.w[k]) +
                       (B2 / a) * std::abs(tr.q[k]);
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    if (lhs > rhs * (1.0 + 1e-9) + 1e-12) rep.bound_holds = false;

    const double bmod = std::abs(f.b_at(t1, tr.x[k]));
    const double bbound = B0 * phi.weight()(t1) + B1 * std::abs(tr.w[k]) + B2 * std::abs(tr.q[k]);
    if (bmod > bbound * (1.0 + 1e-9) + 1e-12) rep.drift_bound_holds = false;

    // In y = log(tau/t1) both helpers become integrals of e^{-a y} (times y) on [0, L].
    const double L = std::log(t0 / t1);
    const double h1 = integrate([a](double y) { return std::exp(-a * y); }, 0.0, L);
    const double h2 = integrate([a](double y) { return y * std::exp(-a * y); }, 0.0, L);
    rep.helper1_max = std::max(rep.helper1_max, h1);
    rep.helper2_max = std::max(rep.helper2_max, h2);
  }
  rep.helpers_hold = rep.helper1_max <= 1.0 / a * (1.0 + 1e-12) &&
                     rep.helper2_max <= 1.0 / (a * a) * (1.0 + 1e-12);
  return rep;
}

EscapeReport escape_check(const FieldSpec& f, const Disc& dom, const std::vector<cplx>& xi_set,
                          double t0, double t_min, const EscapeBudget& budget,
                          const PhiWeight& phi, const TraceOptions& opt) {
  EscapeReport rep;
  const double a = f.a_decay;
  auto pts = disc_points(dom, 8, 32);
  pts.push_back(0.0);
  for (double t : geometric_times(std::max(t_min, budget.sigma * 1e-6), budget.sigma, 13))
    for (cplx x : pts) {
      rep.A = std::max(rep.A, std::abs(f.a_at(t, x)));
      rep.L = std::max(rep.L, std::abs(f.ell_at(t, x)));
      rep.Gamma = std::max(rep.Gamma, std::abs(f.gamma_at(t, x)));
    }
  rep.lhs = budget.B0 * phi(budget.sigma) +
            (budget.B1 / a + budget.B2 * rep.Gamma / (a * a)) * budget.r1 +
            (budget.B2 / a) * budget.r2;
  rep.half_radius = dom.R / 2.0;
  rep.radius_budget = rep.lhs < rep.half_radius;
  rep.rate_budget = rep.A + rep.L < a;
  rep.all_confined = true;
  for (cplx xi : xi_set) {
    if (!(std::abs(xi) < dom.R / 2.0)) throw DomainError("escape_check starts inside D_{R/2}");
    const CharTrace tr = trace(f, t0, xi, t_min, Domain(dom), opt);
    rep.statuses.push_back(tr.status);
    rep.final_t.push_back(tr.t.back());
    if (tr.status != TraceStatus::reached_tmin) rep.all_confined = false;
  }
  return rep;
}

PhiReport phi_factor(const FieldSpec& f, const CharTrace& tr, std::optional<double> delta) {
  PhiReport rep;
  const TraceView v(f, tr);
  const BIntegral J = integrate_b(v);
  for (const cplx& j : J.at_sample) {
    rep.observed_delta = std::max(rep.observed_delta, std::abs(j));
    const cplx ph = std::exp(-j);
    rep.phi.push_back(ph);
    rep.theta_phi = std::max(rep.theta_phi, std::abs(std::arg(ph)));
    const double m = std::abs(ph);
    if (m < 0.5 * (1.0 - 1e-12) || m > 2.0 * (1.0 + 1e-12)) rep.modulus_ok = false;
  }
  rep.delta = delta.value_or(rep.observed_delta);
  rep.applicable = rep.delta < std::log(2.0);
  const double bound = 2.0 * rep.delta >= 1.0 ? kPi / 2 : std::asin(2.0 * rep.delta);
  rep.angle_ok = rep.theta_phi <= bound + 1e-12;
  return rep;
}

ReconstructReport sector_reconstruct(const FieldSpec& f, const CharTrace& tr, int p,
                                     std::optional<double> C0, std::optional<double> eps1) {
  if (p < 1) throw DomainError("sector reconstruction needs p >= 1");
  ReconstructReport rep;
  const TraceView v(f, tr);
  const BIntegral J = integrate_b(v);
  const cplx xi = tr.x.front();
  const double t0 = tr.t.front();

  for (const cplx& x : tr.x)
    if (!(std::abs(x) > 0.0)) rep.nonzero = false;

  // phi at fraction th of segment k, from J at the segment start.
  auto phi_at = [&](std::size_t k, double th) -> cplx {
    if (th == 0.0) return std::exp(-J.at_sample[k]);
    if (th == 1.0) return std::exp(-J.at_sample[k + 1]);
    if (th == 0.5) return std::exp(-J.at_mid[k]);
    auto bval = [&](std::size_t kk, double tt) { return f.b_at(v.t_at(kk, tt), v.x_at(kk, tt)); };
    return std::exp(-(J.at_sample[k] + v.simpson(k, 0.0, th, bval)));
  };
  auto integrand = [&](std::size_t k, double th) {
    return f.c_at(v.t_at(k, th), v.x_at(k, th)) / std::pow(phi_at(k, th), p);
  };

  double c0 = 0.0, e1 = 0.0;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const cplx c = f.c_at(tr.t[k], tr.x[k]);
    c0 = std::max(c0, std::abs(c));
    if (c != cplx{}) e1 = std::max(e1, std::abs(std::arg(-c)));
  }
  rep.C0 = C0.value_or(c0);
  rep.eps1 = eps1.value_or(e1);

  cplx I{};
  bool modulus_ok = true;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    if (k > 0) I += v.simpson(k - 1, 0.0, 1.0, integrand);
    const cplx ph = std::exp(-J.at_sample[k]);
    rep.theta_phi = std::max(rep.theta_phi, std::abs(std::arg(ph)));
    if (std::abs(ph) < 0.5 || std::abs(ph) > 2.0) modulus_ok = false;
    const cplx radicand = 1.0 - static_cast<double>(p) * std::pow(xi, p) * I;
    const bool flag = std::abs(std::arg(radicand)) > kPi - 0.1;
    rep.branch_flag.push_back(flag);
    const cplx xr = (xi / ph) / std::pow(radicand, 1.0 / p);
    rep.reconstructed.push_back(xr);
    double dev = 0.0;
    if (!flag) {
      dev = std::abs(xr - tr.x[k]) / std::abs(tr.x[k]);
      rep.max_rel_dev = std::max(rep.max_rel_dev, dev);
    }
    rep.rel_dev.push_back(dev);
  }

  const double axi = std::abs(xi), argxi = std::abs(std::arg(xi));
  rep.envelope_applicable =
      modulus_ok && p * argxi + rep.eps1 + p * rep.theta_phi <= kPi / 2;
  if (rep.envelope_applicable) {
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      const double m = std::abs(tr.x[k]);
      const double lower =
          axi / 2.0 *
          std::pow(1.0 + p * std::pow(axi, p) * rep.C0 * std::pow(2.0, p) * std::log(t0 / tr.t[k]),
                   -1.0 / p);
      if (m < lower * (1.0 - 1e-12)) rep.lower_ok = false;
      if (m > 2.0 * axi * (1.0 + 1e-12)) rep.upper_ok = false;
      if (std::abs(std::arg(tr.x[k])) > 2.0 * argxi + 2.0 * rep.theta_phi + rep.eps1 / p + 1e-12)
        rep.arg_ok = false;
    }
  }
  return rep;
}

namespace {

double sup_on_sector(const std::function<cplx(cplx)>& g, const Sector& s) {
  double sup = 0.0;
  for (cplx x : sector_points(s, 48, 33, 1000000, 1e-4)) sup = std::max(sup, std::abs(g(x)));
  return sup;
}

cplx euler_derivative(const std::function<cplx(cplx)>& f, const Sector& s, cplx x) {
  return x * cauchy_derivative(f, x, 0.5 * s.euclidean_margin(x));
}

}  // namespace

NagumoReport nagumo_check(const std::function<cplx(cplx)>& f, const Sector& s, int radii,
                          int angles) {
  NagumoReport rep;
  rep.sup_f = sup_on_sector(f, s);
  for (cplx x : sector_points(s, radii, angles)) {
    const double d = sector_distance(s, x);
    if (d < 1e-3) {
      ++rep.points_excluded;
      continue;
    }
    ++rep.points_checked;
    const double lhs = std::abs(euler_derivative(f, s, x));
    const double ratio = rep.sup_f > 0.0 ? lhs * d / rep.sup_f : (lhs > 0.0 ? 1e300 : 0.0);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (ratio > 1.05) rep.pointwise_ok = false;
  }
  return rep;
}

NagumoReport nagumo_power_scaling(int m, const Sector& s, const std::vector<double>& etas) {
  if (m < 1) throw DomainError("scaling check needs m >= 1");
  auto f = [m](cplx x) { return std::pow(x, m); };
  NagumoReport rep = nagumo_check(f, s);
  for (double eta : etas) {
    const Sector half = shrunk_sector(s, eta / 2.0);
    const double sup = sup_on_sector([&](cplx x) { return euler_derivative(f, half, x); }, half);
    rep.etas.push_back(eta);
    rep.scaled_sup.push_back(sup / std::pow(eta, m - 1));
  }
  for (std::size_t k = 1; k < rep.scaled_sup.size(); ++k)
    if (rep.etas[k] < rep.etas[k - 1] && !(rep.scaled_sup[k] < rep.scaled_sup[k - 1]))
      rep.scaling_ok = false;
  if (rep.scaled_sup.size() >= 2) {
    const double shrink = rep.etas.back() / rep.etas.front();
    if (rep.scaled_sup.back() > std::sqrt(shrink) * rep.scaled_sup.front()) rep.scaling_ok = false;
  }
  return rep;
}

std::string trace_csv(const CharTrace& tr) {
  std::string out = "t,re_x,im_x,re_w,im_w,re_q,im_q\n";
  char buf[256];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const cplx w = k < tr.w.size() ? tr.w[k] : cplx(nan, nan);
    const cplx q = k < tr.q.size() ? tr.q[k] : cplx(nan, nan);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", tr.t[k],
                  tr.x[k].real(), tr.x[k].imag(), w.real(), w.imag(), q.real(), q.imag());
    out += buf;
  }
  return out;
}

}  // namespace sfpde
