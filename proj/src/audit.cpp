#include "sfpde/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sfpde {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string where(double t, cplx x) {
  std::ostringstream os;
  os.precision(17);
  os << "t=" << t << ", x=(" << x.real() << "," << x.imag() << ")";
  return os.str();
}

std::vector<double> window_times(double sigma, int n) {
  return geometric_times(sigma * 1e-3, 0.99 * sigma, n);
}

struct SupResult {
  double sup = 0.0;
  std::string failure;
};

SupResult sup_abs(const Field2& u, const std::vector<double>& times, const std::vector<cplx>& pts) {
  SupResult r;
  for (double t : times)
    for (cplx x : pts) {
      cplx z;
      try {
        z = u(t, x);
      } catch (const std::exception& e) {
        r.failure = where(t, x) + ": " + e.what();
        r.sup = std::numeric_limits<double>::infinity();
        return r;
      }
      if (!finite(z)) {
        r.failure = where(t, x) + ": non-finite value";
        r.sup = std::numeric_limits<double>::infinity();
        return r;
      }
      r.sup = std::max(r.sup, std::abs(z));
    }
  return r;
}

void classify_trend(AuditReport& rep, const AuditOptions& opt) {
  const std::size_t nr = rep.Q.size();
  bool diverges = !rep.failure.empty();
  for (std::size_t r = 0; r < nr; ++r) {
    const auto& row = rep.Q[r];
    rep.inner.push_back(row.back());
    bool mono = true;
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k] > row[k - 1] * (1.0 + 1e-12) + 1e-300) mono = false;
    rep.sigma_monotone.push_back(mono);
    if (!std::isfinite(row.back())) diverges = true;
    else if (row.front() > 0.0 ? row.back() > 10.0 * row.front() : row.back() > opt.zero_tol)
      diverges = true;
  }
  double est = 0.0;
  for (std::size_t r = nr >= 2 ? nr - 2 : 0; r < nr; ++r) est = std::max(est, rep.inner[r]);
  rep.estimate = est;
  if (diverges) rep.trend = Trend::diverges;
  else if (est <= opt.zero_tol) rep.trend = Trend::tends_to_zero;
  else rep.trend = Trend::tends_to_positive;
}

void side_flags(AuditReport& rep, const Field2& u, const std::vector<cplx>& pts,
                const AuditOptions& opt, const WeightFn& weight) {
  const double hi = 0.99 * opt.sigma_ladder.front();
  const double lo = opt.sigma_ladder.back() * 1e-3;
  const int decades = std::max(2, static_cast<int>(std::round(std::log10(hi / lo))));
  auto ts = geometric_times(lo, hi, decades + 1);
  std::reverse(ts.begin(), ts.end());
  std::vector<double> sups;
  for (double t : ts) {
    const SupResult s = sup_abs(u, {t}, pts);
    if (!s.failure.empty()) {
      rep.sup_tends_to_zero = false;
      rep.decay_exponent = 0.0;
      return;
    }
    sups.push_back(s.sup);
  }
  bool mono = true;
  for (std::size_t k = 1; k < sups.size(); ++k)
    if (sups[k] > sups[k - 1] * (1.0 + 1e-12)) mono = false;
  rep.sup_tends_to_zero =
      mono && (sups.back() <= opt.zero_tol * 1e-3 || sups.back() <= 0.5 * sups.front());
  const std::size_t n = sups.size();
  if (sups[n - 1] == 0.0) {
    rep.decay_exponent = std::numeric_limits<double>::infinity();
  } else {
    rep.decay_exponent = std::log(sups[n - 2] / sups[n - 1]) /
                         std::log(weight(ts[n - 2]) / weight(ts[n - 1]));
  }
}

}  // namespace

SolutionField solution_from_expr(const std::string& name, const Expr& u) {
  if (depends_on(u, Var::u) || depends_on(u, Var::v))
    throw DomainError("a solution expression may use t and x only");
  const Expr ux = diff(u, Var::x);
  const Expr ut = diff(u, Var::t);
  SolutionField s;
  s.name = name;
  s.provenance = "closed-form";
  s.u = [u](double t, cplx x) { return eval(u, t, x, 0.0, 0.0); };
  s.ux = [ux](double t, cplx x) { return eval(ux, t, x, 0.0, 0.0); };
  s.tut = [ut](double t, cplx x) { return t * eval(ut, t, x, 0.0, 0.0); };
  return s;
}

SolutionField solution_from_series(const std::string& name, const DoubleSeries& series) {
  SolutionField s;
  s.name = name;
  s.provenance = "series";
  s.u = [series](double t, cplx x) { return series.eval(t, x); };
  s.ux = [series](double t, cplx x) { return series.eval_dx(t, x); };
  s.tut = [series](double t, cplx x) { return series.eval_tdt(t, x); };
  return s;
}

SolutionField solution_from_function(const std::string& name, Field2 u, double radius) {
  SolutionField s;
  s.name = name;
  s.provenance = "sampled";
  s.u = u;
  s.ux = [u, radius](double t, cplx x) {
    return cauchy_derivative([&](cplx z) { return u(t, z); }, x, radius);
  };
  s.tut = [u](double t, cplx x) {
    const double h = 1e-4 * t;
    return t * (u(t + h, x) - u(t - h, x)) / (2.0 * h);
  };
  return s;
}

SolutionField zero_solution() {
  SolutionField s;
  s.name = "zero";
  s.provenance = "closed-form";
  s.u = [](double, cplx) { return cplx{}; };
  s.ux = s.u;
  s.tut = s.u;
  return s;
}

double pde_residual(const PdeSpec& pde, const SolutionField& u, const Grid& grid) {
  double worst = 0.0;
  for (double t : grid.times)
    for (cplx x : grid.points) {
      const cplx r = u.tut(t, x) - eval(pde.rhs, t, x, u.u(t, x), u.v(t, x, pde.euler_form));
      worst = std::max(worst, std::abs(r));
    }
  return worst;
}

std::vector<double> halving_ladder(double R0, int rungs) {
  std::vector<double> out;
  for (int k = 0; k < rungs; ++k) out.push_back(R0 / std::pow(2.0, k));
  return out;
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::tends_to_zero: return "tends-to-zero";
    case Trend::tends_to_positive: return "tends-to-positive";
    case Trend::diverges: return "diverges";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::uniqueness_applies: return "uniqueness-applies";
    case Verdict::criterion_fails: return "criterion-fails";
    case Verdict::hypotheses_fail: return "hypotheses-fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

AuditReport audit_disc(const SolutionField& u, const AuditOptions& opt, const WeightFn& weight) {
  if (opt.R_ladder.empty() || opt.sigma_ladder.empty()) throw DomainError("empty audit ladder");
  AuditReport rep;
  rep.kind = "disc";
  rep.solution = u.name;
  rep.space_ladder = opt.R_ladder;
  rep.sigma_ladder = opt.sigma_ladder;
  for (double R : opt.R_ladder) {
    const auto pts = disc_points(Disc(R), opt.circles, opt.rays, opt.density);
    std::vector<double> row;
    for (double sigma : opt.sigma_ladder) {
      const SupResult s = sup_abs(u.u, window_times(sigma, opt.times), pts);
      if (!s.failure.empty() && rep.failure.empty()) rep.failure = s.failure;
      row.push_back(s.sup / (R * R));
    }
    rep.Q.push_back(row);
  }
  classify_trend(rep, opt);
  side_flags(rep, u.u, disc_points(Disc(opt.R_ladder.front()), opt.circles, opt.rays, opt.density),
             opt, weight);
  return rep;
}

AuditReport audit_sector(const SolutionField& u, const Sector& sec, const AuditOptions& opt,
                         const WeightFn& weight) {
  if (opt.eta_ladder.empty() || opt.sigma_ladder.empty()) throw DomainError("empty audit ladder");
  AuditReport rep;
  rep.kind = "sector";
  rep.solution = u.name;
  rep.space_ladder = opt.eta_ladder;
  rep.sigma_ladder = opt.sigma_ladder;
  for (double eta : opt.eta_ladder) {
    const auto pts = sector_points(shrunk_sector(sec, eta), opt.radii, opt.angles, opt.density);
    std::vector<double> row;
    for (double sigma : opt.sigma_ladder) {
      const SupResult s = sup_abs(u.u, window_times(sigma, opt.times), pts);
      if (!s.failure.empty() && rep.failure.empty()) rep.failure = s.failure;
      row.push_back(s.sup / (eta * eta));
    }
    rep.Q.push_back(row);
  }
  classify_trend(rep, opt);
  side_flags(rep, u.u, sector_points(sec, opt.radii, opt.angles, opt.density), opt, weight);
  return rep;
}

FieldSpec hadamard_fields(const PdeSpec& pde, const CaseClass& cc, const SolutionField& u0,
                          const SolutionField& u, double a_decay) {
  const Expr Fu = diff(pde.rhs, Var::u);
  const Expr Fv = diff(pde.rhs, Var::v);
  const bool euler = pde.euler_form;

  // Integrals over s in [0, 1] of F_u and F_v along the segment from u0 to u.
  auto integrals = [=](double t, cplx x) {
    const cplx U0 = u0.u(t, x), V0 = u0.v(t, x, euler);
    const cplx w = u.u(t, x) - U0, q = u.v(t, x, euler) - V0;
    const auto& gl = gauss_legendre16();
    cplx iu{}, iv{};
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double s = gl.nodes[k];
      try {
        iu += gl.weights[k] * eval(Fu, t, x, U0 + s * w, V0 + s * q);
        iv += gl.weights[k] * eval(Fv, t, x, U0 + s * w, V0 + s * q);
      } catch (const EvalError& e) {
        std::ostringstream os;
        os << "Hadamard quadrature node s=" << s << " at " << where(t, x) << ": " << e.what();
        throw EvalError(os.str());
      }
    }
    return std::pair<cplx, cplx>{iu, iv};
  };

  FieldSpec f;
  f.case_id = cc.case_id;
  f.p = cc.p;
  f.a_decay = a_decay;
  f.lambda = [cc](double t, cplx x) { return cc.lambda(t, x); };
  f.a = [integrals, cc](double t, cplx x) { return integrals(t, x).first - cc.lambda(t, x); };
  if (cc.case_id >= 2) f.c = [cc](double t, cplx x) { return cc.c(t, x); };
  const int case_id = cc.case_id, p = cc.p;
  f.b = [integrals, cc, case_id, p](double t, cplx x) {
    const cplx btot = integrals(t, x).second;
    if (case_id == 1) return btot;
    cplx xp = 1.0;
    for (int k = 0; k < std::max(p, 1); ++k) xp *= x;
    return btot - xp * cc.c(t, x);
  };
  return f;
}

double hadamard_residual(const FieldSpec& f, const SolutionField& u0, const SolutionField& u,
                         const Grid& grid) {
  double worst = 0.0;
  for (double t : grid.times)
    for (cplx x : grid.points) {
      const cplx w = u.u(t, x) - u0.u(t, x);
      const cplx wx = u.ux(t, x) - u0.ux(t, x);
      const cplx twt = u.tut(t, x) - u0.tut(t, x);
      const cplx r = twt - f.drift(t, x) * wx - (f.lambda_at(t, x) + f.a_at(t, x)) * w;
      worst = std::max(worst, std::abs(r));
    }
  return worst;
}

AuditReport verdict(const PdeSpec& pde, const CaseClass& cc, const SolutionField& u,
                    const SolutionField& u0, const AuditOptions& opt) {
  std::optional<Sector> sec;
  if (cc.case_id == 3) sec = pde.sector.value_or(Sector(0.2, pde.R0));

  AuditReport rep = sec ? audit_sector(u, *sec, opt, pde.weight) : audit_disc(u, opt, pde.weight);
  rep.classification = cc;

  // Standing hypotheses.
  bool ok = true;
  auto note = [&](bool pass, const std::string& text) {
    rep.hypothesis_notes.push_back((pass ? "pass: " : "FAIL: ") + text);
    ok = ok && pass;
  };
  {
    std::ostringstream os;
    os << "Re lambda(0,0) = " << cc.lambda00.real() << " < 0";
    note(cc.flags.re_lambda_negative, os.str());
  }
  note(cc.flags.a2_alpha_bounded, "sup|F(t,x,0,0)| = O(mu(t))");
  note(cc.flags.a2_b_bounded, "|b(t)| = O(mu(t))");
  if (cc.case_id == 2) note(cc.flags.re_c_nonpositive.value_or(false), "Re c(t,x) <= 0 sampled");
  if (cc.case_id == 3) {
    note(std::abs(cc.c00) > cc.tol, "c(0,0) != 0");
    if (cc.flags.rotation_theta) {
      std::ostringstream os;
      os << "rotation x -> exp(i*" << *cc.flags.rotation_theta << ")x normalizes c(0,0) < 0";
      rep.notes.push_back(os.str());
    }
  }
  rep.hypotheses_ok = ok;

  // Direct comparison on a small window near the origin.
  {
    const auto ts = geometric_times(1e-6, 1e-2, 7);
    std::vector<cplx> pts =
        sec ? sector_points(shrunk_sector(*sec, opt.eta_ladder.back()), 4, 9, opt.density)
            : disc_points(Disc(opt.R_ladder.back()), 4, 16, opt.density);
    double d = 0.0;
    bool failed = false;
    for (double t : ts)
      for (cplx x : pts) {
        try {
          const cplx z = u.u(t, x) - u0.u(t, x);
          if (!finite(z)) failed = true;
          else d = std::max(d, std::abs(z));
        } catch (const std::exception&) {
          failed = true;
        }
      }
    if (failed) rep.notes.push_back("comparison grid hit a non-finite value");
    else rep.sup_diff = d;
  }

  if (cc.case_id == 3 && !cc.shape_supported) {
    rep.verdict = Verdict::inconclusive;
    rep.notes.push_back("Case 3 outside Euler form is out of supported shape");
    return rep;
  }
  if (!ok) {
    rep.verdict = Verdict::hypotheses_fail;
    return rep;
  }
  if (rep.trend != Trend::tends_to_zero) {
    rep.verdict = Verdict::criterion_fails;
    return rep;
  }
  if (!rep.sup_diff || *rep.sup_diff > 10.0 * opt.tol) {
    rep.verdict = Verdict::inconclusive;
    rep.notes.push_back("criterion holds but u and u0 differ on the comparison grid");
    return rep;
  }
  rep.verdict = Verdict::uniqueness_applies;
  return rep;
}

}  // namespace sfpde
