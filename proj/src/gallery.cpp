#include "sfpde/gallery.hpp"

#include "sfpde/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sfpde {

namespace {

using V = Verdict;

std::vector<ExampleCase> build_catalogue() {
  std::vector<ExampleCase> g;
  auto add = [&](ExampleCase e) { g.push_back(std::move(e)); };
  const Sector s(0.2, 0.1);

  {
    ExampleCase e;
    e.id = "G1";
    e.description = "t u_t = u u_x (k = 1): family (x + alpha)/(c - log t), alpha = 0, c = 5";
    e.rhs = "u*v";
    e.solutions = {{"zero", "0", V::hypotheses_fail},
                   {"family", "x/(5-log(t))", V::hypotheses_fail}};
    e.base = BaseKind::series;
    e.expected_case = 1;
    e.expected_lambda00 = 0.0;
    e.expect_hypotheses_ok = false;
    add(e);
  }
  {
    ExampleCase e;
    e.id = "G2";
    e.description = "t u_t = -u + (u_x)^2: solutions 0 and x^2/4";
    e.rhs = "-u + v^2";
    e.solutions = {{"zero", "0", V::uniqueness_applies}, {"quarter", "x^2/4", V::criterion_fails}};
    e.expected_case = 1;
    e.expected_lambda00 = -1.0;
    add(e);
  }
  {
    ExampleCase e;
    e.id = "G3";
    e.description = "t u_t = -2u + x t (u_x)^2: solution x/t";
    e.rhs = "-2*u + x*t*v^2";
    e.solutions = {{"x_over_t", "x/t", V::criterion_fails}};
    e.expected_case = 1;
    e.expected_lambda00 = -2.0;
    add(e);
  }
  {
    ExampleCase e;
    e.id = "G4";
    e.description = "t u_t = 2u - x u_x + u u_x: solutions 0, t^2, x t/(c - t), c = 5";
    e.rhs = "2*u - x*v + u*v";
    e.solutions = {{"zero", "0", V::hypotheses_fail},
                   {"t_squared", "t^2", V::hypotheses_fail},
                   {"family", "x*t/(5-t)", V::hypotheses_fail}};
    e.base = BaseKind::zero;
    e.expected_case = 2;
    e.expected_lambda00 = 2.0;
    e.expected_c00 = -1.0;
    e.expect_hypotheses_ok = false;
    add(e);
  }
  {
    ExampleCase e;
    e.id = "G5";
    e.description = "t u_t = -x u_x + u^2 + (u_x)^2: family 1/(c - log t), c = 5";
    e.rhs = "-x*v + u^2 + v^2";
    e.solutions = {{"family", "1/(5-log(t))", V::hypotheses_fail}};
    e.expected_case = 2;
    e.expected_lambda00 = 0.0;
    e.expected_c00 = -1.0;
    e.expect_hypotheses_ok = false;
    add(e);
  }
  {
    ExampleCase e;
    e.id = "G6";
    e.description = "t u_t = -u - x u_x + (u_x)^2: solutions 0 and 3x^2/4";
    e.rhs = "-u - x*v + v^2";
    e.solutions = {{"zero", "0", V::uniqueness_applies},
                   {"three_quarters", "3*x^2/4", V::criterion_fails}};
    e.expected_case = 2;
    e.expected_lambda00 = -1.0;
    e.expected_c00 = -1.0;
    add(e);
  }
  {
    ExampleCase e;
    e.id = "G7";
    e.description = "t u_t = -2u - x u_x + 2 x t (u_x)^2: solution x/t";
    e.rhs = "-2*u - x*v + 2*x*t*v^2";
    e.solutions = {{"x_over_t", "x/t", V::criterion_fails}};
    e.expected_case = 2;
    e.expected_lambda00 = -2.0;
    e.expected_c00 = -1.0;
    add(e);
  }
  {
    ExampleCase e;
    e.id = "G8";
    e.description =
        "t u_t = 2u - x^2 u_x + x^2 t/(1-t) u_x: solutions 0, t^2, c t exp(-1/x)/(1-t), c = 5";
    e.rhs = "2*u - x*v + x*t/(1-t)*v";
    e.euler_form = true;
    e.sector = s;
    e.solutions = {{"zero", "0", V::hypotheses_fail},
                   {"t_squared", "t^2", V::hypotheses_fail},
                   {"family", "5*t*exp(-1/x)/(1-t)", V::hypotheses_fail}};
    e.base = BaseKind::zero;
    e.expected_case = 3;
    e.expected_p = 1;
    e.expected_lambda00 = 2.0;
    e.expected_c00 = -1.0;
    e.expect_hypotheses_ok = false;
    add(e);
  }
  {
    ExampleCase e;
    e.id = "G9";
    e.description = "t u_t = -x^2 u_x + u^2 + (x u_x)^2: family 1/(c - log t), c = 5";
    e.rhs = "-x*v + u^2 + v^2";
    e.euler_form = true;
    e.sector = s;
    e.solutions = {{"family", "1/(5-log(t))", V::hypotheses_fail}};
    e.base = BaseKind::zero;
    e.expected_case = 3;
    e.expected_p = 1;
    e.expected_lambda00 = 0.0;
    e.expected_c00 = -1.0;
    e.expect_hypotheses_ok = false;
    add(e);
  }
  {
    ExampleCase e;
    e.id = "G10";
    e.description = "t u_t = -u - x^2 u_x + t (x u_x)^2: solutions 0 and x/t";
    e.rhs = "-u - x*v + t*v^2";
    e.euler_form = true;
    e.sector = s;
    e.solutions = {{"zero", "0", V::uniqueness_applies}, {"x_over_t", "x/t", V::criterion_fails}};
    e.base = BaseKind::zero;
    e.expected_case = 3;
    e.expected_p = 1;
    e.expected_lambda00 = -1.0;
    e.expected_c00 = -1.0;
    add(e);
  }
  {
    ExampleCase e;
    e.id = "G11";
    e.description = "t u_t = -u + t + (u_x)^2: solution t/2 (synthetic series witness)";
    e.synthetic = true;
    e.rhs = "-u + t + v^2";
    e.solutions = {{"half_t", "t/2", V::uniqueness_applies}};
    e.expected_case = 1;
    e.expected_lambda00 = -1.0;
    add(e);
  }
  return g;
}

GalleryCheck check(std::string name, bool pass, double value, std::string detail = {}) {
  return GalleryCheck{std::move(name), pass, value, std::move(detail)};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

PdeSpec ExampleCase::pde() const {
  PdeSpec p;
  p.rhs = parse(rhs);
  p.euler_form = euler_form;
  p.weight = WeightFn::power(1.0);
  p.T0 = 0.5;
  p.R0 = 0.1;
  p.rho0 = 1.0;
  p.sector = sector;
  return p;
}

Grid ExampleCase::test_grid() const {
  Grid g;
  g.times = geometric_times(1e-3, 0.3, 30);
  if (sector) g.points = sector_points(*sector, 8, 8);
  else g.points = disc_points(Disc(0.1), 4, 16);
  return g;
}

const std::vector<ExampleCase>& gallery_list() {
  static const std::vector<ExampleCase> catalogue = build_catalogue();
  return catalogue;
}

const ExampleCase& gallery_get(const std::string& id) {
  for (const auto& e : gallery_list())
    if (e.id == id) return e;
  throw std::out_of_range("unknown gallery id '" + id + "'");
}

SolutionField gallery_base(const ExampleCase& ex) {
  if (ex.base == BaseKind::zero) {
    SolutionField z = zero_solution();
    z.name = "u0";
    return z;
  }
  const PdeSpec pde = ex.pde();
  const CaseClass cc = classify(pde);
  return solution_from_series("u0", build_solution(pde, cc, 6, 6));
}

std::vector<SolutionField> gallery_solutions(const ExampleCase& ex) {
  std::vector<SolutionField> out;
  for (const auto& s : ex.solutions) out.push_back(solution_from_expr(s.name, parse(s.expr)));
  return out;
}

bool GalleryReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const GalleryCheck& c) { return c.pass; });
}

GalleryReport gallery_run(const std::string& id, const GalleryRunOptions& opt) {
  const ExampleCase& ex = gallery_get(id);
  GalleryReport rep;
  rep.id = id;
  const PdeSpec pde = ex.pde();
  const Grid grid = ex.test_grid();
  const auto sols = gallery_solutions(ex);

  std::optional<CaseClass> cc;
  try {
    cc = classify(pde);
  } catch (const std::exception& e) {
    rep.checks.push_back(check("classification", false, 0.0, e.what()));
    return rep;
  }

  if (opt.classification) {
    bool ok = cc->case_id == ex.expected_case && std::abs(cc->lambda00 - ex.expected_lambda00) < 1e-12;
    if (ex.expected_case == 3) ok = ok && cc->p == ex.expected_p;
    if (ex.expected_c00) ok = ok && std::abs(cc->c00 - *ex.expected_c00) < 1e-12;
    std::ostringstream os;
    os << "case " << cc->case_id << ", p=" << cc->p << ", lambda00=" << fmt(cc->lambda00.real());
    if (cc->case_id >= 2) os << ", c00=" << fmt(cc->c00.real());
    rep.checks.push_back(check("classification", ok, cc->case_id, os.str()));
  }

  if (opt.residuals) {
    for (const auto& s : sols) {
      double r;
      try {
        r = pde_residual(pde, s, grid);
      } catch (const std::exception& e) {
        rep.checks.push_back(check("residual:" + s.name, false, 0.0, e.what()));
        continue;
      }
      rep.checks.push_back(check("residual:" + s.name, r < 1e-8, r));
    }
    if (ex.solutions.size() >= 2) {
      double dmin = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < sols.size(); ++i)
        for (std::size_t j = i + 1; j < sols.size(); ++j) {
          double d = 0.0;
          for (double t : grid.times)
            for (cplx x : grid.points) d = std::max(d, std::abs(sols[i].u(t, x) - sols[j].u(t, x)));
          dmin = std::min(dmin, d);
        }
      // Far above round-off but small enough for flat exp(-1/x) families.
      rep.checks.push_back(check("solutions-distinct", dmin > 1e-6, dmin));
    }
  }

  SolutionField base;
  try {
    base = gallery_base(ex);
  } catch (const std::exception& e) {
    rep.checks.push_back(check("base-solution", false, 0.0, e.what()));
    return rep;
  }
  if (opt.residuals) {
    const double r = pde_residual(pde, base, grid);
    rep.checks.push_back(check("residual:u0", r < 1e-8, r, base.provenance));
  }

  if (opt.audits) {
    for (std::size_t k = 0; k < sols.size(); ++k) {
      AuditReport a = verdict(pde, *cc, sols[k], base);
      const bool ok = a.verdict == ex.solutions[k].expected;
      std::ostringstream os;
      os << to_string(a.verdict) << " (" << to_string(a.trend) << ", estimate " << fmt(a.estimate) << ")";
      rep.checks.push_back(check("verdict:" + sols[k].name, ok, a.estimate, os.str()));
      rep.audits.push_back(std::move(a));
    }
  }

  if (opt.hadamard) {
    std::vector<SolutionField> all{base};
    all.insert(all.end(), sols.begin(), sols.end());
    double worst = 0.0;
    std::string detail;
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = 0; j < all.size(); ++j) {
        if (i == j) continue;
        try {
          const FieldSpec f = hadamard_fields(pde, *cc, all[i], all[j]);
          worst = std::max(worst, hadamard_residual(f, all[i], all[j], grid));
        } catch (const std::exception& e) {
          detail = e.what();
          worst = std::numeric_limits<double>::infinity();
        }
      }
    rep.checks.push_back(check("hadamard-identity", worst < 1e-7, worst, detail));
  }

  if (opt.characteristics && cc->flags.re_lambda_negative) {
    // Transport w = u - u0 along one characteristic and compare with w itself.
    const double t0 = 0.1, t_min = 1e-6;
    for (const auto& s : sols) {
      const FieldSpec f = hadamard_fields(pde, *cc, base, s);
      const cplx xi = ex.sector ? cplx(0.02, 0.0) : cplx(0.02, 0.01);
      const Domain dom = ex.sector ? Domain(*ex.sector) : Domain(Disc(0.1));
      const cplx w0 = s.u(t0, xi) - base.u(t0, xi);
      const cplx q0 = s.v(t0, xi, pde.euler_form) - base.v(t0, xi, pde.euler_form);
      if (std::abs(w0) < 1e-14) continue;
      try {
        const CharTrace tr = transport(f, trace(f, t0, xi, t_min, dom), w0, q0);
        double gam = 0.0, mismatch = 0.0;
        for (std::size_t k = 0; k < tr.t.size(); ++k) {
          gam = std::max(gam, std::abs(f.gamma_at(tr.t[k], tr.x[k])));
          const cplx w = s.u(tr.t[k], tr.x[k]) - base.u(tr.t[k], tr.x[k]);
          mismatch = std::max(mismatch, std::abs(tr.w[k] - w) / std::max(1.0, std::abs(w)));
        }
        const DecayReport d = verify_decay(tr, 0.4, gam, 100);
        rep.checks.push_back(check("transport:" + s.name, mismatch < 1e-6, mismatch,
                                   to_string(tr.status)));
        rep.checks.push_back(check("decay:" + s.name, d.pass(), static_cast<double>(d.violations.size())));
        if (cc->case_id == 3) {
          const PhiReport ph = phi_factor(f, tr);
          rep.checks.push_back(check("phi-factor:" + s.name, ph.pass(), ph.observed_delta));
          const ReconstructReport rr = sector_reconstruct(f, tr, cc->p);
          rep.checks.push_back(check("reconstruct:" + s.name, rr.max_rel_dev < 1e-5, rr.max_rel_dev));
        }
      } catch (const std::exception& e) {
        rep.checks.push_back(check("transport:" + s.name, false, 0.0, e.what()));
      }
    }
  }
  return rep;
}

std::string gallery_catalogue_json() {
  Json arr = Json::array();
  for (const auto& e : gallery_list()) {
    Json j;
    j["id"] = e.id;
    j["description"] = e.description;
    j["synthetic"] = e.synthetic;
    j["rhs"] = e.rhs;
    j["euler_form"] = e.euler_form;
    if (e.sector) j["sector"] = {{"theta", e.sector->theta}, {"R", e.sector->R}};
    Json sols = Json::array();
    for (const auto& s : e.solutions)
      sols.push_back({{"name", s.name}, {"expr", s.expr}, {"expected_verdict", to_string(s.expected)}});
    j["solutions"] = sols;
    j["base_solution"] = e.base == BaseKind::series ? "series" : "zero";
    Json exp;
    exp["case"] = e.expected_case;
    if (e.expected_case == 3) exp["p"] = e.expected_p;
    exp["lambda00"] = to_json(e.expected_lambda00);
    if (e.expected_c00) exp["c00"] = to_json(*e.expected_c00);
    exp["hypotheses_ok"] = e.expect_hypotheses_ok;
    j["expected"] = exp;
    arr.push_back(j);
  }
  Json root;
  root["schema"] = "gallery-v1";
  root["entries"] = arr;
  return dump(root);
}

std::string gallery_report_json(const std::vector<GalleryReport>& reports) {
  Json arr = Json::array();
  int passed = 0;
  for (const auto& r : reports) {
    Json j;
    j["id"] = r.id;
    j["pass"] = r.pass();
    Json checks = Json::array();
    for (const auto& c : r.checks)
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", json_number(c.value)},
                        {"detail", c.detail}});
    j["checks"] = checks;
    Json audits = Json::array();
    for (const auto& a : r.audits) audits.push_back(to_json(a));
    j["audits"] = audits;
    arr.push_back(j);
    passed += r.pass() ? 1 : 0;
  }
  Json root;
  root["schema"] = "gallery-run-v1";
  root["passed"] = passed;
  root["total"] = static_cast<int>(reports.size());
  root["reports"] = arr;
  return dump(root);
}

std::string gallery_report_table(const std::vector<GalleryReport>& reports) {
  std::ostringstream os;
  int passed = 0;
  for (const auto& r : reports) {
    os << r.id << "  " << (r.pass() ? "PASS" : "FAIL") << "\n";
    for (const auto& c : r.checks) {
      os << "    " << (c.pass ? "ok  " : "FAIL") << "  " << c.name << "  " << fmt(c.value);
      if (!c.detail.empty()) os << "  " << c.detail;
      os << "\n";
    }
    passed += r.pass() ? 1 : 0;
  }
  os << passed << "/" << reports.size() << " pass\n";
  return os.str();
}

}  // namespace sfpde
