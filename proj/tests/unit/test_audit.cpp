#include "sfpde/audit.hpp"
#include "sfpde/json_io.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace sfpde;
using Catch::Approx;

namespace {

SolutionField sol(const std::string& name, const std::string& expr) {
  return solution_from_expr(name, parse(expr));
}

PdeSpec spec(const std::string& rhs, bool euler = false) {
  PdeSpec p = make_pde(rhs, euler);
  p.T0 = 0.5;
  p.R0 = 0.1;
  return p;
}

// Every space sample sits on a circle of radius R (1 - 1/density) at most.
double grid_factor(const AuditOptions& o) { return std::pow(1.0 - 1.0 / o.density, 2); }

}  // namespace

TEST_CASE("disc audit of the quadratic witnesses") {
  const AuditOptions opt;
  const AuditReport q = audit_disc(sol("quarter", "x^2/4"), opt);
  CHECK(std::abs(q.estimate - 0.25) <= 0.005);
  CHECK(q.trend == Trend::tends_to_positive);
  const AuditReport tq = audit_disc(sol("three_quarters", "3*x^2/4"), opt);
  CHECK(std::abs(tq.estimate - 0.75) <= 0.015);
  for (const auto& row : q.Q)
    for (double v : row) CHECK(v >= 0.0);
  CHECK(q.Q.size() == opt.R_ladder.size());
  CHECK(q.Q.front().size() == opt.sigma_ladder.size());
}

TEST_CASE("criterion sensitivity is grid exact for c x^2") {
  const AuditOptions opt;
  for (double c : {0.25, 1.0, 0.75}) {
    const AuditReport r = audit_disc(solution_from_expr("cx2", Expr::constant(c) * parse("x^2")), opt);
    CHECK(r.estimate == Approx(c * grid_factor(opt)).epsilon(1e-14));
  }
}

TEST_CASE("positive homogeneity") {
  const AuditOptions opt;
  const SolutionField u = sol("u", "x^2/4 + t*x + t^2");
  const AuditReport base = audit_disc(u, opt);
  for (double s : {0.5, 2.0, 3.0}) {
    const AuditReport scaled = audit_disc(solution_from_expr("su", Expr::constant(s) * parse("x^2/4 + t*x + t^2")), opt);
    CHECK(scaled.estimate == Approx(s * base.estimate).epsilon(1e-14));
    for (std::size_t r = 0; r < base.Q.size(); ++r)
      for (std::size_t k = 0; k < base.Q[r].size(); ++k)
        CHECK(scaled.Q[r][k] == Approx(s * base.Q[r][k]).epsilon(1e-14));
  }
}

TEST_CASE("zero and divergent candidates") {
  const AuditReport z = audit_disc(zero_solution());
  CHECK(z.estimate == 0.0);
  CHECK(z.trend == Trend::tends_to_zero);
  const AuditReport d = audit_disc(sol("x_over_t", "x/t"));
  CHECK(d.trend == Trend::diverges);
  const AuditReport pole = audit_disc(sol("pole", "x/(t-t)"));
  CHECK(pole.trend == Trend::diverges);
  CHECK_FALSE(pole.failure.empty());
}

TEST_CASE("sector audit") {
  const Sector s(0.2, 0.1);
  const AuditReport z = audit_sector(zero_solution(), s);
  CHECK(z.estimate == 0.0);
  CHECK(z.trend == Trend::tends_to_zero);
  const PdeSpec p = spec("-u + t + v^2");
  const DoubleSeries series = build_solution(p, classify(p), 4, 4);
  const AuditReport u0 = audit_sector(solution_from_series("u0", series), s);
  CHECK(u0.trend == Trend::tends_to_zero);
  for (double v : u0.inner) CHECK(v < 1e-6);
  const AuditReport d = audit_sector(sol("x_over_t", "x/t"), s);
  CHECK(d.trend == Trend::diverges);
}

TEST_CASE("side flags follow the weaker criteria") {
  const AuditReport q = audit_disc(sol("t", "t*x"));
  CHECK(q.sup_tends_to_zero);
  CHECK(q.decay_exponent == Approx(1.0).epsilon(1e-6));
  const AuditReport c = audit_disc(sol("quarter", "x^2/4"));
  CHECK_FALSE(c.sup_tends_to_zero);
}

TEST_CASE("Hadamard fields of the quadratic Case 1 pair") {
  const PdeSpec p = spec("-u + v^2");
  const CaseClass cc = classify(p);
  const SolutionField u0 = zero_solution(), u = sol("quarter", "x^2/4");
  const FieldSpec f = hadamard_fields(p, cc, u0, u);
  testing::Sampler rng(6);
  for (int k = 0; k < 50; ++k) {
    const double t = rng.uniform(1e-4, 0.4);
    const cplx x = rng.in_disc(0.1);
    CHECK(std::abs(f.b_at(t, x) - 0.5 * x) < 1e-15);
    CHECK(std::abs(f.a_at(t, x)) < 1e-15);
    // t w_t - b w_x = -x^2/4 = (lambda + a) w
    const cplx lhs = u.tut(t, x) - f.drift(t, x) * u.ux(t, x);
    CHECK(std::abs(lhs + 0.25 * x * x) < 1e-15);
    CHECK(std::abs((f.lambda_at(t, x) + f.a_at(t, x)) * u.u(t, x) + 0.25 * x * x) < 1e-15);
  }
  const Grid g{geometric_times(1e-3, 0.3, 30), disc_points(Disc(0.1), 4, 16)};
  CHECK(hadamard_residual(f, u0, u, g) < 1e-15);
  const FieldSpec same = hadamard_fields(p, cc, u, u);
  CHECK(hadamard_residual(same, u, u, g) == 0.0);
  CHECK(std::abs(same.a_at(0.1, 0.05)) < 1e-15);
  CHECK(std::abs(same.b_at(0.1, 0.05) - 0.05) < 1e-15);
}

TEST_CASE("Hadamard quadrature reports singular nodes") {
  // F_u contains log(u), which fails wherever w = s (u - u0) vanishes.
  const PdeSpec p = spec("-u + v^2 + u^2*log(u)");
  CaseClass cc;
  cc.case_id = 1;
  const FieldSpec f = hadamard_fields(p, cc, zero_solution(), sol("lin", "x"));
  CHECK_THROWS_AS(f.a_at(0.1, 0.0), EvalError);
  CHECK_NOTHROW(f.a_at(0.1, 0.05));
}

TEST_CASE("position bound along the quadratic Hadamard field") {
  const PdeSpec p = spec("-u + v^2");
  const SolutionField u = sol("quarter", "x^2/4");
  const FieldSpec f = hadamard_fields(p, classify(p), zero_solution(), u);
  const double t0 = 0.1;
  const cplx xi(0.02, 0.01);
  const CharTrace tr = transport(f, trace(f, t0, xi, 1e-6, Disc(0.1)), u.u(t0, xi), u.ux(t0, xi));
  double gam = 0.0;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    gam = std::max(gam, std::abs(f.gamma_at(tr.t[k], tr.x[k])));
    CHECK(std::abs(tr.q[k] - 0.5 * tr.x[k]) < 1e-9);
  }
  const PositionReport r = verify_position(f, tr, 0.0, 0.0, 1.0, PhiWeight(WeightFn::power(1.0)), gam);
  CHECK(r.drift_bound_holds);
  CHECK(r.pass());
}

TEST_CASE("verdicts") {
  const PdeSpec g2 = spec("-u + v^2");
  const CaseClass c2 = classify(g2);
  const AuditReport same = verdict(g2, c2, zero_solution(), zero_solution());
  CHECK(same.verdict == Verdict::uniqueness_applies);
  REQUIRE(same.sup_diff.has_value());
  CHECK(*same.sup_diff == 0.0);
  const AuditReport quarter = verdict(g2, c2, sol("quarter", "x^2/4"), zero_solution());
  CHECK(quarter.verdict == Verdict::criterion_fails);
  CHECK(std::abs(quarter.estimate - 0.25) <= 0.005);
  CHECK(*quarter.sup_diff > 0.0);

  const PdeSpec g1 = spec("u*v");
  const AuditReport fam = verdict(g1, classify(g1), sol("family", "x/(5-log(t))"), zero_solution());
  CHECK(fam.verdict == Verdict::hypotheses_fail);
  CHECK_FALSE(fam.hypotheses_ok);
  CHECK(fam.sup_tends_to_zero);
}

TEST_CASE("verdict soundness against the direct comparison") {
  const PdeSpec g2 = spec("-u + v^2");
  const CaseClass cc = classify(g2);
  // t^2 passes the limsup test but differs from u0 = 0 on the comparison window.
  const AuditReport r = verdict(g2, cc, sol("t2", "t^2"), zero_solution());
  CHECK(r.trend == Trend::tends_to_zero);
  CHECK(*r.sup_diff > 10.0 * AuditOptions{}.tol);
  CHECK(r.verdict != Verdict::uniqueness_applies);
}

TEST_CASE("solution derivative providers agree") {
  const Expr e = parse("exp(t*x) + x^3/(2-t)");
  const SolutionField a = solution_from_expr("a", e);
  const SolutionField b = solution_from_function("b", a.u);
  testing::Sampler rng(12);
  for (int k = 0; k < 50; ++k) {
    const double t = rng.uniform(0.01, 0.5);
    const cplx x = rng.in_disc(0.1);
    CHECK(std::abs(a.ux(t, x) - b.ux(t, x)) <= 1e-6 * (1.0 + std::abs(a.ux(t, x))));
    CHECK(std::abs(a.tut(t, x) - b.tut(t, x)) <= 1e-6 * (1.0 + std::abs(a.tut(t, x))));
    const cplx fd = (a.u(t, x + 1e-6) - a.u(t, x - 1e-6)) / 2e-6;
    CHECK(std::abs(a.ux(t, x) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("audit JSON") {
  const AuditReport r = audit_disc(sol("quarter", "x^2/4"));
  const Json j = Json::parse(audit_to_json(r));
  CHECK(j["schema"] == "audit-v1");
  CHECK(j.contains("Q"));
  CHECK(j.contains("ladders"));
  CHECK(j.contains("flags"));
  CHECK(j.contains("verdict"));
  CHECK(j["Q"].size() == 4);
}
