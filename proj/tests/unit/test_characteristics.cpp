#include "sfpde/characteristics.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace sfpde;
using Catch::Approx;

namespace {

Field2 constant(cplx c) {
  return [c](double, cplx) { return c; };
}

FieldSpec case3_pure_c() {
  FieldSpec f;
  f.case_id = 3;
  f.p = 1;
  f.c = constant(-1.0);
  return f;
}

cplx pure_c_exact(cplx xi, double t0, double t) { return xi / (1.0 + xi * std::log(t0 / t)); }

}  // namespace

TEST_CASE("zero drift leaves x fixed") {
  const FieldSpec f;
  const cplx xi(0.02, 0.01);
  const CharTrace tr = trace(f, 0.1, xi, 1e-8, Disc(0.1));
  CHECK(tr.status == TraceStatus::reached_tmin);
  CHECK(tr.t.back() == Approx(1e-8).epsilon(1e-12));
  for (cplx x : tr.x) CHECK(x == xi);
  for (std::size_t k = 1; k < tr.t.size(); ++k) CHECK(tr.t[k] < tr.t[k - 1]);
}

TEST_CASE("Case 3 pure-c drift matches the separable closed form") {
  const FieldSpec f = case3_pure_c();
  const double t0 = 0.1;
  const CharTrace tr = trace(f, t0, 0.1, 1e-6, Sector(0.2, 0.2));
  REQUIRE(tr.status == TraceStatus::reached_tmin);
  for (std::size_t k = 0; k < tr.t.size(); ++k)
    CHECK(testing::rel_err(tr.x[k], pure_c_exact(0.1, t0, tr.t[k])) < 1e-8);
  const CharTrace one = trace(f, t0, 0.1, t0 / std::exp(1.0), Sector(0.2, 0.2));
  CHECK(std::abs(one.x.back() - 0.1 / 1.1) < 1e-10);
  for (cplx x : tr.x) CHECK(std::abs(x) > 0.0);
}

TEST_CASE("b = x/2 pushes the characteristic out of D_1") {
  FieldSpec f;
  f.b = [](double, cplx x) { return 0.5 * x; };
  const double t0 = 0.1;
  const cplx xi(0.3, 0.0);
  const CharTrace tr = trace(f, t0, xi, 1e-8, Disc(1.0));
  // t x' = -x/2 gives x = xi (t0/t)^(1/2), which reaches |x| = 1 at t = t0 |xi|^2.
  for (std::size_t k = 0; k < tr.t.size(); ++k)
    CHECK(testing::rel_err(tr.x[k], xi * std::sqrt(t0 / tr.t[k])) < 1e-8);
  REQUIRE(tr.status == TraceStatus::exited_domain);
  REQUIRE(tr.exit_t.has_value());
  CHECK(*tr.exit_t == Approx(t0 * 0.09).epsilon(1e-8));
  CHECK(std::abs(*tr.exit_x) == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("transport closed forms") {
  FieldSpec f;
  f.lambda = constant(-1.0);
  f.ell = constant(0.0);
  f.gamma = constant(0.0);
  const double t0 = 0.1;
  const CharTrace base = trace(f, t0, 0.01, 1e-4, Disc(0.1));
  const CharTrace tr = transport(f, base, 1.0, 0.5);
  REQUIRE(tr.transported());
  const CharTrace half = transport(f, trace(f, t0, 0.01, t0 / 2, Disc(0.1)), 1.0, 0.0);
  CHECK(std::abs(half.w.back() - 2.0) < 1e-9);
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    CHECK(testing::rel_err(tr.w[k], t0 / tr.t[k]) < 1e-8);
    CHECK(testing::rel_err(tr.q[k], 0.5 * t0 / tr.t[k]) < 1e-8);
  }
  const CharTrace zero = transport(f, base, 0.0, 1.0);
  for (std::size_t k = 0; k < zero.t.size(); ++k) {
    CHECK(zero.w[k] == cplx(0.0));
    CHECK(testing::rel_err(zero.q[k], t0 / zero.t[k]) < 1e-8);
  }
}

TEST_CASE("decay verification") {
  FieldSpec f;
  f.lambda = constant(-1.0);
  f.ell = constant(0.0);
  f.gamma = constant(0.0);
  const CharTrace tr = transport(f, trace(f, 0.1, 0.01, 1e-6, Disc(0.1)), 1.0, 1.0);
  const DecayReport ok = verify_decay(tr, 0.4);
  CHECK(ok.pass());
  CHECK(ok.pairs_checked > 100);
  double sup = 0.0;
  for (cplx w : tr.w) sup = std::max(sup, std::abs(w));
  CHECK(ok.step5_bound == Approx(std::pow(1e-6 / 0.1, 0.4) * sup));

  const CharTrace z = transport(f, trace(f, 0.1, 0.01, 1e-6, Disc(0.1)), 0.0, 0.0);
  const DecayReport zr = verify_decay(z, 0.4);
  CHECK(zr.pass());
  CHECK(zr.step5_bound == 0.0);

  FieldSpec g = f;
  g.lambda = constant(1.0);
  const CharTrace bad = transport(g, trace(g, 0.1, 0.01, 1e-6, Disc(0.1)), 1.0, 0.0);
  const DecayReport br = verify_decay(bad, 0.4);
  CHECK_FALSE(br.pass());
  CHECK_FALSE(br.violations.empty());
  CHECK(br.violations.front().w_fails);
  CHECK(br.violations.front().t1 < br.violations.front().tau);

  const DecayReport strided = verify_decay(tr, 0.4, 0.0, 100);
  CHECK(strided.pairs_checked == 100);
}

TEST_CASE("position bound") {
  const FieldSpec f;
  const CharTrace tr = transport(f, trace(f, 0.1, 0.02, 1e-6, Disc(0.1)), 1.0, 0.0);
  const PositionReport r = verify_position(f, tr, 0.0, 0.0, 0.0, PhiWeight(WeightFn::power(1.0)), 0.0);
  CHECK(r.pass());
  CHECK(r.drift_bound_holds);
  CHECK(r.helper1_max <= 1.0 / f.a_decay);
  CHECK(r.helper2_max <= 1.0 / (f.a_decay * f.a_decay));
  // The helper integral has the closed form (1 - (t1/t0)^a)/a.
  const double a = 0.5, ratio = 0.25;
  const double q = integrate([&](double s) { return std::pow(ratio, a) * std::exp(a * s); }, 0.0,
                             std::log(1.0 / ratio));
  CHECK(q == Approx((1.0 - std::pow(ratio, a)) / a).epsilon(1e-12));
  CHECK(q == Approx(1.0).epsilon(1e-12));
  CHECK(q <= 1.0 / a);
}

TEST_CASE("escape check") {
  const PhiWeight phi(WeightFn::power(1.0));
  std::vector<cplx> ring;
  for (int k = 0; k < 32; ++k) ring.push_back(std::polar(0.4, 2.0 * kPi * k / 32));
  {
    const EscapeReport r = escape_check(FieldSpec{}, Disc(1.0), ring, 0.1, 1e-6, EscapeBudget{}, phi);
    CHECK(r.budget_holds());
    CHECK(r.all_confined);
    CHECK(r.pass());
  }
  {
    FieldSpec f;
    f.b = [](double, cplx x) { return 0.01 * x; };
    f.a_decay = 0.4;
    const EscapeReport r = escape_check(f, Disc(1.0), ring, 0.1, 1e-6, EscapeBudget{}, phi);
    CHECK(r.budget_holds());
    CHECK(r.L == Approx(0.01).epsilon(1e-8));
    CHECK(r.all_confined);
    for (double t : r.final_t) CHECK(t == Approx(1e-6).epsilon(1e-10));
  }
  {
    FieldSpec f;
    f.b = [](double, cplx x) { return x; };
    f.a_decay = 0.4;
    const EscapeReport r = escape_check(f, Disc(1.0), ring, 0.1, 1e-6, EscapeBudget{}, phi);
    CHECK_FALSE(r.rate_budget);
    CHECK_FALSE(r.all_confined);
    CHECK(r.pass());  // the budget is violated, so escape is allowed
  }
}

TEST_CASE("phi factor") {
  const double t0 = 0.1;
  {
    const FieldSpec f = case3_pure_c();
    const PhiReport r = phi_factor(f, trace(f, t0, 0.05, 1e-6, Sector(0.2, 0.2)));
    for (cplx p : r.phi) CHECK(std::abs(p - 1.0) < 1e-15);
    CHECK(r.theta_phi == 0.0);
    CHECK(r.pass());
  }
  {
    const double tmin = 1e-6, beta = 0.3 / std::log(t0 / tmin);
    FieldSpec f;
    f.case_id = 3;
    f.p = 1;
    f.b = constant(beta);
    const PhiReport r = phi_factor(f, trace(f, t0, 0.05, tmin, Sector(0.2, 0.2)));
    CHECK(r.applicable);
    CHECK(r.pass());
    CHECK(std::abs(r.phi.back()) == Approx(std::exp(-0.3)).epsilon(1e-10));
    CHECK(r.observed_delta == Approx(0.3).epsilon(1e-10));
    for (cplx p : r.phi) {
      CHECK(std::abs(p) >= 0.74);
      CHECK(std::abs(p) <= 1.35);
    }
  }
  {
    const double tmin = t0 / std::exp(1.0);
    FieldSpec f;
    f.case_id = 3;
    f.p = 1;
    f.b = constant(cplx(0.0, 0.2));
    const PhiReport r = phi_factor(f, trace(f, t0, 0.05, tmin, Sector(0.5, 0.2)));
    CHECK(r.theta_phi == Approx(0.2).epsilon(1e-10));
    CHECK(std::arg(r.phi.back()) == Approx(-0.2).epsilon(1e-10));
    CHECK(r.delta == Approx(0.2).epsilon(1e-10));
    CHECK(r.theta_phi <= std::asin(0.4));
    CHECK(r.pass());
  }
}

TEST_CASE("sector reconstruction") {
  const double t0 = 0.1;
  const FieldSpec f = case3_pure_c();
  const CharTrace tr = trace(f, t0, 0.1, 1e-6, Sector(0.2, 0.2));
  const ReconstructReport r = sector_reconstruct(f, tr, 1);
  CHECK(r.max_rel_dev < 1e-6);
  for (std::size_t k = 0; k < tr.t.size(); ++k)
    CHECK(testing::rel_err(r.reconstructed[k], pure_c_exact(0.1, t0, tr.t[k])) < 1e-6);
  CHECK(r.envelope_applicable);
  CHECK(r.lower_ok);
  CHECK(r.upper_ok);
  CHECK(r.arg_ok);
  for (cplx x : tr.x) CHECK(x.imag() == 0.0);

  const CharTrace one = trace(f, t0, 0.1, t0 / std::exp(1.0), Sector(0.2, 0.2));
  const ReconstructReport e = sector_reconstruct(f, one, 1, 1.0);
  CHECK(e.C0 == 1.0);
  CHECK(e.lower_ok);
  CHECK(0.05 / (1.0 + 0.1 * 2.0) == Approx(0.041666666666666664));
  CHECK(std::abs(one.x.back()) >= 0.05 / 1.2);

  FieldSpec g;
  g.case_id = 3;
  g.p = 2;
  g.b = [](double t, cplx x) { return 0.05 * t + 0.1 * x; };
  g.c = [](double t, cplx x) { return -1.0 + 0.2 * t + 0.3 * x; };
  const CharTrace tg = trace(g, t0, std::polar(0.08, 0.05), 1e-6, Sector(0.3, 0.2));
  REQUIRE(tg.status == TraceStatus::reached_tmin);
  CHECK(sector_reconstruct(g, tg, 2).max_rel_dev < 1e-5);
}

TEST_CASE("Nagumo estimate") {
  const Sector s(0.2, 1.0);
  const NagumoReport lin = nagumo_check([](cplx x) { return x; }, s);
  CHECK(lin.pointwise_ok);
  CHECK(lin.points_checked > 0);
  CHECK(lin.sup_f <= 1.0 + 1e-12);
  CHECK(0.5 <= 1.0 / sector_distance(s, 0.5));
  const NagumoReport cst = nagumo_check([](cplx) { return cplx(2.0); }, s);
  CHECK(cst.pointwise_ok);
  CHECK(cst.worst_ratio < 1e-6);
  const NagumoReport sq = nagumo_power_scaling(2, s, {1.0, 0.5, 0.25, 0.125, 0.0625});
  CHECK(sq.scaling_ok);
  for (std::size_t k = 1; k < sq.scaled_sup.size(); ++k) CHECK(sq.scaled_sup[k] < sq.scaled_sup[k - 1]);
}

TEST_CASE("trace CSV") {
  FieldSpec f;
  f.lambda = constant(-1.0);
  const CharTrace tr = trace(f, 0.1, 0.02, 1e-3, Disc(0.1));
  const std::string raw = trace_csv(tr);
  CHECK(raw.rfind("t,re_x,im_x,re_w,im_w,re_q,im_q\n", 0) == 0);
  CHECK(raw.find("nan") != std::string::npos);
  const std::string full = trace_csv(transport(f, tr, 1.0, 0.0));
  CHECK(full.find("nan") == std::string::npos);
  CHECK(static_cast<std::size_t>(std::count(full.begin(), full.end(), '\n')) == tr.t.size() + 1);
}
