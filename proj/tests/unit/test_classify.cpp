#include "sfpde/classify.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace sfpde;
using Catch::Approx;

namespace {

PdeSpec spec(const std::string& rhs, bool euler = false) {
  PdeSpec p = make_pde(rhs, euler);
  p.T0 = 0.5;
  p.R0 = 0.1;
  return p;
}

Grid a2_grid(const PdeSpec& p) {
  auto ts = geometric_times(1e-8 * p.T0, p.T0, 33);
  std::reverse(ts.begin(), ts.end());
  return Grid{ts, disc_points(Disc(p.R0), 4, 16)};
}

}  // namespace

TEST_CASE("Case 1: -u + v^2") {
  const CaseClass cc = classify(spec("-u + v^2"));
  CHECK(cc.case_id == 1);
  CHECK(cc.lambda00 == cplx(-1.0));
  CHECK(std::abs(cc.b(0.3)) == 0.0);
  CHECK(cc.flags.re_lambda_negative);
}

TEST_CASE("Case 2: -u - x*v + v^2") {
  const CaseClass cc = classify(spec("-u - x*v + v^2"));
  CHECK(cc.case_id == 2);
  CHECK(cc.p == 0);
  CHECK(cc.lambda00 == cplx(-1.0));
  for (double t : {0.0, 0.1, 0.4})
    for (cplx x : {cplx(0.0), cplx(0.05, 0.02), cplx(-0.09)}) CHECK(std::abs(cc.c(t, x) + 1.0) < 1e-14);
  REQUIRE(cc.flags.re_c_nonpositive.has_value());
  CHECK(*cc.flags.re_c_nonpositive);
}

TEST_CASE("Case 3 in the non-Euler reading is out of supported shape") {
  const CaseClass cc = classify(spec("-u - x^2*v + t*(x*v)^2"));
  CHECK(cc.case_id == 3);
  CHECK(cc.p == 1);
  CHECK(cc.lambda00 == cplx(-1.0));
  CHECK_FALSE(cc.shape_supported);
  CHECK(std::abs(cc.c(0.1, cplx(0.03, 0.01)) + 1.0) < 1e-14);
  CHECK(std::abs(cc.c00 + 1.0) < 1e-14);
}

TEST_CASE("Case 3 in Euler form") {
  const CaseClass cc = classify(spec("-u - x*v + t*v^2", true));
  CHECK(cc.case_id == 3);
  CHECK(cc.p == 1);
  CHECK(cc.shape_supported);
  CHECK(cc.lambda00 == cplx(-1.0));
  CHECK(std::abs(cc.c00 + 1.0) < 1e-14);
  CHECK(cc.flags.c00_negative.value_or(false));
  CHECK(std::abs(cc.c(0.2, cplx(0.02, 0.01)) + 1.0) < 1e-14);
}

TEST_CASE("Euler form with b and a higher power") {
  const CaseClass cc = classify(spec("2*u - x*v + x*t/(1-t)*v", true));
  CHECK(cc.case_id == 3);
  CHECK(cc.p == 1);
  CHECK(std::abs(cc.c(0.25, 0.05) - (-1.0 + 0.25 / 0.75)) < 1e-12);
  CHECK(std::abs(cc.b(0.25)) < 1e-15);
  const CaseClass c2 = classify(spec("-u + (t - x^2)*v", true));
  CHECK(c2.case_id == 3);
  CHECK(c2.p == 2);
  CHECK(std::abs(c2.b(0.3) - 0.3) < 1e-14);
}

TEST_CASE("indeterminate coefficient") {
  CHECK_THROWS_AS(classify(spec("-u + 5e-10*x*v + v^2")), IndeterminateError);
  CHECK(classify(spec("-u + 5e-11*x*v")).case_id == 1);
  CHECK(classify(spec("-u + 5e-9*x*v")).case_id == 2);
}

TEST_CASE("lambda00 equals the symbolic derivative") {
  for (const char* rhs : {"-u + v^2", "(2+3i)*u - x*v", "exp(t)*u*(1+x) + u^2", "-u/(1+t) + t"}) {
    const PdeSpec p = spec(rhs);
    const CaseClass cc = classify(p);
    const cplx direct = eval(diff(p.rhs, Var::u), 0.0, 0.0, 0.0, 0.0);
    CHECK(std::abs(cc.lambda00 - direct) <= 1e-14);
  }
}

TEST_CASE("classification ignores nonlinear remainder terms") {
  testing::Sampler rng(17);
  const char* bases[] = {"-u + v^2", "-u - x*v + v^2", "2*u - x*v + u*v", "-2*u + x*t*v^2"};
  for (const char* base : bases) {
    const CaseClass ref = classify(spec(base));
    for (int k = 0; k < 10; ++k) {
      // u^2 * G for a random polynomial G in t, x, u, v
      std::string g = std::to_string(rng.uniform(-2, 2));
      const char* vars[] = {"t", "x", "u", "v"};
      for (int m = 0; m < 3; ++m)
        g += " + " + std::to_string(rng.uniform(-2, 2)) + "*" + vars[rng.integer(0, 3)] + "^" +
             std::to_string(rng.integer(0, 3));
      const CaseClass cc = classify(spec(std::string(base) + " + u^2*(" + g + ")"));
      CHECK(cc.case_id == ref.case_id);
      CHECK(cc.p == ref.p);
      CHECK(std::abs(cc.lambda00 - ref.lambda00) < 1e-14);
    }
  }
}

TEST_CASE("Case 2 sign condition flag") {
  CHECK_FALSE(classify(spec("-u + x*v")).flags.re_c_nonpositive.value_or(true));
  CHECK(classify(spec("-u - (1+t)*x*v")).flags.re_c_nonpositive.value_or(false));
}

TEST_CASE("A2 ratio reports") {
  {
    const PdeSpec p = spec("-u + v^2");
    const A2Report r = check_A2(p, classify(p), a2_grid(p));
    for (double v : r.alpha_ratio) CHECK(v == 0.0);
    for (double v : r.b_ratio) CHECK(v == 0.0);
    CHECK(r.alpha_bounded);
    CHECK(r.b_bounded);
  }
  {
    const PdeSpec p = spec("-u + t + v^2");
    const A2Report r = check_A2(p, classify(p), a2_grid(p));
    for (double v : r.alpha_ratio) CHECK(v == Approx(1.0).epsilon(1e-14));
    CHECK(r.alpha_bounded);
  }
  {
    const PdeSpec p = spec("-u + log(t)*t*v");
    const A2Report r = check_A2(p, classify(p), a2_grid(p));
    CHECK_FALSE(r.b_bounded);
    CHECK(r.alpha_bounded);
    CHECK(r.b_ratio.back() > r.b_ratio.front());
  }
}

TEST_CASE("rotation normalizes c(0,0)") {
  {
    const PdeSpec p = spec("-u - x*v", true);
    const auto [q, theta] = rotate_x(p, classify(p));
    CHECK(theta == Approx(0.0).margin(1e-15));
    CHECK(std::abs(classify(q).c00 + 1.0) < 1e-14);
  }
  {
    const PdeSpec p = spec("-u + x*v", true);
    const auto [q, theta] = rotate_x(p, classify(p));
    CHECK(theta == Approx(kPi));
    CHECK(std::abs(classify(q).c00 + 1.0) < 1e-12);
  }
  {
    const PdeSpec p = spec("-u + i*x^2*v", true);
    const CaseClass cc = classify(p);
    REQUIRE(cc.p == 2);
    const auto [q, theta] = rotate_x(p, cc);
    CHECK(theta == Approx(kPi / 4));
    CHECK(std::abs(classify(q).c00 + 1.0) < 1e-12);
    REQUIRE(cc.flags.rotation_theta.has_value());
    CHECK(*cc.flags.rotation_theta == Approx(kPi / 4));
  }
  const PdeSpec bad = spec("-u + v^2");
  CHECK_THROWS(rotate_x(bad, classify(bad)));
}

TEST_CASE("rotation preserves the equation under substitution") {
  testing::Sampler rng(2);
  for (const char* rhs : {"2*u + x*v + x*t/(1-t)*v", "-u + i*x^2*v + t*v^2", "-u - x*v + t*v^2"}) {
    const PdeSpec p = spec(rhs, true);
    const auto [q, theta] = rotate_x(p, classify(p));
    for (int k = 0; k < 20; ++k) {
      const double t = rng.uniform(0.01, 0.4);
      const cplx x = rng.in_disc(0.1), u = rng.complex_box(0.1), v = rng.complex_box(0.1);
      const cplx orig = eval(p.rhs, t, x, u, v);
      const cplx rot = eval(q.rhs, t, std::exp(cplx(0, -theta)) * x, u, v);
      CHECK(std::abs(orig - rot) < 1e-12);
    }
  }
}
