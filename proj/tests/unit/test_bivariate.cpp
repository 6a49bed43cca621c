#include "sfpde/bivariate.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace sfpde;

namespace {

BiSeries sample(int dt, int dx, testing::Sampler& rng, cplx c00) {
  BiSeries s(dt, dx);
  for (int i = 0; i <= dt; ++i)
    for (int j = 0; j <= dx; ++j) s.at(i, j) = rng.complex_box(1.0);
  s.at(0, 0) = c00;
  return s;
}

bool close(const BiSeries& a, const BiSeries& b, double tol) {
  for (int i = 0; i <= a.deg_t(); ++i)
    for (int j = 0; j <= a.deg_x(); ++j)
      if (std::abs(a.at(i, j) - b.at(i, j)) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("product matches polynomial multiplication") {
  const BiSeries t = BiSeries::t_monomial(3, 3);
  const BiSeries x = BiSeries::x_monomial(3, 3);
  const BiSeries one = BiSeries::constant(3, 3, 1.0);
  const BiSeries p = (one + t) * (one + x);
  CHECK(p.at(0, 0) == cplx(1));
  CHECK(p.at(1, 1) == cplx(1));
  CHECK(p.at(2, 0) == cplx(0));
  CHECK((t * t * t * t).at(3, 0) == cplx(0));
}

TEST_CASE("reciprocal, exp and log identities") {
  testing::Sampler rng(4);
  for (int k = 0; k < 10; ++k) {
    const BiSeries a = sample(4, 5, rng, {1.5, 0.3});
    CHECK(close(a * a.reciprocal(), BiSeries::constant(4, 5, 1.0), 1e-12));
    CHECK(close(a.log().exp(), a, 1e-12));
    CHECK(close(a.pow(3), a * a * a, 1e-12));
    CHECK(close((a / a), BiSeries::constant(4, 5, 1.0), 1e-12));
  }
  CHECK_THROWS_AS(BiSeries(2, 2).reciprocal(), SeriesError);
  CHECK_THROWS_AS(BiSeries(2, 2).log(), SeriesError);
}

TEST_CASE("derivative operators") {
  BiSeries s(2, 3);
  s.at(1, 2) = 2.0;  // 2 t x^2
  CHECK(s.dx().at(1, 1) == cplx(4.0));
  CHECK(s.euler_dx().at(1, 2) == cplx(4.0));
  CHECK(s.euler_dt().at(1, 2) == cplx(2.0));
  CHECK(s.eval(0.5, 2.0) == cplx(4.0));
}

TEST_CASE("expression composition is exact for polynomials") {
  const int d = 5;
  BiSeries U(d, d);
  U.at(1, 0) = 0.5;
  U.at(1, 2) = -1.0;
  U.at(2, 1) = 0.25;
  const BiSeries T = BiSeries::t_monomial(d, d);
  const BiSeries X = BiSeries::x_monomial(d, d);
  const Expr e = parse("-u + t + v^2 + x*u*v - 2*u^2");
  const BiSeries r = eval_series(e, T, X, U, U.dx());
  // Coefficients of total degree <= d are unaffected by truncation here.
  const double tt = 1e-3;
  const cplx xx(2e-3, 1e-3);
  const cplx uu = U.eval(tt, xx);
  const cplx vv = U.dx().eval(tt, xx);
  CHECK(std::abs(r.eval(tt, xx) - eval(e, tt, xx, uu, vv)) < 1e-15);
}
