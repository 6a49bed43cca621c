#include "sfpde/core.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace sfpde {

namespace {

void require_time(const WeightFn& w, double t) {
  if (!(t > 0.0) || t > w.T0()) {
    std::ostringstream os;
    os << "time " << t << " outside (0, " << w.T0() << "]";
    throw DomainError(os.str());
  }
}

}  // namespace

WeightFn WeightFn::power(double alpha, double T0) {
  if (!(alpha > 0.0)) throw DomainError("power weight needs alpha > 0");
  if (!(T0 > 0.0)) throw DomainError("weight needs T0 > 0");
  return WeightFn(WeightKind::power, alpha, T0);
}

WeightFn WeightFn::log_power(double beta, double T0) {
  // beta <= 1 makes mu(s)/s non-integrable at 0.
  if (!(beta > 1.0)) throw DomainError("log-power weight needs beta > 1");
  if (!(T0 > 0.0) || !(T0 < 1.0)) throw DomainError("log-power weight needs 0 < T0 < 1");
  return WeightFn(WeightKind::log_power, beta, T0);
}

double WeightFn::operator()(double t) const {
  require_time(*this, t);
  if (kind_ == WeightKind::power) return std::pow(t, exponent_);
  return std::pow(std::log(1.0 / t), -exponent_);
}

std::string WeightFn::describe() const {
  std::ostringstream os;
  if (kind_ == WeightKind::power)
    os << "t^" << exponent_;
  else
    os << "log(1/t)^-" << exponent_;
  os << " on (0," << T0_ << "]";
  return os.str();
}

double PhiWeight::operator()(double t) const {
  return mode_ == Mode::closed_form ? phi_eval(w_, t) : phi_quadrature(w_, t);
}

double weight_eval(const WeightFn& w, double t) { return w(t); }

double phi_eval(const WeightFn& w, double t) {
  require_time(w, t);
  const double e = w.exponent();
  if (w.kind() == WeightKind::power) return std::pow(t, e) / e;
  return std::pow(std::log(1.0 / t), 1.0 - e) / (e - 1.0);
}

double phi_quadrature(const WeightFn& w, double t) {
  require_time(w, t);
  // s = exp(-y) maps (0, t] onto [log(1/t), inf) and mu(s)/s ds onto mu(e^-y) dy.
  const double lower = std::log(1.0 / t);
  const double e = w.exponent();
  auto integrand = [&](double y) -> double {
    if (w.kind() == WeightKind::power) return std::exp(-e * y);
    return std::pow(y, -e);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(integrand, lower, std::numeric_limits<double>::infinity(), 1e-12);
}

Disc::Disc(double radius) : R(radius) {
  if (!(radius > 0.0)) throw DomainError("disc radius must be positive");
}

Sector::Sector(double half_opening, double radius) : theta(half_opening), R(radius) {
  if (!(half_opening > 0.0) || !(half_opening < kPi))
    throw DomainError("sector opening must lie in (0, pi)");
  if (!(radius > 0.0)) throw DomainError("sector radius must be positive");
}

bool Sector::contains(cplx x) const {
  const double r = std::abs(x);
  return r > 0.0 && r < R && std::abs(std::arg(x)) < theta;
}

double Sector::euclidean_margin(cplx x) const {
  const double r = std::abs(x);
  const double ang = theta - std::abs(std::arg(x));
  const double to_ray = ang >= kPi / 2 ? r : r * std::sin(ang);
  return std::min({R - r, to_ray, r});
}

bool operator==(const Sector& a, const Sector& b) { return a.theta == b.theta && a.R == b.R; }

double sector_distance(const Sector& s, cplx x) {
  if (x == cplx(0.0)) throw DomainError("sector distance undefined at the origin");
  const double a = std::arg(x);
  if (std::abs(a) >= kPi) throw DomainError("point on the branch cut of arg");
  return std::min(std::log(s.R / std::abs(x)), s.theta - std::abs(a));
}

Sector shrunk_sector(const Sector& s, double eta) {
  if (!(eta > 0.0) || eta > 1.0) throw DomainError("shrink factor must lie in (0, 1]");
  return Sector(eta * s.theta, eta * s.R);
}

bool domain_contains(const Domain& d, cplx x) {
  return std::visit([x](const auto& dom) { return dom.contains(x); }, d);
}

std::string describe(const Domain& d) {
  std::ostringstream os;
  if (const auto* disc = std::get_if<Disc>(&d))
    os << "D(" << disc->R << ")";
  else {
    const auto& s = std::get<Sector>(d);
    os << "S(" << s.theta << "," << s.R << ")";
  }
  return os.str();
}

std::vector<double> geometric_times(double t_lo, double t_hi, int n) {
  if (!(t_lo > 0.0) || !(t_hi >= t_lo) || n < 1) throw DomainError("bad time ladder");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = t_hi;
    return out;
  }
  const double step = std::log(t_hi / t_lo) / (n - 1);
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = t_lo * std::exp(step * k);
  out.back() = t_hi;
  return out;
}

std::vector<cplx> disc_points(const Disc& d, int circles, int rays, int density) {
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(circles * rays));
  const double outer = d.R * (1.0 - 1.0 / density);
  for (int k = 1; k <= circles; ++k) {
    const double r = outer * k / circles;
    for (int j = 0; j < rays; ++j) pts.push_back(std::polar(r, 2.0 * kPi * j / rays));
  }
  return pts;
}

std::vector<cplx> sector_points(const Sector& s, int radii, int angles, int density,
                                double depth) {
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(radii * angles));
  const double outer = s.R * (1.0 - 1.0 / density);
  const double inner = s.R * depth;
  const double amax = s.theta * (1.0 - 1.0 / density);
  for (int k = 0; k < radii; ++k) {
    const double r =
        radii == 1 ? outer : outer * std::pow(inner / outer, static_cast<double>(k) / (radii - 1));
    for (int j = 0; j < angles; ++j) {
      const double a = angles == 1 ? 0.0 : -amax + 2.0 * amax * j / (angles - 1);
      pts.push_back(std::polar(r, a));
    }
  }
  return pts;
}

Grid make_disc_grid(const Disc& d, double t_lo, double t_hi, int n_times, int circles,
                    int rays, int density) {
  return Grid{geometric_times(t_lo, t_hi, n_times), disc_points(d, circles, rays, density)};
}

Grid make_sector_grid(const Sector& s, double t_lo, double t_hi, int n_times, int radii,
                      int angles, int density) {
  return Grid{geometric_times(t_lo, t_hi, n_times), sector_points(s, radii, angles, density)};
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol);
}

cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx x, double radius, int nodes) {
  cplx acc{0.0, 0.0};
  for (int k = 0; k < nodes; ++k) {
    const cplx dir = std::polar(1.0, 2.0 * kPi * (k + 0.5) / nodes);
    acc += f(x + radius * dir) / dir;
  }
  return acc / (radius * static_cast<double>(nodes));
}

const UnitGauss& gauss_legendre16() {
  static const UnitGauss rule = [] {
    using G = boost::math::quadrature::gauss<double, 16>;
    UnitGauss g;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = x.size(); i-- > 0;) {
      g.nodes.push_back(0.5 * (1.0 - x[i]));
      g.weights.push_back(0.5 * w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      g.nodes.push_back(0.5 * (1.0 + x[i]));
      g.weights.push_back(0.5 * w[i]);
    }
    return g;
  }();
  return rule;
}

}  // namespace sfpde
