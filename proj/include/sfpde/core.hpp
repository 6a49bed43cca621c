#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sfpde {

using cplx = std::complex<double>;

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Weight functions mu(t) and their accumulated weight phi(t) = int_0^t mu(s)/s ds.
// ---------------------------------------------------------------------------

enum class WeightKind { power, log_power };

/// mu(t) = t^alpha (alpha > 0) or mu(t) = (log(1/t))^(-beta) (beta > 1).
///
/// Both members of the family are positive, increasing and satisfy
/// int_0^T0 mu(s)/s ds < inf. The log-power member needs T0 < 1 so that
/// log(1/t) stays positive on (0, T0].
class WeightFn {
 public:
  static WeightFn power(double alpha, double T0 = 1.0);
  static WeightFn log_power(double beta, double T0 = 0.5);

  WeightKind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  double T0() const { return T0_; }

  double operator()(double t) const;

  std::string describe() const;

 private:
  WeightFn(WeightKind kind, double exponent, double T0)
      : kind_(kind), exponent_(exponent), T0_(T0) {}

  WeightKind kind_;
  double exponent_;
  double T0_;
};

/// phi(t) evaluated either from the closed-form antiderivative or by quadrature.
class PhiWeight {
 public:
  enum class Mode { closed_form, quadrature };

  explicit PhiWeight(WeightFn w, Mode mode = Mode::closed_form)
      : w_(w), mode_(mode) {}

  double operator()(double t) const;

  const WeightFn& weight() const { return w_; }
  Mode mode() const { return mode_; }

 private:
  WeightFn w_;
  Mode mode_;
};

double weight_eval(const WeightFn& w, double t);
double phi_eval(const WeightFn& w, double t);
/// Always integrates mu(s)/s numerically (relative tolerance 1e-10).
double phi_quadrature(const WeightFn& w, double t);

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct Disc {
  double R;

  explicit Disc(double radius);
  bool contains(cplx x) const { return std::abs(x) < R; }
};

/// S(theta, R) = { 0 < |x| < R, |arg x| < theta } with the principal argument.
struct Sector {
  double theta;
  double R;

  Sector(double half_opening, double radius);
  bool contains(cplx x) const;
  /// Euclidean distance from an interior point to the sector boundary.
  double euclidean_margin(cplx x) const;
};

bool operator==(const Sector& a, const Sector& b);

/// d_S(x) = min{ log(R/|x|), theta - |arg x| }.
double sector_distance(const Sector& s, cplx x);
/// S(eta*theta, eta*R).
Sector shrunk_sector(const Sector& s, double eta);

using Domain = std::variant<Disc, Sector>;

bool domain_contains(const Domain& d, cplx x);
std::string describe(const Domain& d);

// ---------------------------------------------------------------------------
// Deterministic sample grids
// ---------------------------------------------------------------------------

struct Grid {
  std::vector<double> times;  // ascending, strictly positive
  std::vector<cplx> points;   // strictly inside the domain
};

/// n geometric samples spanning [t_lo, t_hi], ascending.
std::vector<double> geometric_times(double t_lo, double t_hi, int n);

/// Concentric circles |x| = R(1-1/density) k/circles, k = 1..circles, each with `rays` points.
std::vector<cplx> disc_points(const Disc& d, int circles, int rays, int density = 1000);

/// Log-radius x angle lattice inside the sector, radii from R(1-1/density) down to R*depth.
std::vector<cplx> sector_points(const Sector& s, int radii, int angles, int density = 1000,
                                double depth = 1e-2);

Grid make_disc_grid(const Disc& d, double t_lo, double t_hi, int n_times, int circles,
                    int rays, int density = 1000);
Grid make_sector_grid(const Sector& s, double t_lo, double t_hi, int n_times, int radii,
                      int angles, int density = 1000);

// ---------------------------------------------------------------------------
// Numerics shared by the analysis modules
// ---------------------------------------------------------------------------

/// Adaptive Gauss-Kronrod quadrature of a real integrand on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

/// f'(x) from the trapezoid rule on the circle |z - x| = radius (exponentially accurate
/// for holomorphic f).
cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx x, double radius,
                       int nodes = 16);

/// Gauss-Legendre nodes and weights on [0, 1] (16 points).
struct UnitGauss {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const UnitGauss& gauss_legendre16();

}  // namespace sfpde
