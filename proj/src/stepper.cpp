#include "sfpde/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sfpde {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (std::size_t i = 0; i < out.size(); ++i) {
    cplx acc{};
    for (const auto& [w, k] : terms) acc += w * (*k)[i];
    out[i] += h * acc;
  }
  return out;
}

bool finite(const State& y) {
  for (const cplx& z : y)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

struct Trial {
  bool ok = false;
  State y;
  double err = 0.0;  // scaled error norm, <= 1 accepts
};

Trial dp_step(const OdeRhs& f, double s, const State& y, const State& k1, double h, double tol) {
  Trial tr;
  try {
    const State k2 = f(s + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = f(s + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = f(s + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(s + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 =
        f(s + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    tr.y = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f(s + h, tr.y);
    if (!finite(tr.y) || !finite(k7)) return tr;
    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
      const double scale = tol * (1.0 + std::max(std::abs(y[i]), std::abs(tr.y[i])));
      err = std::max(err, std::abs(e) / scale);
    }
    tr.err = err;
    tr.ok = true;
  } catch (const std::exception&) {
    tr.ok = false;
  }
  return tr;
}

}  // namespace

OdeResult integrate_ode(const OdeRhs& f, double s0, double s1, const State& y0,
                        const StepperOptions& opt, const std::function<bool(const State&)>& inside,
                        const std::vector<double>& stops) {
  OdeResult res;
  res.s.push_back(s0);
  res.y.push_back(y0);
  if (s0 == s1) return res;
  const double dir = s1 > s0 ? 1.0 : -1.0;

  // Intermediate targets in integration order, ending with s1.
  std::vector<double> targets;
  for (double st : stops)
    if ((st - s0) * dir > 0.0 && (s1 - st) * dir > 0.0) targets.push_back(st);
  std::sort(targets.begin(), targets.end(), [dir](double a, double b) { return a * dir < b * dir; });
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  targets.push_back(s1);

  double s = s0;
  State y = y0;
  double h = opt.fixed_h > 0.0 ? opt.fixed_h : std::min(opt.h_init, opt.max_ds);
  double err_prev = 1.0;
  long steps = 0;
  std::size_t next = 0;

  State k1;
  try {
    k1 = f(s, y);
  } catch (const std::exception& e) {
    res.status = StepStatus::step_failure;
    res.message = std::string("right-hand side failed at the initial point: ") + e.what();
    return res;
  }

  while (next < targets.size()) {
    const double target = targets[next];
    if (++steps > opt.max_steps) {
      res.status = StepStatus::step_failure;
      res.message = "step budget exhausted";
      return res;
    }
    double step = std::min({h, opt.max_ds, std::abs(target - s)});
    const bool lands = step >= std::abs(target - s) * (1.0 - 1e-14);
    if (lands) step = std::abs(target - s);
    const double hs = dir * step;

    Trial tr = dp_step(f, s, y, k1, hs, opt.tol);
    if (opt.fixed_h <= 0.0 && (!tr.ok || tr.err > 1.0)) {
      const double fac = tr.ok ? std::max(0.2, 0.9 * std::pow(tr.err, -0.2)) : 0.25;
      h = step * fac;
      if (h < opt.h_min) {
        res.status = StepStatus::step_failure;
        std::ostringstream os;
        os << "step size collapsed below " << opt.h_min << " at s=" << s;
        res.message = os.str();
        return res;
      }
      continue;
    }
    if (!tr.ok) {
      res.status = StepStatus::step_failure;
      res.message = "right-hand side failed in fixed-step mode";
      return res;
    }

    const double s_new = lands ? target : s + hs;
    if (inside && !inside(tr.y)) {
      // Bisect on the step fraction; each probe is one fresh step from (s, y).
      double lo = 0.0, hi = 1.0;
      State y_hi = tr.y;
      while ((hi - lo) * step > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        Trial probe = dp_step(f, s, y, k1, mid * hs, opt.tol);
        if (probe.ok && inside(probe.y)) {
          lo = mid;
        } else {
          hi = mid;
          if (probe.ok) y_hi = probe.y;
        }
      }
      if (lo > 0.0) {
        Trial last = dp_step(f, s, y, k1, lo * hs, opt.tol);
        if (last.ok && inside(last.y)) {
          res.s.push_back(s + lo * hs);
          res.y.push_back(last.y);
        }
      }
      res.status = StepStatus::left_region;
      res.exit_s = s + hi * hs;
      res.exit_y = y_hi;
      return res;
    }

    s = s_new;
    y = tr.y;
    res.s.push_back(s);
    res.y.push_back(y);
    if (lands) ++next;
    try {
      k1 = f(s, y);
    } catch (const std::exception& e) {
      res.status = StepStatus::step_failure;
      res.message = std::string("right-hand side failed: ") + e.what();
      return res;
    }
    if (opt.fixed_h <= 0.0) {
      // PI controller (Gustafsson), exponents 0.7/5 and 0.4/5.
      const double err = std::max(tr.err, 1e-10);
      double fac = 0.9 * std::pow(err, -0.14) * std::pow(err_prev, 0.08);
      fac = std::clamp(fac, 0.2, 5.0);
      err_prev = err;
      if (!lands || step >= h) h = step * fac;
    }
  }
  return res;
}

}  // namespace sfpde
