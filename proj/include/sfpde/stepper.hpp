#pragma once

#include "sfpde/core.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace sfpde {

using State = std::vector<cplx>;
/// dy/ds = f(s, y). May throw; a throw is treated as a rejected step.
using OdeRhs = std::function<State(double, const State&)>;

struct StepperOptions {
  /// Per-step error bound tol * (1 + |y_k|) for every component.
  double tol = 1e-10;
  double h_min = 1e-12;
  double h_init = 1e-2;
  /// Largest allowed |step|; also the maximum spacing of recorded samples.
  double max_ds = std::numeric_limits<double>::infinity();
  /// When positive, take fixed steps of this size with no error control.
  double fixed_h = 0.0;
  long max_steps = 2000000;
};

enum class StepStatus { reached_end, left_region, step_failure };

struct OdeResult {
  StepStatus status = StepStatus::reached_end;
  std::vector<double> s;
  std::vector<State> y;
  /// First state found outside the region (when status is left_region).
  double exit_s = 0.0;
  State exit_y;
  std::string message;
};

/// Dormand-Prince 5(4) with PI step control from s0 to s1 (either direction).
///
/// `inside` is checked after each accepted step; the first crossing is localized by
/// bisection in s to 1e-12. Every accepted step is recorded, and any value in `stops`
/// between s0 and s1 is hit exactly.
OdeResult integrate_ode(const OdeRhs& f, double s0, double s1, const State& y0,
                        const StepperOptions& opt,
                        const std::function<bool(const State&)>& inside = {},
                        const std::vector<double>& stops = {});

}  // namespace sfpde
