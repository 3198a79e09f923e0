#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "mills/evaluation.hpp"

namespace mills {
namespace {

double rhs(double x, double v) { return 2.0 * x * v - 2.0; }

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr int kMaxSteps = 10'000'000;

}  // namespace

OdeTrajectory propagate_ode(double x_from, double v_from, double x_to,
                            StepControl control) {
  if (!(control.rel_tol > 0.0) || !(control.abs_tol > 0.0)) {
    throw std::invalid_argument("propagate_ode: tolerances must be positive");
  }
  OdeTrajectory out{x_from, v_from, 0.0, 0};
  const double span = x_to - x_from;
  if (span == 0.0) return out;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  const double eps = std::numeric_limits<double>::epsilon();

  double x = x_from;
  double v = v_from;
  // The decaying mode has rate 2|x|; start inside the explicit stability
  // region and let the controller grow the step.
  double h = dir * std::min(std::fabs(span), 0.1 / (1.0 + 2.0 * std::fabs(x)));
  double k1 = rhs(x, v);

  while (dir * (x_to - x) > 0.0) {
    if (out.steps >= kMaxSteps) {
      throw ConvergenceError("propagate_ode: step budget exhausted");
    }
    if (std::fabs(h) < 16 * eps * std::max(1.0, std::fabs(x))) {
      throw ConvergenceError(
          fmt::format("propagate_ode: step-size underflow at x = {:g}", x));
    }
    const bool last = dir * (x + h - x_to) >= 0.0;
    if (last) h = x_to - x;

    const double k2 = rhs(x + c2 * h, v + h * a21 * k1);
    const double k3 = rhs(x + c3 * h, v + h * (a31 * k1 + a32 * k2));
    const double k4 = rhs(x + c4 * h, v + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = rhs(x + c5 * h,
                          v + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 =
        rhs(x + h,
            v + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double v5 =
        v + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double x_next = last ? x_to : x + h;
    const double k7 = rhs(x_next, v5);
    const double err = std::fabs(
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));

    const double scale =
        control.abs_tol +
        control.rel_tol * std::max(std::fabs(v), std::fabs(v5));
    const double ratio = err / scale;
    if (ratio <= 1.0) {
      x = x_next;
      v = v5;
      k1 = k7;
      out.local_error_sum += err;
      ++out.steps;
    }
    const double factor =
        ratio == 0.0 ? 5.0
                     : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    h *= ratio <= 1.0 ? factor : std::min(factor, 1.0);
  }
  out.x_end = x;
  out.value = v;
  return out;
}

Evaluation ode_v(double x, double x_start, StepControl control) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("ode_v: x must be finite and >= 0");
  }
  if (!(x < x_start)) {
    throw DomainError(fmt::format("ode_v: x = {:g} must be below x_start = {:g}",
                                  x, x_start));
  }
  const Evaluation anchor = asymptotic_v(x_start);
  if (anchor.abs_error_bound > control.abs_tol) {
    throw PrecisionError(fmt::format(
        "ode_v: asymptotic anchor at x_start = {:g} has error {:g} above "
        "abs_tol {:g}",
        x_start, anchor.abs_error_bound, control.abs_tol));
  }
  const OdeTrajectory run = propagate_ode(x_start, anchor.value, x, control);
  // Backward integration damps the anchor error by exp(x^2 - x_start^2).
  const double bound = run.local_error_sum + anchor.abs_error_bound;
  return {x, run.value, Method::ode, bound};
}

}  // namespace mills
