#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mills/evaluation.hpp"

namespace mills {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::oracle: return "oracle";
    case Method::series: return "series";
    case Method::asymptotic: return "asymptotic";
    case Method::continued_fraction: return "continued_fraction";
    case Method::quadrature: return "quadrature";
    case Method::ode: return "ode";
    case Method::auto_select: return "auto";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "oracle") return Method::oracle;
  if (name == "series") return Method::series;
  if (name == "asymptotic") return Method::asymptotic;
  if (name == "continued_fraction" || name == "cf") {
    return Method::continued_fraction;
  }
  if (name == "quadrature" || name == "quad") return Method::quadrature;
  if (name == "ode") return Method::ode;
  if (name == "auto") return Method::auto_select;
  throw std::invalid_argument(fmt::format("unknown method '{}'", name));
}

void check_evaluation_invariants(const Evaluation& e) {
  if (!std::isfinite(e.abs_error_bound) || e.abs_error_bound < 0.0) {
    throw std::logic_error(fmt::format(
        "evaluation at x = {:g}: error bound {:g} is not finite and >= 0", e.x,
        e.abs_error_bound));
  }
  const double slack = e.abs_error_bound;
  if (!(e.value + slack > 0.0)) {
    throw std::logic_error(
        fmt::format("evaluation at x = {:g}: value {:g} not positive", e.x,
                    e.value));
  }
  if (e.x > 0.0 && !(e.value - slack < 1.0 / e.x)) {
    throw std::logic_error(fmt::format(
        "evaluation at x = {:g}: value {:.17g} not below 1/x", e.x, e.value));
  }
  if (!(e.value - slack <= kSqrtPi)) {
    throw std::logic_error(fmt::format(
        "evaluation at x = {:g}: value {:.17g} exceeds sqrt(pi)", e.x,
        e.value));
  }
}

Evaluation eval_v(double x, Method method) {
  if (!(x >= 0.0) || std::isnan(x)) {
    throw DomainError("eval_v: x must be >= 0");
  }
  Evaluation e;
  switch (method) {
    case Method::oracle: e = oracle_v(x); break;
    case Method::series: e = series_v(x); break;
    case Method::asymptotic: e = asymptotic_v(x); break;
    case Method::continued_fraction: e = cf_v(x); break;
    case Method::quadrature: e = quad_v(x); break;
    case Method::ode: e = ode_v(x, std::max(kOdeDefaultStart, x + 1.0)); break;
    case Method::auto_select:
      if (x <= kAutoSeriesMax) {
        e = series_v(x);
      } else if (x < kAutoQuadratureMax) {
        e = quad_v(x);
      } else {
        e = cf_v(x);
      }
      break;
  }
  check_evaluation_invariants(e);
  return e;
}

double dv(double x) {
  if (!(x >= 0.0) || std::isnan(x)) throw DomainError("dv: x must be >= 0");
  double slope;
  if (x < 1e6) {
    slope = std::fma(2.0 * x, eval_v(x).value, -2.0);
  } else {
    // 2x V - 2 with V from the asymptotic expansion; omitted terms are
    // below 1e-30 relative.
    const double inv2 = 1.0 / (x * x);
    slope = -inv2 * (1.0 - 1.5 * inv2);
  }
  if (!(slope <= 0.0)) {
    throw std::logic_error(
        fmt::format("dv: derivative {:g} at x = {:g} is positive", slope, x));
  }
  return slope;
}

}  // namespace mills
