#include "mills/bounds.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <mutex>

namespace mills {
namespace {

void require_k(double k, const char* who) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw DomainError(fmt::format("{}: k = {:g} must be finite and > 0", who, k));
  }
}

void require_x(double x, const char* who) {
  if (!(x >= 0.0) || std::isnan(x)) {
    throw DomainError(fmt::format("{}: x must be >= 0", who));
  }
}

// Abscissas for the Komatsu transcription check.
constexpr std::array<double, 7> kKomatsuProbe{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0};

void validate_komatsu_once() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    for (double x : kKomatsuProbe) {
      const double v = oracle_v(x).value;
      const double lo = 2.0 / (x + std::sqrt(x * x + 2.0));
      const double hi = 2.0 / (x + std::sqrt(x * x + 1.0));
      if (!(lo < v && v <= hi)) {
        throw std::logic_error(fmt::format(
            "komatsu_bounds: [{:.17g}, {:.17g}] does not bracket V({:g}) = "
            "{:.17g}",
            lo, hi, x, v));
      }
    }
  });
}

// sqrt(x^2 + c) without overflow; c / x^2 is below rounding past 1e150.
double root_plus(double x, double c) {
  return x < 1e150 ? std::sqrt(x * x + c) : x;
}

}  // namespace

BoundParam::BoundParam(double value) : k(value) { require_k(value, "BoundParam"); }

double g(double k, double x) {
  require_k(k, "g");
  require_x(x, "g");
  if (x == 0.0) return std::sqrt(k);
  return k / ((k - 1.0) * x + root_plus(x, k));
}

double dg(double k, double x) {
  require_k(k, "dg");
  require_x(x, "dg");
  const double root = root_plus(x, k);
  const double denom = (k - 1.0) * x + root;
  return -k * ((k - 1.0) + x / root) / (denom * denom);
}

double a_threshold(double k) {
  if (k == 3.0) return 0.0;
  if (!(k > 3.0 && k < 4.0)) {
    throw DomainError(
        fmt::format("a_threshold: k = {:g} outside (3, 4)", k));
  }
  const double km3 = k - 3.0;
  return std::sqrt(k * km3 * km3 / ((k - 2.0) * (4.0 - k)));
}

double threshold_discriminant(double k, double x) {
  const double km3 = k - 3.0;
  return x * x * (k - 2.0) * (k - 4.0) + k * km3 * km3;
}

GapValue h_gap(double k, double x, double oracle_tol) {
  const double gk = g(k, x);
  const Evaluation v = oracle_v(x, oracle_tol);
  return {k, x, gk - v.value, v.abs_error_bound};
}

Enclosure enclosure(double x, double oracle_tol, BoundConstants constants) {
  require_x(x, "enclosure");
  Enclosure e{x, g(constants.lower_k, x), g(constants.upper_k, x), 0.0};
  e.width = e.upper - e.lower;
  if (oracle_tol > 0.0) {
    const double v = oracle_v(x, oracle_tol).value;
    const bool lower_ok = e.lower <= v + oracle_tol;
    const bool upper_ok = v < e.upper + oracle_tol;
    if (!lower_ok || !upper_ok) {
      throw std::logic_error(fmt::format(
          "enclosure: V({:g}) = {:.17g} outside [{:.17g}, {:.17g}]", x, v,
          e.lower, e.upper));
    }
  }
  return e;
}

Enclosure komatsu_bounds(double x) {
  require_x(x, "komatsu_bounds");
  validate_komatsu_once();
  Enclosure e{x, 2.0 / (x + root_plus(x, 2.0)), 2.0 / (x + root_plus(x, 1.0)),
              0.0};
  e.width = e.upper - e.lower;
  return e;
}

}  // namespace mills
