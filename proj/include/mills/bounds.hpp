#pragma once

// The bound family
//
//   g_k(x) = k / ((k - 1) x + sqrt(x^2 + k)),   k > 0, x >= 0,
//
// together with the gap h_k = g_k - V, the two-sided enclosure
// g_pi(x) <= V(x) < g_4(x), and the classical Komatsu bracket it sharpens.

#include <numbers>

#include "mills/evaluation.hpp"

namespace mills {

/// Family parameter k. The distinguished values are exact to working
/// precision: pi is std::numbers::pi, never a truncated literal.
struct BoundParam {
  double k;

  explicit BoundParam(double value);

  static BoundParam pi() { return BoundParam(std::numbers::pi); }
  static BoundParam four() { return BoundParam(4.0); }
};

/// Parameters of the lower and upper members of the enclosure. Defaults are
/// the optimal pair (pi, 4); the verification suite perturbs them to prove
/// its checks have power.
struct BoundConstants {
  double lower_k = std::numbers::pi;
  double upper_k = 4.0;
};

struct Enclosure {
  double x = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double width = 0.0;
};

struct GapValue {
  double k = 0.0;
  double x = 0.0;
  double h = 0.0;
  /// Error bound of the oracle value used for V(x).
  double abs_error_bound = 0.0;
};

double g(double k, double x);
inline double g(BoundParam k, double x) { return g(k.k, x); }

/// d g_k / dx = -k [(k - 1) + x / sqrt(x^2 + k)] / [(k - 1) x + sqrt(x^2 + k)]^2.
double dg(double k, double x);

/// a_k = sqrt(k (k - 3)^2 / ((k - 2)(4 - k))) for 3 < k < 4; exactly 0 at k = 3.
/// Past a_k the derivative inequality g_k' > 2 (x g_k - 1) holds.
double a_threshold(double k);

/// x^2 (k - 2)(k - 4) + k (k - 3)^2. For k > 3 it is negative exactly where
/// g_k'(x) > 2 [x g_k(x) - 1].
double threshold_discriminant(double k, double x);

/// h_k(x) = g_k(x) - V(x) with V from the oracle.
GapValue h_gap(double k, double x, double oracle_tol = 1e-12);

/// [g_pi(x), g_4(x)] (or the pair in `constants`). With `oracle_tol` > 0 the
/// oracle is evaluated and the bracket asserted, throwing std::logic_error on
/// failure; pass 0 to skip that postcondition.
Enclosure enclosure(double x, double oracle_tol = 1e-12,
                    BoundConstants constants = {});

/// Komatsu's inequalities written for V:
///   2 / (x + sqrt(x^2 + 2)) < V(x) <= 2 / (x + sqrt(x^2 + 1)).
/// The lower end is g_2. On first use the bracket is checked against the
/// oracle at a handful of abscissas so a wrong transcription fails loudly.
Enclosure komatsu_bounds(double x);

/// Right derivative of h_k at 0 from direct differentiation: 3 - k.
/// (h_k'(0) = g_k'(0) - V'(0) = -(k - 1) + 2.)
constexpr double gap_slope_at_zero(double k) { return 3.0 - k; }

}  // namespace mills
