#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mills/verify.hpp"
#include "verify/report_builder.hpp"

namespace mills {
namespace {

using detail::ReportBuilder;

std::string k_label(double k) {
  if (k == std::numbers::pi) return "pi";
  return fmt::format("{:g}", k);
}

// Rounding allowance for a g_k value computed in double.
double g_rounding(double gk) {
  return 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(gk);
}

}  // namespace

std::string_view to_string(CounterexampleKind kind) {
  switch (kind) {
    case CounterexampleKind::upper_bound_fails: return "upper_bound_fails";
    case CounterexampleKind::lower_bound_fails_at_zero:
      return "lower_bound_fails_at_zero";
    case CounterexampleKind::none_found: return "none_found";
  }
  return "unknown";
}

VerificationReport verify_lower_bound(const OracleTable& table,
                                      BoundConstants constants) {
  const double tol = table.tolerance;
  const bool optimal = constants.lower_k == std::numbers::pi;
  ReportBuilder b("enclosure.lower", tol);
  for (std::size_t i = 0; i < table.xs.size(); ++i) {
    const double x = table.xs[i];
    const double margin = table.values[i] - g(constants.lower_k, x);
    bool bad = margin < -tol;
    if (optimal) {
      // Equality only at x = 0.
      bad = bad || (x == 0.0 ? std::fabs(margin) > kTouchFactor * tol
                             : std::fabs(margin) <= tol);
    }
    b.record(x, margin, bad);
  }
  return std::move(b).finish();
}

VerificationReport verify_upper_bound(const OracleTable& table,
                                      BoundConstants constants) {
  const double tol = table.tolerance;
  ReportBuilder b("enclosure.upper", tol);
  for (std::size_t i = 0; i < table.xs.size(); ++i) {
    const double x = table.xs[i];
    const double margin = g(constants.upper_k, x) - table.values[i];
    b.record(x, margin, margin <= -tol);
  }
  return std::move(b).finish();
}

VerificationReport verify_enclosure(const OracleTable& table,
                                    BoundConstants constants) {
  VerificationReport lower = verify_lower_bound(table, constants);
  const VerificationReport upper = verify_upper_bound(table, constants);
  VerificationReport out = lower;
  out.claim_id = "enclosure";
  out.points_checked = lower.points_checked;
  out.violations = lower.violations + upper.violations;
  if (upper.worst_margin < lower.worst_margin) {
    out.worst_margin = upper.worst_margin;
    out.worst_x = upper.worst_x;
  }
  out.passed = out.violations == 0;
  return out;
}

VerificationReport verify_enclosure(const GridSpec& grid, double oracle_tol,
                                    BoundConstants constants) {
  return verify_enclosure(build_oracle_table(abscissas(grid), oracle_tol),
                          constants);
}

std::vector<GridSpec> default_optimality_grids() {
  return {
      GridSpec{1e-6, 50.0, 4'000, Spacing::logarithmic, 1e-6},
      GridSpec{0.0, 1.0, 101, Spacing::linear, 1e-6},
  };
}

std::vector<VerificationReport> optimality_suite(const OracleTable& table,
                                                 BoundConstants constants) {
  const double tol = table.tolerance;
  std::vector<VerificationReport> reports;

  // (a) 3 < k < 4: positive at 0 and negative beyond a_k, so g_k is neither
  // a lower nor an upper bound.
  const double x_far = table.xs.empty() ? 50.0 : table.xs.back();
  for (double k : {3.5, 3.9, 3.99}) {
    ReportBuilder b(fmt::format("optimality.neither.k{}", k_label(k)), tol);
    const GapValue at_zero = h_gap(k, 0.0, tol);
    b.record(0.0, at_zero.h, !(at_zero.h > tol));
    const double a_k = a_threshold(k);
    const Counterexample c = find_crossing(k, a_k, std::max(x_far, 2 * a_k), tol);
    const bool found =
        c.kind == CounterexampleKind::upper_bound_fails && c.x_witness > a_k;
    b.record(found ? c.x_witness : a_k, found ? -c.h_value : 0.0, !found);
    reports.push_back(std::move(b).finish());
  }

  // (b) k < pi: strict lower bounds.
  auto strict_lower = [&](double k, std::string claim) {
    ReportBuilder b(std::move(claim), kStrictGapMargin);
    for (std::size_t i = 0; i < table.xs.size(); ++i) {
      const double h = g(k, table.xs[i]) - table.values[i];
      b.record(table.xs[i], -h, !(h < -kStrictGapMargin));
    }
    return std::move(b).finish();
  };
  // (c) upper bounds, certified positive beyond the oracle error for x > 0.
  auto strict_upper = [&](double k, std::string claim) {
    double worst_bound = 0.0;
    ReportBuilder b(std::move(claim), 0.0);
    for (std::size_t i = 0; i < table.xs.size(); ++i) {
      const double gk = g(k, table.xs[i]);
      const double h = gk - table.values[i];
      const double resolution = table.error_bounds[i] + g_rounding(gk);
      worst_bound = std::max(worst_bound, resolution);
      b.record(table.xs[i], h, !(h > resolution));
    }
    VerificationReport r = std::move(b).finish();
    r.tolerance = worst_bound;
    return r;
  };

  for (double k : {2.5, 3.0}) {
    reports.push_back(
        strict_lower(k, fmt::format("optimality.lower_strict.k{}", k_label(k))));
  }
  reports.push_back(strict_upper(
      constants.upper_k,
      fmt::format("optimality.upper_strict.k{}", k_label(constants.upper_k))));

  // (d) the optimal lower bound touches only at 0.
  {
    const double k = constants.lower_k;
    ReportBuilder b(fmt::format("optimality.lower_touch.k{}", k_label(k)), tol);
    for (std::size_t i = 0; i < table.xs.size(); ++i) {
      const double x = table.xs[i];
      const double h = g(k, x) - table.values[i];
      const bool bad = x == 0.0 ? std::fabs(h) > kTouchFactor * tol : h >= -tol;
      b.record(x, x == 0.0 ? kTouchFactor * tol - std::fabs(h) : -h, bad);
    }
    reports.push_back(std::move(b).finish());
  }

  // (e) neighbours: 4 + eps still bounds from above, pi - eps from below.
  constexpr double eps = 0.01;
  reports.push_back(strict_upper(constants.upper_k + eps,
                                 "optimality.upper_strict.k4+0.01"));
  reports.push_back(
      strict_lower(constants.lower_k - eps, "optimality.lower_strict.kpi-0.01"));
  return reports;
}

std::vector<VerificationReport> optimality_suite(double oracle_tol,
                                                 BoundConstants constants) {
  const auto grids = default_optimality_grids();
  return optimality_suite(
      build_oracle_table(merge_abscissas(grids), oracle_tol), constants);
}

GridSpec default_equivalence_grid() {
  return GridSpec{0.0, 20.0, 200, Spacing::linear, 1e-6};
}

VerificationReport check_derivative_equivalence(double k,
                                                std::span<const double> xs) {
  if (!(k > 3.0)) {
    throw DomainError(fmt::format(
        "check_derivative_equivalence: k = {:g} must exceed 3", k));
  }
  ReportBuilder b(fmt::format("derivative_equivalence.k{}", k_label(k)),
                  kTieBand);
  for (double x : xs) {
    const double disc = threshold_discriminant(k, x);
    if (std::fabs(disc) < kTieBand) continue;
    const double lhs = dg(k, x) - 2.0 * (x * g(k, x) - 1.0);
    const bool agree = (disc < 0.0) == (lhs > 0.0);
    // Positive when the two sides agree, scaled by the discriminant.
    const double margin = lhs > 0.0 ? -disc : disc;
    b.record(x, margin, !agree);
  }
  return std::move(b).finish();
}

VerificationReport check_derivative_equivalence(double k,
                                                const GridSpec& grid) {
  const auto xs = abscissas(grid);
  return check_derivative_equivalence(k, std::span<const double>(xs));
}

std::vector<VerificationReport> check_monotone_convex(const OracleTable& t) {
  const auto& xs = t.xs;
  const auto& v = t.values;
  const std::size_t n = xs.size();
  std::vector<VerificationReport> reports;

  {
    ReportBuilder b("monotone.v_decreasing", 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double drop = v[i] - v[i + 1];
      b.record(xs[i + 1], drop, !(drop > 0.0));
    }
    reports.push_back(std::move(b).finish());
  }
  {
    // Twice the gap between the chord and 1/V at the middle abscissa; on a
    // uniform grid this is the second central difference.
    ReportBuilder b("monotone.inv_v_convex", kConvexitySlack);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double left = xs[i] - xs[i - 1];
      const double right = xs[i + 1] - xs[i];
      const double chord =
          (right / v[i - 1] + left / v[i + 1]) / (left + right);
      const double second = 2.0 * (chord - 1.0 / v[i]);
      b.record(xs[i], second, second < -kConvexitySlack);
    }
    reports.push_back(std::move(b).finish());
  }
  {
    ReportBuilder b("monotone.ratio_decreasing", kRatioSlack);
    auto ratio = [&](std::size_t i) {
      const double d = 1.0 / v[i] - xs[i];
      return d * d / v[i];
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double drop = ratio(i) - ratio(i + 1);
      b.record(xs[i + 1], drop, drop < -kRatioSlack);
    }
    reports.push_back(std::move(b).finish());
  }
  for (double k : {3.0, std::numbers::pi, 4.0}) {
    ReportBuilder b(fmt::format("monotone.gap_below_inverse.k{}", k_label(k)),
                    0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (xs[i] <= 0.0) continue;
      const double margin = 1.0 / xs[i] - std::fabs(g(k, xs[i]) - v[i]);
      b.record(xs[i], margin, !(margin > 0.0));
    }
    reports.push_back(std::move(b).finish());
  }
  return reports;
}

std::vector<VerificationReport> check_monotone_convex(const GridSpec& grid,
                                                      double oracle_tol) {
  return check_monotone_convex(build_oracle_table(abscissas(grid), oracle_tol));
}

VerificationReport check_komatsu_nesting(const OracleTable& t) {
  const double tol = t.tolerance;
  ReportBuilder b("komatsu.nesting", tol);
  for (std::size_t i = 0; i < t.xs.size(); ++i) {
    const double x = t.xs[i];
    const Enclosure kom = komatsu_bounds(x);
    const double g_pi = g(std::numbers::pi, x);
    const double g_4 = g(4.0, x);
    const double lower_gap = g_pi - kom.lower;
    const double upper_gap = kom.upper - g_4;
    const double v_low = t.values[i] - kom.lower;
    const double v_high = kom.upper - t.values[i];
    bool bad = v_low <= -tol || v_high < -tol;
    if (x > 0.0) {
      bad = bad || !(lower_gap > 0.0) || !(upper_gap > 0.0);
    } else {
      bad = bad || lower_gap < 0.0 || upper_gap < 0.0;
    }
    b.record(x, std::min({lower_gap, upper_gap, v_low, v_high}), bad);
  }
  return std::move(b).finish();
}

}  // namespace mills
