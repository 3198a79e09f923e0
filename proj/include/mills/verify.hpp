#pragma once

// Grid sweeps and searches that check the enclosure g_pi <= V < g_4, its
// optimality within the g_k family, and the auxiliary claims about V.
//
// Every check produces a VerificationReport. Margins are signed so that a
// smaller value is more adverse; worst_margin is the minimum over the grid
// and worst_x the first abscissa attaining it.

#include <span>
#include <string>
#include <vector>

#include "mills/bounds.hpp"
#include "mills/grid.hpp"

namespace mills {

struct VerificationReport {
  std::string claim_id;
  long points_checked = 0;
  long violations = 0;
  double worst_margin = 0.0;
  double worst_x = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

enum class CounterexampleKind {
  upper_bound_fails,
  lower_bound_fails_at_zero,
  none_found,
};

std::string_view to_string(CounterexampleKind kind);

struct Counterexample {
  double k = 0.0;
  double x_witness = 0.0;
  double h_value = 0.0;
  CounterexampleKind kind = CounterexampleKind::none_found;
  /// First sign change of h_k inside the scan (NaN when h never changed sign).
  double crossing = 0.0;
};

/// Oracle values of V on a fixed set of abscissas, shared by the sweeps.
struct OracleTable {
  std::vector<double> xs;
  std::vector<double> values;
  std::vector<double> error_bounds;
  double tolerance = 0.0;
};

/// Evaluates the oracle at every abscissa. Work is split across `threads`
/// (0 picks the hardware concurrency); results do not depend on the split.
OracleTable build_oracle_table(std::vector<double> xs, double oracle_tol,
                               unsigned threads = 0);

// Tolerances fixed by the verification contract.
inline constexpr double kTieBand = 1e-9;           // derivative equivalence
inline constexpr double kStrictGapMargin = 1e-13;  // h_k < -1e-13
inline constexpr double kConvexitySlack = 1e-10;
inline constexpr double kRatioSlack = 1e-12;
inline constexpr double kTouchFactor = 10.0;       // |h_pi(0)| <= 10 tol

// --- enclosure -------------------------------------------------------------

/// g_lower(x) <= V(x) + tol everywhere; for the optimal k = pi the touch at
/// x = 0 must be within 10 tol and no x > 0 may come within tol.
VerificationReport verify_lower_bound(const OracleTable& table,
                                      BoundConstants constants = {});
/// V(x) < g_upper(x) + tol everywhere.
VerificationReport verify_upper_bound(const OracleTable& table,
                                      BoundConstants constants = {});
/// Both sides merged into one report with claim_id "enclosure".
VerificationReport verify_enclosure(const OracleTable& table,
                                    BoundConstants constants = {});
VerificationReport verify_enclosure(const GridSpec& grid, double oracle_tol,
                                    BoundConstants constants = {});

// --- optimality ------------------------------------------------------------

struct CrossingOptions {
  /// Report lower_bound_fails_at_zero when x_lo = 0 and h_k(0) > tol.
  bool probe_zero = false;
  int scan_points = 1000;
  int bisection_steps = 80;
};

/// Scans h_k on [x_lo, x_hi] (logarithmically) for a point where g_k fails as
/// an upper bound, bisects the first sign change, and returns the most
/// adverse scanned point. For 3 < k < 4 the witness is taken beyond a_k.
Counterexample find_crossing(double k, double x_lo, double x_hi,
                             double oracle_tol, CrossingOptions options = {});

/// Sweeps showing that no member of the family with k outside [pi, 4] can
/// replace either bound, and that the neighbours of pi and 4 behave as the
/// monotone family predicts.
std::vector<VerificationReport> optimality_suite(const OracleTable& table,
                                                 BoundConstants constants = {});
std::vector<VerificationReport> optimality_suite(double oracle_tol,
                                                 BoundConstants constants = {});

/// Grid used by optimality_suite when no table is supplied.
std::vector<GridSpec> default_optimality_grids();

// --- derivative inequality -------------------------------------------------

/// For k > 3 checks that threshold_discriminant(k, x) < 0 exactly when
/// dg(k, x) > 2 [x g(k, x) - 1], skipping |discriminant| < kTieBand.
VerificationReport check_derivative_equivalence(double k,
                                                const GridSpec& grid);
VerificationReport check_derivative_equivalence(double k,
                                                std::span<const double> xs);

/// Grid for the derivative equivalence: 200 linear points on [0, 20].
GridSpec default_equivalence_grid();

// --- auxiliary claims ------------------------------------------------------

/// V decreasing, 1/V convex, (1/V - x)^2 / V non-increasing, and
/// |h_k| < 1/x for k in {3, pi, 4}.
std::vector<VerificationReport> check_monotone_convex(const OracleTable& table);
std::vector<VerificationReport> check_monotone_convex(const GridSpec& grid,
                                                      double oracle_tol);

/// Komatsu bracket contains V and contains [g_pi, g_4], strictly for x > 0.
VerificationReport check_komatsu_nesting(const OracleTable& table);

}  // namespace mills
