#pragma once

// Evaluation engines for the scaled complementary error function
//
//   V(x) = sqrt(pi) * exp(x^2) * erfc(x)
//        = int_0^inf exp(-u) / sqrt(x^2 + u) du
//        = 2 exp(x^2) int_x^inf exp(-t^2) dt,          x >= 0,
//
// which solves V'(x) = 2 x V(x) - 2 with V(0) = sqrt(pi).
//
// Every engine returns an Evaluation carrying the value together with the
// absolute error it claims. The oracle is the slow extended-precision
// reference; the other engines are double-precision and are checked against
// it in the test suites.

#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mills {

inline constexpr double kSqrtPi = 1.7724538509055160273;  // V(0)

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested accuracy is below what the engine can deliver.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative engine did not reach its stopping criterion.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method {
  oracle,
  series,
  asymptotic,
  continued_fraction,
  quadrature,
  ode,
  auto_select,
};

std::string_view to_string(Method m);
/// Accepts the enum spellings plus the short aliases "cf", "quad" and "auto".
Method parse_method(std::string_view name);

struct Evaluation {
  double x = 0.0;
  double value = 0.0;
  Method method = Method::auto_select;
  double abs_error_bound = 0.0;
};

/// Throws std::logic_error when `e` breaks 0 < V < 1/x, V <= sqrt(pi) or has
/// a non-finite error bound. Used as a postcondition by eval_v.
void check_evaluation_invariants(const Evaluation& e);

// ---------------------------------------------------------------------------
// Oracle

/// Smallest absolute error the oracle will promise.
inline constexpr double kOracleFinestTolerance = 1e-15;

/// Reference value of V(x) from double-double quadrature of the Laplace
/// integral after u = s^2, on a dyadic panel mesh graded toward s = 0.
/// The error bound compares 16- and 32-point Gauss-Legendre rules on the
/// same mesh and adds the final rounding to double.
Evaluation oracle_v(double x, double target_abs_error = 1e-12);

// ---------------------------------------------------------------------------
// Maclaurin series

inline constexpr double kSeriesMaxX = 1.5;
inline constexpr int kSeriesMaxTerms = 400;
inline constexpr int kSeriesDefaultTerms = 80;

/// Maclaurin coefficients of V from term matching in V' = 2xV - 2:
/// c0 = sqrt(pi), c1 = -2, c_{n+1} = 2 c_{n-1} / (n + 1).
struct SeriesState {
  std::vector<double> coefficients;
  int n_terms = 0;

  explicit SeriesState(int n_terms);
};

Evaluation series_v(double x, int n_terms = kSeriesDefaultTerms);

// ---------------------------------------------------------------------------
// Asymptotic expansion 1/x - 1/(2x^3) + 3/(4x^5) - ..., truncated at the
// smallest term. The error bound is the first omitted term.

Evaluation asymptotic_v(double x);

// ---------------------------------------------------------------------------
// Continued fraction V(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))

inline constexpr double kContinuedFractionMinX = 1.0;
inline constexpr int kContinuedFractionDefaultDepth = 500;

Evaluation cf_v(double x, int max_depth = kContinuedFractionDefaultDepth);

// ---------------------------------------------------------------------------
// Double-precision quadrature

Evaluation quad_v(double x);

// ---------------------------------------------------------------------------
// Backward integration of V' = 2xV - 2

struct StepControl {
  double rel_tol = 1e-12;
  double abs_tol = 1e-13;
};

inline constexpr double kOdeDefaultStart = 10.0;

/// Integrates from the asymptotic anchor at x_start down to x.
Evaluation ode_v(double x, double x_start = kOdeDefaultStart,
                 StepControl control = {});

struct OdeTrajectory {
  double x_end = 0.0;
  double value = 0.0;
  double local_error_sum = 0.0;
  int steps = 0;
};

/// Adaptive Dormand-Prince 5(4) integration of V' = 2xV - 2 from
/// (x_from, v_from) to x_to in either direction. Throws ConvergenceError on
/// step-size underflow.
OdeTrajectory propagate_ode(double x_from, double v_from, double x_to,
                            StepControl control = {});

// ---------------------------------------------------------------------------
// Dispatch

inline constexpr double kAutoSeriesMax = 1.0;
inline constexpr double kAutoQuadratureMax = 2.0;

/// Method::auto_select uses the series for x <= 1, quadrature for 1 < x < 2
/// and the continued fraction for x >= 2.
Evaluation eval_v(double x, Method method = Method::auto_select);

/// V'(x) through the differential equation, 2 x V(x) - 2. Never positive.
double dv(double x);

}  // namespace mills
