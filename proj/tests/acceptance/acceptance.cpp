// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criteria 11 and 12 drive the real executable.

#include <fmt/format.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "mills/verify.hpp"

using namespace mills;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Captured {
  int code;
  std::string out;
};

Captured run_binary(const std::string& args) {
  const std::string cmd = fmt::format("{} {} 2>/dev/null", MILLS_CLI_PATH, args);
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) {
    out.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<double> linspace(double a, double b, int n) {
  return abscissas(GridSpec{a, b, n, Spacing::linear});
}

const VerificationReport* find(const std::vector<VerificationReport>& rs,
                               const std::string& id) {
  for (const auto& r : rs) {
    if (r.claim_id == id) return &r;
  }
  return nullptr;
}

// Shared oracle table on the full sweep grid.
const OracleTable& sweep_table() {
  static const OracleTable t =
      build_oracle_table(merge_abscissas(default_sweep_grids()), 1e-12);
  return t;
}

Outcome enclosure_sweep() {
  const auto start = std::chrono::steady_clock::now();
  const OracleTable& t = sweep_table();
  const VerificationReport lo = verify_lower_bound(t);
  const VerificationReport hi = verify_upper_bound(t);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  const bool ok = t.xs.size() >= 100000 && lo.violations == 0 &&
                  hi.violations == 0 && lo.passed && hi.passed && secs < 60.0;
  return {ok, fmt::format("{} points, lower/upper violations {}/{}, worst upper "
                          "margin {:.3e} at x = {:g}, {:.1f} s",
                          t.xs.size(), lo.violations, hi.violations,
                          hi.worst_margin, hi.worst_x, secs)};
}

Outcome touch_point() {
  const double v0 = oracle_v(0.0, 1e-15).value;
  const double touch = std::fabs(g(pi, 0.0) - v0);
  const double root = std::fabs(v0 - kSqrtPi);
  return {touch <= 1e-14 && root <= 1e-15,
          fmt::format("|g_pi(0) - V(0)| = {:.2e}, |V(0) - sqrt(pi)| = {:.2e}",
                      touch, root)};
}

Outcome cross_method() {
  double series_quad = 0.0, cf_quad = 0.0, ode_oracle = 0.0;
  for (double x : linspace(0.0, 1.5, 1501)) {
    series_quad = std::max(series_quad, std::fabs(series_v(x).value - quad_v(x).value));
  }
  for (double x : linspace(1.0, 30.0, 2901)) {
    cf_quad = std::max(cf_quad, std::fabs(cf_v(x).value - quad_v(x).value));
  }
  for (double x : linspace(0.0, 9.0, 181)) {
    ode_oracle = std::max(ode_oracle, std::fabs(ode_v(x).value - oracle_v(x).value));
  }
  return {series_quad <= 1e-12 && cf_quad <= 1e-12 && ode_oracle <= 1e-9,
          fmt::format("series/quad {:.2e}, cf/quad {:.2e}, ode/oracle {:.2e}",
                      series_quad, cf_quad, ode_oracle)};
}

Outcome ode_residual() {
  // V is only defined on x >= 0, so the first point uses the one-sided
  // second-order stencil.
  const double h = 1e-5;
  double worst = 0.0, worst_x = 0.0;
  for (double x : linspace(0.0, 8.0, 1000)) {
    const double d =
        x >= h ? (eval_v(x + h).value - eval_v(x - h).value) / (2 * h)
               : (-3 * eval_v(x).value + 4 * eval_v(x + h).value -
                  eval_v(x + 2 * h).value) / (2 * h);
    const double r = std::fabs(d - (2 * x * eval_v(x).value - 2));
    if (r > worst) {
      worst = r;
      worst_x = x;
    }
  }
  return {worst <= 1e-6,
          fmt::format("max |V' - (2xV - 2)| = {:.2e} at x = {:g}", worst, worst_x)};
}

Outcome optimality_upper() {
  std::string detail;
  bool ok = true;
  for (double k : {3.5, 3.9, 3.99}) {
    const double a = a_threshold(k);
    const Counterexample c = find_crossing(k, a, std::max(50.0, 2 * a), 1e-12);
    const double h = h_gap(k, c.x_witness, 1e-13).h;
    const bool good = c.kind == CounterexampleKind::upper_bound_fails &&
                      c.x_witness > a && h < -1e-13;
    ok = ok && good;
    detail += fmt::format("k={:g}: a_k={:.4f} x={:.4f} h={:.3e}; ", k, a,
                          c.x_witness, h);
  }
  return {ok, detail};
}

Outcome optimality_lower() {
  const OracleTable& t = sweep_table();
  bool ok = true;
  std::string detail;
  for (double k : {3.3, 3.5}) {
    const double h0 = h_gap(k, 0.0, 1e-15).h;
    ok = ok && h0 > 1e-3 && std::fabs(h0 - (std::sqrt(k) - kSqrtPi)) <= 1e-14;
    detail += fmt::format("h_{:g}(0)={:.6f}; ", k, h0);
  }
  for (double k : {2.5, 3.0}) {
    double worst = -INFINITY;
    for (std::size_t i = 0; i < t.xs.size(); ++i) {
      if (t.xs[i] <= 0.0) continue;
      worst = std::max(worst, g(k, t.xs[i]) - t.values[i]);
    }
    ok = ok && worst < -1e-13;
    detail += fmt::format("max h_{:g} = {:.3e}; ", k, worst);
  }
  return {ok, detail};
}

Outcome derivative_equivalence() {
  bool ok = true;
  std::string detail;
  for (double k : {3.1, 3.5, 3.9}) {
    const VerificationReport r =
        check_derivative_equivalence(k, default_equivalence_grid());
    ok = ok && r.passed && r.points_checked > 0;
    detail += fmt::format("k={:g}: {}/{} ok; ", k,
                          r.points_checked - r.violations, r.points_checked);
  }
  const auto xs = abscissas(default_equivalence_grid());
  long k4_bad = 0;
  for (double x : xs) {
    const bool disc_is_four = threshold_discriminant(4.0, x) == 4.0;
    const bool negated = !(dg(4.0, x) > 2.0 * (x * g(4.0, x) - 1.0));
    if (!disc_is_four || !negated) ++k4_bad;
  }
  ok = ok && k4_bad == 0 &&
       check_derivative_equivalence(4.0, default_equivalence_grid()).passed;
  detail += fmt::format("k=4: {} bad of {}", k4_bad, xs.size());
  return {ok, detail};
}

Outcome komatsu_nesting() {
  const VerificationReport r = check_komatsu_nesting(sweep_table());
  return {r.passed, fmt::format("{} points, {} violations, worst margin {:.3e}",
                                r.points_checked, r.violations, r.worst_margin)};
}

Outcome auxiliary() {
  const auto reports = check_monotone_convex(sweep_table());
  bool ok = reports.size() == 6;
  std::string detail;
  for (const auto& r : reports) {
    ok = ok && r.passed;
    if (!r.passed) detail += fmt::format("{} failed; ", r.claim_id);
  }
  const auto* convex = find(reports, "monotone.inv_v_convex");
  if (convex) detail += fmt::format("min second difference {:.2e}", convex->worst_margin);
  return {ok, detail};
}

Outcome slope_at_zero() {
  bool ok = true;
  std::string detail;
  for (double k : {pi, 4.0}) {
    const double step = 1e-6;
    const double slope =
        (h_gap(k, step, 1e-15).h - h_gap(k, 0.0, 1e-15).h) / step;
    ok = ok && std::fabs(slope - (3.0 - k)) <= 1e-4;
    detail += fmt::format("k={:g}: slope {:.6f} vs {:.6f}; ", k, slope, 3.0 - k);
  }
  return {ok, detail};
}

bool report_failed(const std::string& out, const std::string& id, long* violations) {
  const auto reports = nlohmann::json::parse(out, nullptr, false);
  if (reports.is_discarded()) return false;
  for (const auto& r : reports) {
    if (r["claim_id"] == id) {
      *violations = r["violations"].get<long>();
      return r["passed"] == false && *violations > 0;
    }
  }
  return false;
}

Outcome falsifiability() {
  const Captured lower = run_binary("verify --sabotage pi=3.2");
  const Captured upper = run_binary("verify --sabotage four=3.9");
  long lo_v = 0, up_v = 0;
  const bool lo_ok = lower.code != 0 && report_failed(lower.out, "enclosure.lower", &lo_v);
  const bool up_ok = upper.code != 0 && report_failed(upper.out, "enclosure.upper", &up_v);
  return {lo_ok && up_ok,
          fmt::format("pi=3.2: exit {} with {} lower violations; four=3.9: exit {} "
                      "with {} upper violations",
                      lower.code, lo_v, upper.code, up_v)};
}

Outcome determinism() {
  const Captured v1 = run_binary("verify --threads 4");
  const Captured v2 = run_binary("verify --threads 4");
  const Captured v3 = run_binary("verify --threads 1");
  const std::string tab = "tabulate --x-min 0 --x-max 50 --count 2000 --spacing log";
  const Captured t1 = run_binary(tab);
  const Captured t2 = run_binary(tab);
  const Captured j1 = run_binary(tab + " --format json");
  const Captured j2 = run_binary(tab + " --format json");
  const bool ok = v1.code == 0 && !v1.out.empty() && v1.out == v2.out &&
                  v1.out == v3.out && t1.code == 0 && !t1.out.empty() &&
                  t1.out == t2.out && j1.out == j2.out;
  return {ok, fmt::format("verify {} bytes (exit {}), tabulate {} bytes", v1.out.size(),
                          v1.code, t1.out.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"enclosure sweep", enclosure_sweep},
      {"touch point", touch_point},
      {"cross-method agreement", cross_method},
      {"ODE residual", ode_residual},
      {"optimality, upper side", optimality_upper},
      {"optimality, lower side", optimality_lower},
      {"derivative inequality equivalence", derivative_equivalence},
      {"Komatsu nesting", komatsu_nesting},
      {"auxiliary claims", auxiliary},
      {"derivative at zero", slope_at_zero},
      {"falsifiability", falsifiability},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    if (!o.pass) ++failures;
    while (o.detail.ends_with("; ")) o.detail.resize(o.detail.size() - 2);
    fmt::print("{} {:2} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
               o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
