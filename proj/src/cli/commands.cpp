#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>

#include "mills/bounds.hpp"
#include "mills/cli.hpp"

namespace mills::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridFlags {
  double x_min = 0.0;
  double x_max = 10.0;
  int count = 101;
  std::string spacing = "lin";
  double log_floor = 1e-6;
};

void add_grid_flags(CLI::App& cmd, GridFlags& flags) {
  cmd.add_option("--x-min", flags.x_min, "Smallest abscissa");
  cmd.add_option("--x-max", flags.x_max, "Largest abscissa");
  cmd.add_option("--count,--grid-count", flags.count, "Number of abscissas");
  cmd.add_option("--spacing", flags.spacing, "Grid spacing")
      ->check(CLI::IsMember({"lin", "log"}));
  cmd.add_option("--log-floor", flags.log_floor,
                 "First abscissa of a log grid starting at 0");
}

GridSpec to_spec(const GridFlags& f) {
  GridSpec spec{f.x_min, f.x_max, f.count,
                f.spacing == "log" ? Spacing::logarithmic : Spacing::linear,
                f.log_floor};
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

bool grid_flags_given(const CLI::App& cmd) {
  for (const char* name : {"--x-min", "--x-max", "--count", "--spacing",
                           "--log-floor"}) {
    if (cmd.count(name) > 0) return true;
  }
  return false;
}

// Writes to --out when given, otherwise to stdout.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(fmt::format("cannot open '{}' for writing", path));
  file << text;
  file.flush();
  if (!file) throw IoError(fmt::format("write to '{}' failed", path));
}

// --- eval ------------------------------------------------------------------

struct EvalOptions {
  double x = 0.0;
  std::string method = "auto";
  std::string format = "text";
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  Method method;
  try {
    method = parse_method(o.method);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!(o.x >= 0.0)) throw DomainError("x must be ≥ 0");
  const Evaluation e = eval_v(o.x, method);
  if (o.format == "json") {
    nlohmann::ordered_json j{{"x", e.x},
                             {"value", e.value},
                             {"method", std::string(to_string(e.method))},
                             {"abs_error_bound", e.abs_error_bound}};
    out << j.dump(2) << "\n";
  } else if (o.format == "csv") {
    out << "x,value,method,abs_error_bound\n"
        << format_number(e.x) << ',' << format_number(e.value) << ','
        << to_string(e.method) << ',' << format_number(e.abs_error_bound)
        << "\n";
  } else {
    out << "x               " << format_number(e.x) << "\n"
        << "value           " << format_number(e.value) << "\n"
        << "method          " << to_string(e.method) << "\n"
        << "abs_error_bound " << fmt::format("{:.3e}", e.abs_error_bound)
        << "\n";
  }
  return kExitOk;
}

// --- tabulate --------------------------------------------------------------

struct TabulateOptions {
  GridFlags grid;
  std::string format = "csv";
  std::string out_path;
  double tol = 1e-12;
};

int cmd_tabulate(const TabulateOptions& o, std::ostream& out) {
  const auto xs = abscissas(to_spec(o.grid));
  std::vector<OutputRecord> rows;
  rows.reserve(xs.size());
  for (double x : xs) rows.push_back(make_record(x, o.tol));
  emit(o.format == "json" ? format_json(rows) : format_csv(rows), o.out_path,
       out);
  return kExitOk;
}

// --- verify ----------------------------------------------------------------

struct VerifyOptions {
  GridFlags grid;
  bool custom_grid = false;
  double tol = 1e-12;
  std::vector<std::string> sabotage;
  std::string out_path;
  unsigned threads = 0;
};

BoundConstants parse_sabotage(const std::vector<std::string>& items) {
  BoundConstants c;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw UsageError(fmt::format("--sabotage expects name=value, got '{}'",
                                   item));
    }
    const std::string name = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("--sabotage: bad value in '{}'", item));
    }
    if (!(value > 0.0)) throw UsageError("--sabotage: value must be > 0");
    if (name == "pi") {
      c.lower_k = value;
    } else if (name == "four") {
      c.upper_k = value;
    } else {
      throw UsageError(fmt::format("--sabotage: unknown constant '{}'", name));
    }
  }
  return c;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  if (!(o.tol >= kOracleFinestTolerance)) {
    throw UsageError(fmt::format("--tol must be >= {:g}", kOracleFinestTolerance));
  }
  const BoundConstants constants = parse_sabotage(o.sabotage);
  std::vector<double> xs;
  if (o.custom_grid) {
    const GridSpec spec = to_spec(o.grid);
    if (spec.count < 3) throw UsageError("verify needs at least 3 grid points");
    xs = abscissas(spec);
  } else {
    const auto grids = default_sweep_grids();
    xs = merge_abscissas(grids);
  }
  const OracleTable table = build_oracle_table(std::move(xs), o.tol, o.threads);

  std::vector<VerificationReport> reports;
  reports.push_back(verify_lower_bound(table, constants));
  reports.push_back(verify_upper_bound(table, constants));
  for (auto& r : optimality_suite(table, constants)) reports.push_back(std::move(r));
  const auto eq_xs = abscissas(default_equivalence_grid());
  for (double k : {3.1, 3.5, 3.9, 4.0}) {
    reports.push_back(check_derivative_equivalence(k, std::span<const double>(eq_xs)));
  }
  for (auto& r : check_monotone_convex(table)) reports.push_back(std::move(r));
  reports.push_back(check_komatsu_nesting(table));

  std::sort(reports.begin(), reports.end(),
            [](const auto& a, const auto& b) { return a.claim_id < b.claim_id; });
  emit(format_reports_json(reports), o.out_path, out);

  bool all_passed = true;
  for (const auto& r : reports) {
    if (r.passed) continue;
    all_passed = false;
    err << fmt::format("FAILED {}: {} violation(s), worst margin {:.3e} at x = {:.17g}\n",
                       r.claim_id, r.violations, r.worst_margin, r.worst_x);
  }
  return all_passed ? kExitOk : kExitFailure;
}

// --- optimality ------------------------------------------------------------

struct OptimalityOptions {
  double k = 4.0;
  double search_max = 50.0;
  double tol = 1e-12;
};

int cmd_optimality(const OptimalityOptions& o, std::ostream& out) {
  if (!(o.k > 0.0)) throw UsageError("--k must be > 0");
  if (!(o.search_max > 0.0)) throw UsageError("--search-max must be > 0");
  out << fmt::format("k                {:.17g}\n", o.k);
  if (o.k > 3.0 && o.k < 4.0) {
    out << fmt::format("a_k              {:.10f}\n", a_threshold(o.k));
  }
  const GapValue h0 = h_gap(o.k, 0.0, o.tol);
  out << fmt::format("h_k(0)           {:+.10e}  (sqrt(k) - sqrt(pi))\n", h0.h);
  if (h0.h > o.tol) {
    out << "                 g_k(0) > V(0): fails as a lower bound\n";
  }

  const Counterexample c = find_crossing(o.k, 0.0, o.search_max, o.tol);
  out << "\nkind                        x_witness               h_value  crossing\n";
  if (c.kind == CounterexampleKind::none_found) {
    out << fmt::format("{:<24}  {:>13}  {:>20}  {}\n", to_string(c.kind), "-",
                       "-", "-");
    out << "\nno counterexample found; valid upper bound on [0, "
        << fmt::format("{:g}", o.search_max) << "]\n";
  } else {
    out << fmt::format("{:<24}  {:>13.8f}  {:>+20.10e}  {}\n", to_string(c.kind),
                       c.x_witness, c.h_value,
                       std::isnan(c.crossing) ? std::string("-")
                                              : fmt::format("{:.10f}", c.crossing));
    out << fmt::format("\ng_k(x) < V(x) at x = {:.8f}: fails as an upper bound\n",
                       c.x_witness);
  }
  return kExitOk;
}

// --- bench -----------------------------------------------------------------

struct BenchOptions {
  int reps = 3;
  std::string format = "text";
};

struct BenchRow {
  std::string engine;
  std::size_t points = 0;
  double seconds = 0.0;
  double checksum = 0.0;
  double throughput() const { return seconds > 0.0 ? points / seconds : 0.0; }
};

constexpr int kBenchPoints = 10'000;

std::vector<double> bench_grid(double lo, double hi, int count) {
  return abscissas(GridSpec{lo, hi, count, Spacing::linear, 1e-6});
}

BenchRow time_engine(std::string name, const std::vector<double>& xs,
                     const std::function<double(double)>& f, int reps) {
  BenchRow row{std::move(name), xs.size(), 0.0, 0.0};
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < reps; ++r) {
    double sum = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (double x : xs) sum += f(x);
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    row.checksum = sum;
  }
  row.seconds = best;
  return row;
}

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  if (o.reps < 1) throw UsageError("--reps must be >= 1");
  const auto full = bench_grid(0.0, 50.0, kBenchPoints);
  std::vector<BenchRow> rows;
  rows.push_back(time_engine("bounds_g_pi_g_4", full, [](double x) {
    return g(std::numbers::pi, x) + g(4.0, x);
  }, o.reps));
  rows.push_back(time_engine("auto", full, [](double x) { return eval_v(x).value; }, o.reps));
  rows.push_back(time_engine("series", bench_grid(0.0, kSeriesMaxX, kBenchPoints),
                             [](double x) { return series_v(x).value; }, o.reps));
  rows.push_back(time_engine("continued_fraction", bench_grid(1.0, 50.0, kBenchPoints),
                             [](double x) { return cf_v(x).value; }, o.reps));
  rows.push_back(time_engine("quadrature", full, [](double x) { return quad_v(x).value; },
                             o.reps));
  rows.push_back(time_engine("asymptotic", bench_grid(10.0, 50.0, kBenchPoints),
                             [](double x) { return asymptotic_v(x).value; }, o.reps));
  // One backward integration per point; a 100-point subgrid keeps this short.
  rows.push_back(time_engine("ode", bench_grid(0.0, 9.0, 100),
                             [](double x) { return ode_v(x).value; }, o.reps));
  rows.push_back(time_engine("oracle", full,
                             [](double x) { return oracle_v(x).value; }, o.reps));

  const double speedup = rows[0].throughput() / rows[1].throughput();
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["engines"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      j["engines"].push_back({{"engine", r.engine},
                              {"points", r.points},
                              {"seconds", r.seconds},
                              {"evals_per_second", r.throughput()},
                              {"checksum", format_number(r.checksum)}});
    }
    j["bound_speedup_over_auto"] = speedup;
    out << j.dump(2) << "\n";
  } else {
    out << fmt::format("{:<20} {:>8} {:>12} {:>14}  {}\n", "engine", "points",
                       "seconds", "evals/s", "checksum");
    for (const auto& r : rows) {
      out << fmt::format("{:<20} {:>8} {:>12.6f} {:>14.4e}  {}\n", r.engine,
                         r.points, r.seconds, r.throughput(),
                         format_number(r.checksum));
    }
    out << fmt::format("\nbound evaluation speedup over eval_v(auto): {:.1f}x\n",
                       speedup);
  }
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Scaled complementary error function: evaluation and bounds",
               "mills"};
  app.require_subcommand(1);

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "Evaluate V(x)");
  eval->add_option("--x", eval_opts.x, "Abscissa")->required();
  eval->add_option("--method", eval_opts.method,
                   "auto|oracle|series|asymptotic|cf|quadrature|ode");
  eval->add_option("--format", eval_opts.format, "text|json|csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  TabulateOptions tab_opts;
  auto* tab = app.add_subcommand("tabulate", "Tabulate V with its bounds");
  add_grid_flags(*tab, tab_opts.grid);
  tab->add_option("--format", tab_opts.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  tab->add_option("--out", tab_opts.out_path, "Output file (default stdout)");
  tab->add_option("--tol", tab_opts.tol, "Oracle tolerance");

  VerifyOptions ver_opts;
  auto* ver = app.add_subcommand("verify", "Run every verification sweep");
  add_grid_flags(*ver, ver_opts.grid);
  ver->add_option("--tol", ver_opts.tol, "Oracle tolerance");
  ver->add_option("--out", ver_opts.out_path, "Report file (default stdout)");
  ver->add_option("--threads", ver_opts.threads, "Worker threads (0 = auto)");
  ver->add_option("--format", "Report format (json only)")
      ->type_name("TEXT")
      ->check(CLI::IsMember({"json"}));
  ver->add_option("--sabotage", ver_opts.sabotage,
                  "Perturb a bound constant (pi=..., four=...)")
      ->group("");

  OptimalityOptions opt_opts;
  auto* opt = app.add_subcommand("optimality", "Search for counterexamples");
  opt->add_option("--k", opt_opts.k, "Family parameter")->required();
  opt->add_option("--search-max", opt_opts.search_max, "Upper end of the scan");
  opt->add_option("--tol", opt_opts.tol, "Oracle tolerance");

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Throughput of each engine");
  bench->add_option("--reps", bench_opts.reps, "Repetitions (best is kept)");
  bench->add_option("--format", bench_opts.format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> argv_rev(args.begin() + (args.empty() ? 0 : 1),
                                    args.end());
  std::reverse(argv_rev.begin(), argv_rev.end());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*eval) return cmd_eval(eval_opts, out);
    if (*tab) return cmd_tabulate(tab_opts, out);
    if (*ver) {
      ver_opts.custom_grid = grid_flags_given(*ver);
      return cmd_verify(ver_opts, out, err);
    }
    if (*opt) return cmd_optimality(opt_opts, out);
    if (*bench) return cmd_bench(bench_opts, out);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "io: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  return run(std::span<const std::string>(args), out, err);
}

}  // namespace mills::cli
