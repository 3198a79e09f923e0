#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mills/cli.hpp"

using namespace mills;
using json = nlohmann::ordered_json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mills");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<double> split_csv(const std::string& line) {
  std::vector<double> fields;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) fields.push_back(std::stod(f));
  return fields;
}

// Exit status of the real executable, stdout discarded.
int spawn(const std::string& args) {
  const std::string cmd = std::string(MILLS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mills_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const std::set<std::string> kAllClaims{
    "derivative_equivalence.k3.1",     "derivative_equivalence.k3.5",
    "derivative_equivalence.k3.9",     "derivative_equivalence.k4",
    "enclosure.lower",                 "enclosure.upper",
    "komatsu.nesting",                 "monotone.gap_below_inverse.k3",
    "monotone.gap_below_inverse.k4",   "monotone.gap_below_inverse.kpi",
    "monotone.inv_v_convex",           "monotone.ratio_decreasing",
    "monotone.v_decreasing",           "optimality.lower_strict.k2.5",
    "optimality.lower_strict.k3",      "optimality.lower_strict.kpi-0.01",
    "optimality.lower_touch.kpi",      "optimality.neither.k3.5",
    "optimality.neither.k3.9",         "optimality.neither.k3.99",
    "optimality.upper_strict.k4",      "optimality.upper_strict.k4+0.01",
};

const json* find_claim(const json& reports, const std::string& id) {
  for (const auto& r : reports) {
    if (r["claim_id"] == id) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("V(0)") {
    const Result r = run_cli({"eval", "--x", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("1.772453850905516") != std::string::npos);
    CHECK(r.out.find("series") != std::string::npos);
    const json j = json::parse(run_cli({"eval", "--x", "0", "--format", "json"}).out);
    CHECK(std::fabs(j["value"].get<double>() - kSqrtPi) <= 1e-15);
    CHECK(j["method"] == "series");
    CHECK(j.contains("abs_error_bound"));
  }

  TEST_CASE("continued fraction and quadrature agree at x = 1") {
    const json cf = json::parse(
        run_cli({"eval", "--x", "1", "--method", "cf", "--format", "json"}).out);
    const json quad = json::parse(
        run_cli({"eval", "--x", "1", "--method", "quadrature", "--format", "json"}).out);
    CHECK(cf["method"] == "continued_fraction");
    CHECK(std::fabs(cf["value"].get<double>() - quad["value"].get<double>()) < 5e-13);
  }

  TEST_CASE("csv output") {
    const auto lines = split_lines(run_cli({"eval", "--x", "2", "--format", "csv"}).out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "x,value,method,abs_error_bound");
    CHECK(lines[1].find("continued_fraction") != std::string::npos);
  }

  TEST_CASE("errors") {
    const Result neg = run_cli({"eval", "--x", "-1"});
    CHECK(neg.code == 2);
    CHECK(neg.err.find("domain: x must be ≥ 0") != std::string::npos);
    CHECK(run_cli({"eval"}).code == 2);
    CHECK(run_cli({"eval", "--x", "abc"}).code == 2);
    CHECK(run_cli({"eval", "--x", "1", "--method", "simpson"}).code == 2);
    CHECK(run_cli({"eval", "--x", "2", "--method", "series"}).code == 2);
    CHECK(run_cli({"eval", "--x", "1", "--bogus"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
  }
}

TEST_SUITE("tabulate") {
  TEST_CASE("header and key rows") {
    const Result r = run_cli({"tabulate", "--x-min", "0", "--x-max", "1", "--count", "3"});
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == cli::kCsvHeader);

    const auto zero = split_csv(lines[1]);
    REQUIRE(zero.size() == 8);
    CHECK(zero[0] == 0.0);
    CHECK(std::fabs(zero[1] - kSqrtPi) <= 1e-15);
    CHECK(std::fabs(zero[2] - zero[1]) <= 1e-15);
    CHECK(zero[3] == 2.0);
    CHECK(zero[5] == 2.0);

    const auto one = split_csv(lines[3]);
    CHECK(one[0] == 1.0);
    CHECK(one[4] == doctest::Approx(0.7320508).epsilon(1e-7));
    CHECK(one[2] == doctest::Approx(0.7521741).epsilon(1e-7));
    CHECK(one[1] == doctest::Approx(0.7578722).epsilon(1e-7));
    CHECK(one[3] == doctest::Approx(0.7639320).epsilon(1e-7));
    CHECK(one[5] == doctest::Approx(0.8284271).epsilon(1e-7));
    CHECK(one[4] < one[2]);
    CHECK(one[2] < one[1]);
    CHECK(one[1] < one[3]);
    CHECK(one[3] < one[5]);
  }

  TEST_CASE("17 digits round-trip exactly") {
    const auto lines = split_lines(
        run_cli({"tabulate", "--x-min", "0.001", "--x-max", "40", "--count", "25",
                 "--spacing", "log"})
            .out);
    REQUIRE(lines.size() == 26);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = split_csv(lines[i]);
      const cli::OutputRecord rec = cli::make_record(f[0], 1e-12);
      CHECK(f[1] == rec.v);
      CHECK(f[2] == rec.g_pi);
      CHECK(f[3] == rec.g_4);
      CHECK(f[7] == rec.rel_width);
      CHECK(f[4] < f[2]);
      CHECK(f[2] < f[1]);
      CHECK(f[1] < f[3]);
      CHECK(f[3] < f[5]);
    }
  }

  TEST_CASE("rel_width decreases from 1 to 10") {
    const auto lines = split_lines(
        run_cli({"tabulate", "--x-min", "1", "--x-max", "10", "--count", "91"}).out);
    REQUIRE(lines.size() == 92);
    double previous = INFINITY;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const double w = split_csv(lines[i])[7];
      CHECK(w < previous);
      previous = w;
    }
  }

  TEST_CASE("json") {
    const json j = json::parse(
        run_cli({"tabulate", "--x-max", "2", "--count", "5", "--format", "json"}).out);
    REQUIRE(j.size() == 5);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j[0].items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"x", "v", "g_pi", "g_4", "komatsu_lo",
                                           "komatsu_hi", "gap", "rel_width"});
    CHECK(j[4]["x"] == 2.0);
  }

  TEST_CASE("file output matches stdout") {
    const auto path = temp_path("table.csv");
    const std::vector<std::string> flags{"tabulate", "--x-max", "5", "--count", "11"};
    auto with_out = flags;
    with_out.insert(with_out.end(), {"--out", path.string()});
    REQUIRE(run_cli(with_out).code == 0);
    CHECK(slurp(path) == run_cli(flags).out);
    std::filesystem::remove(path);
  }

  TEST_CASE("errors") {
    CHECK(run_cli({"tabulate", "--out", "/nonexistent/dir/t.csv"}).code == 1);
    CHECK(run_cli({"tabulate", "--x-min", "2", "--x-max", "1"}).code == 2);
    CHECK(run_cli({"tabulate", "--spacing", "cubic"}).code == 2);
    CHECK(run_cli({"tabulate", "--format", "xml"}).code == 2);
  }

  TEST_CASE("byte-identical across runs") {
    const std::vector<std::string> flags{"tabulate", "--x-min", "0", "--x-max", "30",
                                         "--count", "300", "--format", "json"};
    CHECK(run_cli(flags).out == run_cli(flags).out);
  }
}

TEST_SUITE("verify") {
  TEST_CASE("small grid exercises every claim") {
    const Result r = run_cli({"verify", "--grid-count", "10"});
    CHECK(r.code == 0);
    const json reports = json::parse(r.out);
    std::set<std::string> ids;
    for (const auto& rep : reports) {
      ids.insert(rep["claim_id"]);
      std::vector<std::string> keys;
      for (const auto& [k, v] : rep.items()) keys.push_back(k);
      CHECK(keys == std::vector<std::string>{"claim_id", "points_checked", "violations",
                                             "worst_margin", "worst_x", "tolerance",
                                             "passed"});
      CHECK(rep["passed"] == true);
    }
    CHECK(ids == kAllClaims);
  }

  TEST_CASE("sabotaged lower constant") {
    const Result r = run_cli({"verify", "--count", "200", "--sabotage", "pi=3.2"});
    CHECK(r.code == 1);
    const json reports = json::parse(r.out);
    const json* lower = find_claim(reports, "enclosure.lower");
    REQUIRE(lower != nullptr);
    CHECK((*lower)["passed"] == false);
    CHECK((*lower)["worst_x"].get<double>() < 0.1);
    CHECK(r.err.find("FAILED enclosure.lower") != std::string::npos);
  }

  TEST_CASE("sabotaged upper constant") {
    const Result r = run_cli({"verify", "--count", "200", "--x-max", "50", "--sabotage",
                              "four=3.9"});
    CHECK(r.code == 1);
    const json reports = json::parse(r.out);
    const json* upper = find_claim(reports, "enclosure.upper");
    REQUIRE(upper != nullptr);
    CHECK((*upper)["passed"] == false);
    CHECK((*upper)["violations"].get<long>() > 0);
  }

  TEST_CASE("bad sabotage and grid flags") {
    CHECK(run_cli({"verify", "--count", "10", "--sabotage", "tau=6"}).code == 2);
    CHECK(run_cli({"verify", "--count", "2"}).code == 2);
  }

  TEST_CASE("byte-identical across runs and thread counts") {
    const std::vector<std::string> base{"verify", "--count", "400", "--spacing", "log",
                                        "--x-max", "50"};
    auto serial = base;
    serial.insert(serial.end(), {"--threads", "1"});
    auto parallel = base;
    parallel.insert(parallel.end(), {"--threads", "4"});
    const std::string a = run_cli(serial).out;
    CHECK(a == run_cli(serial).out);
    CHECK(a == run_cli(parallel).out);
  }
}

TEST_SUITE("optimality") {
  TEST_CASE("k = 3.9") {
    const Result r = run_cli({"optimality", "--k", "3.9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("4.0775") != std::string::npos);
    CHECK(r.out.find("upper_bound_fails") != std::string::npos);
    CHECK(r.out.find("fails as an upper bound") != std::string::npos);
  }

  TEST_CASE("k = 4") {
    const Result r = run_cli({"optimality", "--k", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("no counterexample found; valid upper bound") != std::string::npos);
  }

  TEST_CASE("k = 3.3") {
    const Result r = run_cli({"optimality", "--k", "3.3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("+4.4136361553e-02") != std::string::npos);
    CHECK(r.out.find("fails as a lower bound") != std::string::npos);
  }

  TEST_CASE("usage") {
    CHECK(run_cli({"optimality"}).code == 2);
    CHECK(run_cli({"optimality", "--k", "0"}).code == 2);
    CHECK(run_cli({"optimality", "--k", "3.5", "--search-max", "-1"}).code == 2);
  }
}

TEST_SUITE("bench") {
  TEST_CASE("throughput ordering and checksums") {
    const json a = json::parse(run_cli({"bench", "--reps", "1", "--format", "json"}).out);
    const json b = json::parse(run_cli({"bench", "--reps", "1", "--format", "json"}).out);
    auto rate = [&](const std::string& engine) {
      for (const auto& e : a["engines"]) {
        if (e["engine"] == engine) return e["evals_per_second"].get<double>();
      }
      FAIL("missing engine " << engine);
      return 0.0;
    };
    CHECK(rate("bounds_g_pi_g_4") > rate("auto"));
    CHECK(rate("oracle") < rate("auto"));
    CHECK(a["bound_speedup_over_auto"].get<double>() > 1.0);
    REQUIRE(a["engines"].size() == b["engines"].size());
    for (std::size_t i = 0; i < a["engines"].size(); ++i) {
      CHECK(a["engines"][i]["checksum"] == b["engines"][i]["checksum"]);
    }
  }

  TEST_CASE("usage") {
    CHECK(run_cli({"bench", "--reps", "0"}).code == 2);
  }
}

TEST_SUITE("binary") {
  TEST_CASE("exit codes from the installed executable") {
    CHECK(spawn("eval --x 1") == 0);
    CHECK(spawn("eval --x -1") == 2);
    CHECK(spawn("no-such-command") == 2);
    CHECK(spawn("verify --count 10 --sabotage pi=3.2") == 1);
  }
}
