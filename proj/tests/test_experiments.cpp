// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fkcrit/error.hpp"
#include "fkcrit/experiment_spec.hpp"
#include "fkcrit/experiments.hpp"
#include "oracles.hpp"

using namespace fkcrit;
namespace fs = std::filesystem;

namespace {

struct Table {
  std::vector<std::string> preamble;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
  }
  double at(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(column(name)));
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Table read_csv(const std::string& text) {
  Table t;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      t.preamble.push_back(line);
    } else if (t.header.empty()) {
      t.header = split(line);
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

Table render(const std::string& text, std::uint64_t seed = 1, unsigned threads = 1) {
  const auto specs = parse_spec(text);
  REQUIRE(specs.size() == 1);
  return read_csv(render_experiment(specs[0], seed, threads));
}

ErrorCode parse_error(const std::string& text, std::string* message = nullptr) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  return ErrorCode::kNumericalError;  // sentinel: no error
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fkcrit_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("parse: minimal spec") {
  const auto specs = parse_spec("experiment = remark_example\nalpha = 1.0\nbeta = 0.1");
  REQUIRE(specs.size() == 1);
  CHECK(specs[0].experiment == "remark_example");
  CHECK(specs[0].number("alpha", 0) == 1.0);
  CHECK(specs[0].number("beta", 0) == 0.1);
  CHECK(specs[0].output == "remark_example.csv");
  CHECK_FALSE(specs[0].seed.has_value());
}

TEST_CASE("parse: sections, comments, lists, exponents, seed") {
  const auto specs = parse_spec(
      "# two blocks\n"
      "[experiment]\n"
      "experiment = threshold_scan  # trailing comment\n"
      "beta = 5e-2, 1.0E-1,0.2\n"
      "seed = 18446744073709551615\n"
      "\n"
      "[experiment]\n"
      "experiment = remark_example\n"
      "output = second.csv\n");
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].list("beta", {}) == std::vector<double>{0.05, 0.1, 0.2});
  CHECK(*specs[0].seed == 18446744073709551615ull);
  CHECK(specs[0].line == 2);
  CHECK(specs[1].output == "second.csv");
}

TEST_CASE("parse: rejections") {
  std::string msg;
  CHECK(parse_error("alpha = -1", &msg) == ErrorCode::kParseError);
  CHECK(parse_error("experiment = remark_example\nalpha = -1", &msg) ==
        ErrorCode::kParseError);
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("positive") != std::string::npos);

  CHECK(parse_error("experiment = remark_example\nbeta = 0.1\nbeta = 0.2", &msg) ==
        ErrorCode::kParseError);
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("line 2") != std::string::npos);

  CHECK(parse_error("", &msg) == ErrorCode::kParseError);
  CHECK(parse_error("# only a comment\n\n", &msg) == ErrorCode::kParseError);
  CHECK(parse_error("experiment = remark_example\nfoo = 1", &msg) == ErrorCode::kParseError);
  CHECK(msg.find("foo") != std::string::npos);
  CHECK(parse_error("experiment = nonsense") == ErrorCode::kParseError);
  CHECK(parse_error("experiment = remark_example\nalpha = abc") == ErrorCode::kParseError);
  CHECK(parse_error("experiment = remark_example\nh = 0.1, 0.2") == ErrorCode::kParseError);
  CHECK(parse_error("experiment = remark_example\noutput = ../x.csv") ==
        ErrorCode::kParseError);
  CHECK(parse_error("[other]\nexperiment = remark_example") == ErrorCode::kParseError);
  CHECK(parse_error("experiment = sphere_example\ndimension = 2") == ErrorCode::kParseError);
  CHECK(parse_error("experiment = threshold_scan\nbeta = 0.25") == ErrorCode::kParseError);
  CHECK(parse_error("experiment = remark_example\nseed = -4") == ErrorCode::kParseError);
  CHECK(parse_error("experiment = remark_example\n[experiment]\nexperiment = remark_example") ==
        ErrorCode::kParseError);
  CHECK(parse_error("experiment = custom_chain\nstates = 2\nmass = 1, 1") ==
        ErrorCode::kParseError);
}

TEST_CASE("remark_example row") {
  const Table t = render("experiment = remark_example\nalpha = 1\nbeta = 0.1");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.at(0, "alpha") == 1.0);
  CHECK(t.at(0, "beta") == 0.1);
  CHECK(t.at(0, "lambda_numeric") == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(t.at(0, "lambda_closed") == 2.0);
  CHECK(t.at(0, "gamma_numeric") == doctest::Approx(0.632456).epsilon(1e-6));
  CHECK(t.at(0, "gamma_closed") == doctest::Approx(oracle::remark_plateau(1, 0.1)).epsilon(1e-15));
  CHECK(t.at(0, "h_adjusted") == 0.05);
  CHECK(t.at(0, "gaugeable") == 1.0);
  CHECK(t.at(0, "mp_holds") == 1.0);
  bool seed_line = false, version_line = false;
  for (const auto& line : t.preamble) {
    seed_line |= line.find("seed") != std::string::npos;
    version_line |= line.find("fkcrit_version") != std::string::npos;
  }
  CHECK(seed_line);
  CHECK(version_line);
}

TEST_CASE("threshold_scan sits at lambda = 1") {
  const Table t = render("experiment = threshold_scan\nbeta = 0.05, 0.1, 0.2\nalpha_factors = 1");
  REQUIRE(t.rows.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    const double beta = t.at(r, "beta");
    CHECK(t.at(r, "alpha") == doctest::Approx(oracle::remark_critical_alpha(beta)));
    CHECK(t.at(r, "lambda_numeric") == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(t.at(r, "mp_holds") == 0.0);
  }
}

TEST_CASE("custom_chain two-state values") {
  const Table t = render(
      "experiment = custom_chain\nstates = 2\nedges = 0, 1, 1\nmass = 1, 1\n"
      "mu_plus = 1, 0\nmu_minus = 0, 1");
  REQUIRE(t.header == std::vector<std::string>{"quantity", "value"});
  CHECK(std::stod(t.rows.at(0).at(1)) ==
        doctest::Approx(oracle::two_state_lambda(1, 1)).epsilon(1e-12));
  CHECK(std::stod(t.rows.at(2).at(1)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("output is byte-identical across runs and thread counts") {
  const std::string spec =
      "experiment = mc_validation\npaths = 400\ndelta = 1e-3\nepsilon = 0.05\n"
      "time = 0.2\nhorizons = 0.1, 0.2\nseed = 77\n";
  const auto s = parse_spec(spec);
  const std::string a = render_experiment(s[0], 77, 1);
  const std::string b = render_experiment(s[0], 77, 1);
  const std::string c = render_experiment(s[0], 77, 3);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a != render_experiment(s[0], 78, 1));

  const auto r = parse_spec("experiment = random_suite\ncount = 12\ncritical_count = 3");
  CHECK(render_experiment(r[0], 5, 1) == render_experiment(r[0], 5, 2));
}

TEST_CASE("run_experiments writes files and maps errors to exit codes") {
  const fs::path dir = fresh_dir("run");
  RunOptions options;
  options.out_dir = dir.string();
  const RunOutcome ok = run_experiments(
      "[experiment]\nexperiment = remark_example\n"
      "[experiment]\nexperiment = boundary_diag\nh = 0.01\nepsilons = 0.1\npoints = 0.5, 0.1\n",
      options);
  CHECK(ok.exit_code == kExitOk);
  CHECK(ok.files.size() == 2);
  CHECK(fs::exists(dir / "remark_example.csv"));
  CHECK(fs::exists(dir / "boundary_diag.csv"));

  // Seed override is recorded in the preamble.
  options.seed = 1234;
  CHECK(run_experiments("experiment = remark_example\noutput = seeded.csv", options).exit_code ==
        kExitOk);
  CHECK(slurp(dir / "seeded.csv").find("1234") != std::string::npos);
  options.seed.reset();

  const fs::path empty_dir = fresh_dir("empty");
  options.out_dir = empty_dir.string();
  const RunOutcome empty = run_experiments("", options);
  CHECK(empty.exit_code == kExitValidation);
  CHECK(fs::is_empty(empty_dir));

  // A failing block keeps earlier valid blocks from being written.
  const RunOutcome bad_mc = run_experiments(
      "[experiment]\nexperiment = remark_example\n"
      "[experiment]\nexperiment = mc_validation\ndelta = 0.01\nepsilon = 0.05\n",
      options);
  CHECK(bad_mc.exit_code == kExitValidation);
  CHECK(bad_mc.message.find("BandwidthTooSmall") != std::string::npos);
  CHECK(fs::is_empty(empty_dir));

  // Overflowing conductances make the eigensolver fail: a numerical error.
  const RunOutcome numerical = run_experiments(
      "experiment = custom_chain\nstates = 2\nedges = 0, 1, 1e308\nmass = 1, 1\n"
      "mu_plus = 1e308, 0\nmu_minus = 0, 1\n",
      options);
  CHECK(numerical.exit_code == kExitNumerical);
  CHECK(fs::is_empty(empty_dir));

  // Output directory below a regular file cannot be created.
  std::ofstream(dir / "blocker") << "x";
  options.out_dir = (dir / "blocker" / "sub").string();
  const RunOutcome io = run_experiments("experiment = remark_example", options);
  CHECK(io.exit_code == kExitValidation);
}
