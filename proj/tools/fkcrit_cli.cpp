// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
//
// fkcrit run <spec-file> [--out DIR] [--threads N] [--seed S]

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fkcrit.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Criticality experiments for Schrodinger forms on finite chains"};
  app.set_version_flag("--version", std::string(fkc_version()));
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  CLI::App* run = app.add_subcommand("run", "Run every block of an experiment file");
  run->add_option("spec", spec_path, "Experiment file (key = value lines)")->required();
  run->add_option("--out", out_dir, "Output directory (default: $FKCRIT_OUT_DIR or .)");
  run->add_option("--threads", threads, "Worker threads for Monte Carlo")
      ->check(CLI::PositiveNumber);
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Seed overriding the file's seed keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (out_dir.empty()) {
    const char* env = std::getenv("FKCRIT_OUT_DIR");
    out_dir = env && *env ? env : ".";
  }
  std::ifstream in(spec_path, std::ios::binary);
  if (!in) {
    std::cerr << "fkcrit: cannot read " << spec_path << "\n";
    return kExitValidation;
  }
  std::ostringstream text;
  text << in.rdbuf();

  int exit_code = 0;
  const fkc_status status = fkc_experiment_run(text.str().c_str(), out_dir.c_str(), threads,
                                               seed_opt->count() > 0 ? 1 : 0, seed,
                                               &exit_code);
  if (status != FKC_OK) {
    std::cerr << "fkcrit: " << fkc_status_name(status) << ": " << fkc_last_error() << "\n";
    return kExitNumerical;
  }
  if (exit_code != 0) std::cerr << "fkcrit: " << fkc_last_error() << "\n";
  return exit_code;
}
