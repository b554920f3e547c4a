// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fkcrit/experiment_spec.hpp"

namespace fkcrit {

inline constexpr std::uint64_t kDefaultSeed = 1;

/// Exit codes of the batch runner.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitNumerical = 3,
};

struct RunOptions {
  std::string out_dir = ".";
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;  // overrides the seed keys in the file
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::string> files;
};

/// Renders one experiment as CSV text: '#' metadata preamble, header row,
/// data rows. The text depends only on the experiment file and seed.
std::string render_experiment(const ExperimentSpec& spec, std::uint64_t seed,
                              unsigned threads);

/// Parses the experiment file, runs every block and writes one CSV per block. Nothing
/// is written unless every block succeeds.
RunOutcome run_experiments(std::string_view spec_text, const RunOptions& options);

}  // namespace fkcrit
