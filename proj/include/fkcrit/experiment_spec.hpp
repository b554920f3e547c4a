// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fkcrit {

/// One experiment block of a spec file.
///
///   # comment
///   [experiment]
///   experiment = remark_example
///   alpha = 1.0, 2.0
///
/// Keys before the first header form an implicit first block.
struct ExperimentSpec {
  std::string experiment;
  std::string output;  // file name inside the output directory
  std::map<std::string, std::vector<double>> values;
  std::size_t line = 0;  // line of the block start

  bool has(const std::string& key) const { return values.count(key) != 0; }
  double number(const std::string& key, double fallback) const;
  std::vector<double> list(const std::string& key, std::vector<double> fallback) const;
  std::optional<std::uint64_t> seed;
};

/// Parses and validates a spec. Throws Error(kParseError) with the offending
/// line number for syntax errors, duplicate or unknown keys, and values that
/// violate the receiving operation's preconditions.
std::vector<ExperimentSpec> parse_spec(std::string_view text);

const std::vector<std::string>& experiment_names();

}  // namespace fkcrit
