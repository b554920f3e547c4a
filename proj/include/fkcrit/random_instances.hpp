// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>

#include "fkcrit/spectral.hpp"

namespace fkcrit {

struct RandomSuiteOptions {
  std::size_t min_states = 2;
  std::size_t max_states = 10;
  /// lambda(mu) is drawn log-uniformly from [lambda_min, lambda_max].
  double lambda_min = 0.25;
  double lambda_max = 4.0;
  /// Targets with |log lambda| below this are redrawn so the verdict is not
  /// decided by rounding.
  double critical_gap = 1e-3;
  /// Force lambda(mu) = 1 exactly (up to rounding) instead of drawing it.
  bool critical = false;
};

struct RandomInstance {
  SchrodingerForm sf;
  double target_lambda = 0.0;
  std::uint64_t seed = 0;
  std::size_t index = 0;
};

/// Connected transient chain with random conductances, killing, masses and
/// a full-support mu-. mu- is rescaled so lambda(mu) hits the drawn target.
/// Deterministic in (seed, index).
RandomInstance random_instance(std::uint64_t seed, std::size_t index,
                               const RandomSuiteOptions& options = {});

}  // namespace fkcrit
