// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit/random_instances.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "fkcrit/error.hpp"
#include "fkcrit/measures.hpp"

namespace fkcrit {

RandomInstance random_instance(std::uint64_t seed, std::size_t index,
                               const RandomSuiteOptions& options) {
  if (options.min_states < 1 || options.max_states < options.min_states) {
    throw Error(ErrorCode::kInvalidArgument, "invalid state-count range");
  }
  if (!(options.lambda_min > 0.0) || !(options.lambda_max >= options.lambda_min)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid lambda range");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const std::size_t n = std::uniform_int_distribution<std::size_t>(
      options.min_states, options.max_states)(rng);

  // Random spanning tree (attach each new state to an earlier one), then extras.
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  for (std::size_t x = 1; x < n; ++x) {
    const std::size_t y = std::uniform_int_distribution<std::size_t>(0, x - 1)(rng);
    edges.push_back({y, x, uniform(0.1, 2.0)});
    used[x][y] = used[y][x] = true;
  }
  const std::size_t extra =
      n > 2 ? std::uniform_int_distribution<std::size_t>(0, n)(rng) : 0;
  for (std::size_t e = 0; e < extra; ++e) {
    const std::size_t x = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::size_t y = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    if (x == y || used[x][y]) continue;
    edges.push_back({x, y, uniform(0.1, 2.0)});
    used[x][y] = used[y][x] = true;
  }

  Vector killing = Vector::Zero(static_cast<Eigen::Index>(n));
  Vector mass(static_cast<Eigen::Index>(n));
  Vector plus = Vector::Zero(static_cast<Eigen::Index>(n));
  Vector minus(static_cast<Eigen::Index>(n));
  for (Eigen::Index x = 0; x < mass.size(); ++x) {
    mass[x] = uniform(0.5, 2.0);
    if (unit(rng) < 0.3) killing[x] = uniform(0.05, 1.0);
    if (unit(rng) < 0.4) plus[x] = uniform(0.05, 1.0);
    minus[x] = uniform(0.1, 1.0);
  }
  // Transience: at least one killed state.
  if (killing.maxCoeff() <= 0.0) {
    const auto x = std::uniform_int_distribution<Eigen::Index>(0, mass.size() - 1)(rng);
    killing[x] = uniform(0.05, 1.0);
  }

  double target = 1.0;
  if (!options.critical) {
    const double lo = std::log(options.lambda_min);
    const double hi = std::log(options.lambda_max);
    double log_target = 0.0;
    do {
      log_target = uniform(lo, hi);
    } while (std::abs(log_target) < options.critical_gap && hi - lo > 2 * options.critical_gap);
    target = std::exp(log_target);
  }

  DirichletForm form = build_graph_form(n, edges, killing, mass);
  const double base =
      compute_lambda_mu(SchrodingerForm(form, SignedMeasure(plus, minus))).lambda;
  // lambda(c mu-) = lambda(mu-) / c.
  minus *= base / target;

  RandomInstance out{SchrodingerForm(std::move(form), SignedMeasure(plus, minus)),
                     target, seed, index};
  return out;
}

}  // namespace fkcrit
