// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fkcrit/graph_form.hpp"

namespace fkcrit {

/// Where a piece of a measure came from, kept for reporting.
struct MeasureSource {
  enum class Kind { kRaw, kAtom, kDensity };
  Kind kind = Kind::kRaw;
  double location = 0.0;  // atoms only
  double weight = 0.0;    // atom weight; unused for densities
  int sign = 1;
};

/// Signed measure mu = plus - minus as per-state masses. The two parts are
/// stored as given; canonical() returns the Jordan decomposition. Parts that
/// share a state are meaningful for lambda(mu), which weighs them separately.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  explicit SignedMeasure(std::size_t n);
  SignedMeasure(Vector plus, Vector minus,
                std::vector<MeasureSource> provenance = {});

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(plus_.size());
  }
  const Vector& plus() const noexcept { return plus_; }
  const Vector& minus() const noexcept { return minus_; }
  Vector net() const { return plus_ - minus_; }
  const std::vector<MeasureSource>& provenance() const noexcept {
    return provenance_;
  }

  bool negative_part_empty() const { return minus_.maxCoeff() <= 0.0; }
  bool positive_part_empty() const { return plus_.maxCoeff() <= 0.0; }

  /// Jordan form: min(plus, minus) = 0 at every state, same net measure.
  SignedMeasure canonical() const;
  /// Swaps the positive and negative parts.
  SignedMeasure negated() const;
  SignedMeasure scaled_minus(double factor) const;

  SignedMeasure operator+(const SignedMeasure& other) const;
  SignedMeasure operator-(const SignedMeasure& other) const;

 private:
  Vector plus_;
  Vector minus_;
  std::vector<MeasureSource> provenance_;
};

/// Positive unit-sign atom of the given weight at a grid node.
SignedMeasure atom(const Grid1D& grid, double location, double weight);

/// Positive measure with mass value[x] * m(x) at each state.
SignedMeasure density(const DirichletForm& form, const Vector& values);
/// Density given as a function of the node coordinate.
SignedMeasure density(const DirichletForm& form, const Grid1D& grid,
                      const std::function<double(double)>& value);

/// sup_x G_alpha mu(x) for each alpha, with G_alpha mu = (alpha - L)^{-1} (mu/m).
std::vector<double> kato_diagnostic(const DirichletForm& form,
                                    const Vector& measure_part,
                                    std::span<const double> alphas);

/// sup_x sum_{y not in K} G(x,y) mu(y) for each K of an increasing sequence,
/// with G = A^{-1} the 0-order Green kernel. Requires a transient form.
std::vector<double> green_tight_diagnostic(
    const DirichletForm& form, const Vector& measure_part,
    std::span<const std::vector<std::size_t>> compact_sequence);

}  // namespace fkcrit
