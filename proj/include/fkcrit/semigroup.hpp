// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fkcrit/graph_form.hpp"
#include "fkcrit/spectral.hpp"

namespace fkcrit {

enum class ExpMethod {
  kAuto,            // Pade for small chains, uniformization otherwise
  kPade,            // dense scaling and squaring on the symmetrized generator
  kUniformization,  // Poisson-weighted powers of a substochastic matrix
};

/// Feynman-Kac semigroup p^mu_t f = exp(t (L - mu/m)) f.
Vector fk_apply(const SchrodingerForm& sf, double t, const Vector& f,
                ExpMethod method = ExpMethod::kAuto);

/// Dense transition kernel of p^mu_t, entry (x, y) = p^mu_t 1_y (x).
Matrix fk_kernel(const SchrodingerForm& sf, double t);

/// exp(t Q) f for a sparse rate matrix Q with nonnegative off-diagonal
/// entries. Rows may have positive sums; they are absorbed into a scalar
/// factor exp(c t).
Vector uniformization_apply(const SparseMatrix& rates, double t, const Vector& f);

/// Sparse generator L - mu/m of a Schrodinger form.
SparseMatrix fk_generator(const SchrodingerForm& sf);

struct GaugeReport {
  /// g(x) = E^{mu+}_x[exp(A^{mu-}_zeta)]; empty when not gaugeable.
  Vector gauge;
  /// Spectral radius of G^{mu+} M_{mu-}.
  double spectral_radius = 0.0;
  bool gaugeable = false;
  /// max g, or +infinity when not gaugeable.
  double sup_gauge = 0.0;
};

inline constexpr double kGaugeTolerance = 1e-10;

/// Gauge of (E^{mu+}, mu-). Throws kRecurrentPositivePart when E^{mu+}
/// admits a zero-energy vector.
GaugeReport gauge_function(const DirichletForm& form, const Vector& mu_plus,
                           const Vector& mu_minus);

/// E^{mu+}_x[exp(A^{mu-}_{zeta ^ T})] for each horizon, exact on the chain.
std::vector<Vector> truncated_gauge(const DirichletForm& form,
                                    const Vector& mu_plus,
                                    const Vector& mu_minus,
                                    std::span<const double> horizons);

enum class AssumptionMethod { kSpectral, kIteration };

struct AssumptionAReport {
  /// lim_t E_x[exp(-A^{mu+}_t); t < zeta].
  Vector h_limit;
  bool holds = false;
  /// Largest decay rate bottom per component (smallest eigenvalue of the
  /// killed generator), spectral method only.
  std::vector<double> component_rates;
  int iterations = 0;
  /// Iterates were entrywise nonincreasing (iteration method only).
  bool monotone = true;
};

inline constexpr double kAssumptionTolerance = 1e-10;

AssumptionAReport check_assumption_A(
    const DirichletForm& form, const Vector& mu_plus,
    AssumptionMethod method = AssumptionMethod::kSpectral,
    int max_iterations = 1000000);

struct BoundaryRow {
  std::size_t state = 0;
  double coordinate = 0.0;
  /// E_x[exp(-zeta)].
  double laplace = 0.0;
  /// P_x(zeta > eps) for each requested eps.
  std::vector<double> survival;
};

struct BoundaryTable {
  std::vector<double> epsilons;
  std::vector<BoundaryRow> rows;
};

/// Table of (E_x[e^{-zeta}], P_x(zeta > eps)) along a sequence of states.
/// Throws kConservativeChain if the form has no killing.
BoundaryTable boundary_class_diagnostic(const GridForm& grid_form,
                                        std::span<const std::size_t> states,
                                        std::span<const double> epsilons);

}  // namespace fkcrit
