// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include "fkcrit/graph_form.hpp"
#include "fkcrit/measures.hpp"

namespace fkcrit {

/// E^mu(u,u) = E(u,u) + sum_x u(x)^2 (mu+(x) - mu-(x)).
struct SchrodingerForm {
  SchrodingerForm(DirichletForm form, SignedMeasure mu);

  DirichletForm form;
  SignedMeasure mu;

  double energy(const Vector& u) const;
  double positive_energy(const Vector& u) const;
  /// Matrix of E^mu.
  SparseMatrix stiffness() const;
  /// Matrix of E^{mu+}.
  SparseMatrix positive_stiffness() const;
};

enum class Normalization {
  kNegativePart,   // sum u^2 mu- = 1
  kReferenceMass,  // sum u^2 m = 1
};

struct SpectralResult {
  double lambda = 0.0;
  Vector minimizer;
  Normalization normalization = Normalization::kNegativePart;
  double residual = 0.0;
  int iterations = 0;
};

/// lambda(mu) = inf { E^{mu+}(u,u) : sum u^2 mu- = 1 }.
///
/// States outside supp(mu-) are eliminated by harmonic extension, leaving a
/// dense symmetric problem on the support. Components that do not meet the
/// support carry zero in the minimizer. Throws kEmptyNegativePart when
/// mu- vanishes.
SpectralResult compute_lambda_mu(const SchrodingerForm& sf);

/// lambda_0 = inf { E^mu(u,u) : sum u^2 m = 1 }; may be negative.
SpectralResult compute_lambda0(const SchrodingerForm& sf);

/// Minimizer of E^{potential}(u,u) subject to u = values on `boundary`, i.e.
/// the solution of (L - potential/m) u = 0 off the boundary.
Vector harmonic_extension(const DirichletForm& form, const Vector& potential,
                          std::span<const std::size_t> boundary,
                          std::span<const double> values);

/// Minimizer of compute_lambda_mu rescaled so that lambda * sum h^2 mu- = 1.
/// Requires lambda(mu) > 0.
Vector ground_state_time_changed(const SchrodingerForm& sf);
Vector ground_state_time_changed(const SchrodingerForm& sf,
                                 const SpectralResult& lambda_mu);

/// Smallest C with sum u^2 m <= C E^{mu+}(u,u); +inf when E^{mu+} has a
/// zero-energy vector.
double poincare_constant(const SchrodingerForm& sf);

/// Smallest eigenpair of a u = nu diag(weight) u, normalized in L^2(weight).
SpectralResult smallest_generalized(const SparseMatrix& a, const Vector& weight);

/// Normalizes sign: positive mean, ties broken by first nonzero entry.
void fix_sign(Vector& v);

}  // namespace fkcrit
