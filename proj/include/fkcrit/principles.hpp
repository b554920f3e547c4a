// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "fkcrit/spectral.hpp"

namespace fkcrit {

enum class Property {
  kMaximumPrinciple,  // (MP): h bounded above, p_t h >= h  =>  h <= 0
  kLiouville,         // (L): h bounded, p_t h = h  =>  h = 0
  kAssumptionA,
  kBoundedBelowDual,  // mirror of (MP): h bounded below, p_t h <= h => h >= 0
};

const char* property_name(Property p) noexcept;

struct PrincipleVerdict {
  Property property = Property::kMaximumPrinciple;
  bool holds = false;
  /// Violating function, present only when holds is false.
  std::optional<Vector> witness;
  /// How the verdict was reached.
  std::string certificate;
  /// lambda(mu), +inf when mu- vanishes.
  double lambda_context = 0.0;
  /// Assumption (A) holds, so the lambda(mu) > 1 equivalence applies.
  bool theorem_applicable = false;
  /// Optimal peak value of the maximum-principle LP (MP and its mirror).
  double lp_optimum = 0.0;
  /// Smallest singular value of the symmetrized Schrodinger generator over
  /// its largest (Liouville only).
  double scaled_singular_value = 0.0;
};

inline constexpr double kPrincipleTolerance = 1e-9;

/// Decides (MP) exactly on a finite chain through the LP
///   max h(x*)  s.t.  h <= 1,  (L - mu/m) h >= 0
/// over every peak state x*. (MP) fails iff some optimum exceeds 1e-9; a
/// critical ground state (lambda(mu) = 1) is also accepted as a witness.
PrincipleVerdict check_mp(const SchrodingerForm& sf);

/// Decides (L): holds iff (L - mu/m) has trivial kernel.
PrincipleVerdict check_liouville(const SchrodingerForm& sf);

/// Mirror of check_mp under h -> -h.
PrincipleVerdict check_bounded_below_dual(const SchrodingerForm& sf);

/// Direct check that h is an (MP) violation: after scaling max h to 1,
/// (L - mu/m) h >= -tol * (row scale) entrywise and max h > 0.
bool verify_mp_witness(const SchrodingerForm& sf, const Vector& h,
                       double tol = kPrincipleTolerance);

struct SphereReport {
  double step = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_mu = 0.0;
  /// Spectral radius of G M_{gamma sigma} for (1/2 Laplacian, gamma sigma).
  double gauge_rho_without_muplus = 0.0;
};

/// Radial experiment for mu = m - gamma sigma on R^d, sigma the surface
/// measure of the unit sphere. Uses the exterior closure at r_max.
SphereReport sphere_experiment(int dimension, double gamma, double r_max,
                                     double h);

}  // namespace fkcrit
