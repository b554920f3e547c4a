// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fkcrit/graph_form.hpp"
#include "fkcrit/spectral.hpp"

namespace fkcrit {

enum class Geometry { kLine, kRadial };
enum class EndBehavior { kReflect, kAbsorb };

/// Atom of the potential. sign = +1 belongs to mu+ (killing), -1 to mu-.
struct PotentialAtom {
  double location = 0.0;
  double weight = 0.0;
  int sign = 1;
};

/// Diffusion with generator (1/2) d^2/dx^2 (line) or the radial part of
/// (1/2) Laplacian in R^d, plus a potential made of densities and atoms.
/// Atoms act through the occupation-time local time
///   A_t = weight / (2 eps) * |{s <= t : |X_s - a| <= eps}|.
struct ContinuumProblem1D {
  Geometry geometry = Geometry::kLine;
  int dimension = 1;  // radial only
  double left = 0.0;  // radial: reflecting inner radius r_min > 0
  double right = 1.0;
  EndBehavior left_end = EndBehavior::kReflect;
  EndBehavior right_end = EndBehavior::kReflect;
  std::function<double(double)> density_plus;   // empty means 0
  std::function<double(double)> density_minus;  // empty means 0
  std::vector<PotentialAtom> atoms;
  double delta = 2.5e-5;   // time step
  double epsilon = 0.01;   // local-time bandwidth
  bool bridge_correction = true;

  /// Throws kBandwidthTooSmall when epsilon < sqrt(delta).
  void validate() const;
};

struct PathEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  double epsilon = 0.0;
};

/// E_x0[exp(-A^mu_t) f(X_t); t < zeta].
PathEstimate simulate_fk(const ContinuumProblem1D& problem, double x0, double t,
                         const std::function<double(double)>& f,
                         std::size_t n_paths, std::uint64_t seed,
                         unsigned threads = 1);

/// E_x0[l^a_t] through the bandwidth-eps occupation time at `point`.
PathEstimate estimate_local_time(const ContinuumProblem1D& problem, double x0,
                                 double t, double point, std::size_t n_paths,
                                 std::uint64_t seed, unsigned threads = 1);

/// Both estimates from one set of paths; each equals the corresponding
/// separate call with the same seed, at the cost of a single simulation.
struct FkAndLocalTime {
  PathEstimate fk;
  PathEstimate local_time;
};
FkAndLocalTime simulate_fk_and_local_time(const ContinuumProblem1D& problem, double x0,
                                          double t, const std::function<double(double)>& f,
                                          double point, std::size_t n_paths,
                                          std::uint64_t seed, unsigned threads = 1);

/// E^{mu+}_x0[exp(A^{mu-}_{zeta ^ T})] for each horizon T of the ladder, with
/// mu+ acting as killing. All horizons come from the same paths.
std::vector<PathEstimate> estimate_gauge(const ContinuumProblem1D& problem,
                                         double x0, std::span<const double> horizons,
                                         std::size_t n_paths, std::uint64_t seed,
                                         unsigned threads = 1);

/// Finite-difference chain matching a line problem: free ends for reflecting
/// boundaries, absorbing ends otherwise, atoms on nodes, densities lumped.
struct MatchedChain {
  GridForm grid_form;
  SchrodingerForm sf;
};
MatchedChain discretize(const ContinuumProblem1D& problem, double h);

}  // namespace fkcrit
