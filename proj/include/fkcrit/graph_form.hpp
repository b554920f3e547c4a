// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fkcrit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Undirected edge {from, to} carrying conductance `weight`.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
};

/// Finite symmetric Markov chain given by conductances, killing and
/// reference masses. The energy counts each undirected edge once:
///
///   E(u,u) = sum_{edges} w (u(x) - u(y))^2 + sum_x k(x) u(x)^2
///
/// and the generator is (Lu)(x) = [sum_y w(x,y)(u(y)-u(x)) - k(x)u(x)] / m(x).
/// Instances are immutable once built.
class DirichletForm {
 public:
  DirichletForm(std::size_t n, std::vector<Edge> edges, Vector killing,
                Vector mass, std::optional<Vector> labels = std::nullopt);

  std::size_t size() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Vector& killing() const noexcept { return killing_; }
  const Vector& mass() const noexcept { return mass_; }
  const std::optional<Vector>& labels() const noexcept { return labels_; }

  /// Connected-component index per state (components numbered from 0).
  const std::vector<std::size_t>& components() const noexcept {
    return component_;
  }
  std::size_t component_count() const noexcept { return n_components_; }
  bool irreducible() const noexcept { return n_components_ == 1; }
  /// Every component carries positive killing, so the Green operator exists.
  bool transient() const noexcept { return transient_; }
  /// Irreducible and without killing.
  bool recurrent() const noexcept { return irreducible() && !transient_; }

  double energy(const Vector& u) const;
  /// Symmetric matrix A with E(u,u) = u^T A u.
  SparseMatrix stiffness() const;
  /// Same as stiffness() with extra diagonal `potential` added.
  SparseMatrix stiffness(const Vector& potential) const;
  /// Dense generator L = -M^{-1} A.
  Matrix generator() const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  Vector killing_;
  Vector mass_;
  std::optional<Vector> labels_;
  std::vector<std::size_t> component_;
  std::size_t n_components_ = 0;
  bool transient_ = false;
};

enum class Boundary { kFree, kAbsorbing };

/// Outer closure of a radial discretization at r_max. `kExterior` adds the
/// killing weight (d-2) s_d r_max^{d-2} / 2, which is the energy of the
/// harmonic continuation u(r_max) (r_max/r)^{d-2} beyond the truncation.
enum class RadialOuter { kFree, kAbsorbing, kExterior };

/// Equispaced one-dimensional node set underlying a grid or radial form.
struct Grid1D {
  double left = 0.0;
  double right = 0.0;
  double step = 0.0;
  double requested_step = 0.0;
  Boundary left_boundary = Boundary::kFree;
  Boundary right_boundary = Boundary::kFree;
  std::vector<double> nodes;

  /// Index of the node at coordinate x, if x is a node up to 1e-9 * step.
  std::optional<std::size_t> node_index(double x) const;
  /// Linear interpolation of nodal values; constant extension outside.
  double interpolate(const Vector& values, double x) const;
};

struct GridForm {
  DirichletForm form;
  Grid1D grid;
};

DirichletForm build_graph_form(std::size_t n, std::span<const Edge> edges,
                               const Vector& killing, const Vector& mass);

/// Discretizes (1/2) int u'^2 dx on [left, right]: neighbour conductance
/// 1/(2h), interior masses h, halved at free ends. An absorbing end drops the
/// boundary node and puts killing 1/(2h) on its neighbour. The step is snapped
/// downward until every marked point is a node.
GridForm build_grid_form(double left, double right, double h,
                         Boundary left_boundary, Boundary right_boundary,
                         std::span<const double> marked_points = {});

/// Radial reduction of (1/2)Laplacian on R^d for d >= 3. Nodes r_i = i h,
/// i = 1..N with r_N = r_max and a node at r = 1.
GridForm build_radial_form(int dimension, double r_max, double h,
                           RadialOuter outer = RadialOuter::kFree);

/// Surface area of the unit sphere in R^d.
double unit_sphere_area(int dimension);

}  // namespace fkcrit
