// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit/graph_form.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "fkcrit/error.hpp"

namespace fkcrit {

namespace {

// Union-find over states; small and only used at construction.
std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

DirichletForm::DirichletForm(std::size_t n, std::vector<Edge> edges,
                             Vector killing, Vector mass,
                             std::optional<Vector> labels)
    : n_(n),
      edges_(std::move(edges)),
      killing_(std::move(killing)),
      mass_(std::move(mass)),
      labels_(std::move(labels)) {
  if (n_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "state count must be positive");
  }
  if (static_cast<std::size_t>(killing_.size()) != n_ ||
      static_cast<std::size_t>(mass_.size()) != n_) {
    throw Error(ErrorCode::kInvalidArgument,
                "killing and mass vectors must have one entry per state");
  }
  if (labels_ && static_cast<std::size_t>(labels_->size()) != n_) {
    throw Error(ErrorCode::kInvalidArgument, "label vector has wrong length");
  }
  for (std::size_t x = 0; x < n_; ++x) {
    if (!(mass_[x] > 0.0) || !std::isfinite(mass_[x])) {
      std::ostringstream os;
      os << "mass at state " << x << " must be positive, got " << mass_[x];
      throw Error(ErrorCode::kNonPositiveMass, os.str());
    }
    if (!(killing_[x] >= 0.0) || !std::isfinite(killing_[x])) {
      std::ostringstream os;
      os << "killing at state " << x << " must be nonnegative";
      throw Error(ErrorCode::kInvalidArgument, os.str());
    }
  }

  std::vector<std::size_t> parent(n_);
  for (std::size_t x = 0; x < n_; ++x) parent[x] = x;
  for (const Edge& e : edges_) {
    std::size_t a = find_root(parent, e.from);
    std::size_t b = find_root(parent, e.to);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  component_.assign(n_, 0);
  std::map<std::size_t, std::size_t> ids;
  for (std::size_t x = 0; x < n_; ++x) {
    std::size_t root = find_root(parent, x);
    auto [it, inserted] = ids.try_emplace(root, ids.size());
    component_[x] = it->second;
  }
  n_components_ = ids.size();

  std::vector<bool> killed(n_components_, false);
  for (std::size_t x = 0; x < n_; ++x) {
    if (killing_[x] > 0.0) killed[component_[x]] = true;
  }
  transient_ = std::all_of(killed.begin(), killed.end(),
                           [](bool k) { return k; });
}

double DirichletForm::energy(const Vector& u) const {
  double total = 0.0;
  for (const Edge& e : edges_) {
    double d = u[e.from] - u[e.to];
    total += e.weight * d * d;
  }
  for (std::size_t x = 0; x < n_; ++x) total += killing_[x] * u[x] * u[x];
  return total;
}

SparseMatrix DirichletForm::stiffness() const {
  return stiffness(Vector::Zero(static_cast<Eigen::Index>(n_)));
}

SparseMatrix DirichletForm::stiffness(const Vector& potential) const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * edges_.size() + n_);
  for (const Edge& e : edges_) {
    auto i = static_cast<Eigen::Index>(e.from);
    auto j = static_cast<Eigen::Index>(e.to);
    triplets.emplace_back(i, i, e.weight);
    triplets.emplace_back(j, j, e.weight);
    triplets.emplace_back(i, j, -e.weight);
    triplets.emplace_back(j, i, -e.weight);
  }
  for (std::size_t x = 0; x < n_; ++x) {
    auto i = static_cast<Eigen::Index>(x);
    triplets.emplace_back(i, i, killing_[i] + potential[i]);
  }
  auto n = static_cast<Eigen::Index>(n_);
  SparseMatrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Matrix DirichletForm::generator() const {
  Matrix a = Matrix(stiffness());
  return -(mass_.cwiseInverse().asDiagonal() * a);
}

std::optional<std::size_t> Grid1D::node_index(double x) const {
  if (nodes.empty()) return std::nullopt;
  double t = (x - nodes.front()) / step;
  double r = std::round(t);
  if (std::abs(t - r) > 1e-9 * std::max(1.0, std::abs(t))) return std::nullopt;
  if (r < 0.0 || r >= static_cast<double>(nodes.size())) return std::nullopt;
  return static_cast<std::size_t>(r);
}

double Grid1D::interpolate(const Vector& values, double x) const {
  if (x <= nodes.front()) return values[0];
  if (x >= nodes.back()) return values[values.size() - 1];
  double t = (x - nodes.front()) / step;
  auto i = static_cast<Eigen::Index>(std::floor(t));
  i = std::min<Eigen::Index>(i, values.size() - 2);
  double frac = t - static_cast<double>(i);
  return (1.0 - frac) * values[i] + frac * values[i + 1];
}

DirichletForm build_graph_form(std::size_t n, std::span<const Edge> edges,
                               const Vector& killing, const Vector& mass) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "state count must be positive");
  }
  std::map<std::pair<std::size_t, std::size_t>, double> merged;
  for (const Edge& e : edges) {
    if (e.from >= n || e.to >= n) {
      throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge weights must be finite and nonnegative");
    }
    if (e.from == e.to) {
      if (e.weight != 0.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "self-loops must carry zero weight");
      }
      continue;
    }
    auto key = std::minmax(e.from, e.to);
    auto [it, inserted] = merged.try_emplace(key, e.weight);
    if (!inserted && it->second != e.weight) {
      std::ostringstream os;
      os << "edge {" << key.first << ", " << key.second
         << "} given with conflicting weights " << it->second << " and "
         << e.weight;
      throw Error(ErrorCode::kNonSymmetricInput, os.str());
    }
  }
  std::vector<Edge> list;
  list.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    if (w > 0.0) list.push_back({key.first, key.second, w});
  }
  return DirichletForm(n, std::move(list), killing, mass);
}

namespace {

// Smallest cell count >= `start` for which every offset is an integer number
// of cells.
std::size_t snap_cells(double length, std::size_t start,
                       std::span<const double> offsets) {
  const std::size_t limit = std::max<std::size_t>(64 * start, 1024);
  for (std::size_t cells = start; cells <= limit; ++cells) {
    double h = length / static_cast<double>(cells);
    bool ok = std::all_of(offsets.begin(), offsets.end(), [&](double off) {
      double t = off / h;
      return std::abs(t - std::round(t)) <= 1e-9 * std::max(1.0, t);
    });
    if (ok) return cells;
  }
  throw Error(ErrorCode::kMarkedPointOffGrid,
              "no admissible step places every marked point on a node");
}

}  // namespace

GridForm build_grid_form(double left, double right, double h,
                         Boundary left_boundary, Boundary right_boundary,
                         std::span<const double> marked_points) {
  if (!(left < right) || !std::isfinite(left) || !std::isfinite(right)) {
    throw Error(ErrorCode::kInvalidArgument, "grid requires left < right");
  }
  if (!(h > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "grid step must be positive");
  }
  const double length = right - left;
  std::vector<double> offsets;
  for (double p : marked_points) {
    if (p < left || p > right) {
      std::ostringstream os;
      os << "marked point " << p << " lies outside [" << left << ", " << right
         << "]";
      throw Error(ErrorCode::kMarkedPointOffGrid, os.str());
    }
    if ((p == left && left_boundary == Boundary::kAbsorbing) ||
        (p == right && right_boundary == Boundary::kAbsorbing)) {
      throw Error(ErrorCode::kMarkedPointOffGrid,
                  "marked point sits on an absorbing end, which has no node");
    }
    offsets.push_back(p - left);
  }
  auto start =
      static_cast<std::size_t>(std::max(1.0, std::ceil(length / h - 1e-9)));
  const std::size_t cells = snap_cells(length, start, offsets);
  const double step = length / static_cast<double>(cells);

  const std::size_t first = left_boundary == Boundary::kAbsorbing ? 1 : 0;
  const std::size_t last =
      right_boundary == Boundary::kAbsorbing ? cells - 1 : cells;
  if (last < first) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid too coarse: no interior node between absorbing ends");
  }
  const std::size_t n = last - first + 1;

  Grid1D grid;
  grid.left = left;
  grid.right = right;
  grid.step = step;
  grid.requested_step = h;
  grid.left_boundary = left_boundary;
  grid.right_boundary = right_boundary;
  grid.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.nodes[i] = left + static_cast<double>(first + i) * step;
  }

  const double w = 1.0 / (2.0 * step);
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});

  auto ni = static_cast<Eigen::Index>(n);
  Vector mass = Vector::Constant(ni, step);
  Vector killing = Vector::Zero(ni);
  if (left_boundary == Boundary::kFree) {
    mass[0] *= 0.5;
  } else {
    killing[0] += w;
  }
  if (right_boundary == Boundary::kFree) {
    mass[ni - 1] *= 0.5;
  } else {
    killing[ni - 1] += w;
  }
  Vector labels = Eigen::Map<const Vector>(grid.nodes.data(), ni);
  return GridForm{DirichletForm(n, std::move(edges), std::move(killing),
                                std::move(mass), std::move(labels)),
                  std::move(grid)};
}

double unit_sphere_area(int dimension) {
  double d = static_cast<double>(dimension);
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

GridForm build_radial_form(int dimension, double r_max, double h,
                           RadialOuter outer) {
  if (dimension < 3) {
    std::ostringstream os;
    os << "radial forms need a transient dimension d >= 3, got " << dimension;
    throw Error(ErrorCode::kUnsupportedDimension, os.str());
  }
  if (!(r_max > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "radial form requires r_max > 1");
  }
  if (!(h > 0.0) || h >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "radial step must lie in (0, 1) so that r = 1 is a node");
  }
  const double offsets[] = {1.0, r_max};
  auto start = static_cast<std::size_t>(std::ceil(r_max / h - 1e-9));
  const std::size_t cells = snap_cells(r_max, start, offsets);
  const double step = r_max / static_cast<double>(cells);
  const std::size_t n = cells;  // nodes r = step, 2 step, ..., r_max
  const double area = unit_sphere_area(dimension);
  const double power = static_cast<double>(dimension - 1);

  Grid1D grid;
  grid.left = step;
  grid.right = r_max;
  grid.step = step;
  grid.requested_step = h;
  grid.left_boundary = Boundary::kFree;
  grid.right_boundary =
      outer == RadialOuter::kAbsorbing ? Boundary::kAbsorbing : Boundary::kFree;
  std::size_t count = outer == RadialOuter::kAbsorbing ? n - 1 : n;
  grid.nodes.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid.nodes[i] = static_cast<double>(i + 1) * step;
  }

  auto ni = static_cast<Eigen::Index>(count);
  std::vector<Edge> edges;
  edges.reserve(count);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    double r_mid = (static_cast<double>(i) + 1.5) * step;
    edges.push_back({i, i + 1, area * std::pow(r_mid, power) / (2.0 * step)});
  }
  Vector mass(ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    mass[i] = area * std::pow(grid.nodes[i], power) * step;
  }
  Vector killing = Vector::Zero(ni);
  if (outer == RadialOuter::kAbsorbing) {
    double r_mid = (static_cast<double>(count) + 0.5) * step;
    killing[ni - 1] = area * std::pow(r_mid, power) / (2.0 * step);
  } else if (outer == RadialOuter::kExterior) {
    killing[ni - 1] = 0.5 * (dimension - 2) * area *
                      std::pow(r_max, static_cast<double>(dimension - 2));
  }
  Vector labels = Eigen::Map<const Vector>(grid.nodes.data(), ni);
  return GridForm{DirichletForm(count, std::move(edges), std::move(killing),
                                std::move(mass), std::move(labels)),
                  std::move(grid)};
}

}  // namespace fkcrit
