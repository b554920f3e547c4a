// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "fkcrit/error.hpp"
#include "fkcrit/graph_form.hpp"
#include "oracles.hpp"

using namespace fkcrit;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Effective conductance between states s and t with everything else free.
double effective_conductance(const DirichletForm& form, std::size_t s, std::size_t t) {
  Matrix a = Matrix(form.stiffness());
  const auto n = a.rows();
  // Ground t, inject unit current at s: potential difference = resistance.
  Matrix reduced(n - 1, n - 1);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i != static_cast<Eigen::Index>(t)) keep.push_back(i);
  }
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    for (Eigen::Index j = 0; j < n - 1; ++j) reduced(i, j) = a(keep[i], keep[j]);
  }
  Vector rhs = Vector::Zero(n - 1);
  const auto pos = std::find(keep.begin(), keep.end(), static_cast<Eigen::Index>(s)) - keep.begin();
  rhs[pos] = 1.0;
  // min E(u) over u(s) = 1, u(t) = 0 is 1 / v(s).
  const Vector v = reduced.ldlt().solve(rhs);
  return 1.0 / v[pos];
}

}  // namespace

TEST_CASE("single edge forms") {
  const Edge e[] = {{0, 1, 1.0}};
  const DirichletForm rec = build_graph_form(2, e, vec({0, 0}), vec({1, 1}));
  CHECK(rec.irreducible());
  CHECK(rec.recurrent());
  CHECK_FALSE(rec.transient());
  CHECK(rec.energy(vec({3, 1})) == doctest::Approx(4.0));

  const DirichletForm tr = build_graph_form(2, e, vec({1, 0}), vec({1, 1}));
  CHECK(tr.transient());
  CHECK_FALSE(tr.recurrent());
}

TEST_CASE("path graph generator") {
  const Edge e[] = {{0, 1, 1.0}, {1, 2, 1.0}};
  const DirichletForm f = build_graph_form(3, e, Vector::Zero(3), Vector::Ones(3));
  Matrix expected(3, 3);
  expected << -1, 1, 0, 1, -2, 1, 0, 1, -1;
  CHECK((f.generator() - expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("input validation") {
  const Edge conflict[] = {{0, 1, 1.0}, {1, 0, 2.0}};
  CHECK_THROWS_AS(build_graph_form(2, conflict, Vector::Zero(2), Vector::Ones(2)), Error);
  try {
    build_graph_form(2, conflict, Vector::Zero(2), Vector::Ones(2));
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kNonSymmetricInput);
  }
  const Edge same[] = {{0, 1, 1.0}, {1, 0, 1.0}};
  CHECK(build_graph_form(2, same, Vector::Zero(2), Vector::Ones(2)).edges().size() == 1);
  const Edge ok[] = {{0, 1, 1.0}};
  try {
    build_graph_form(2, ok, Vector::Zero(2), vec({1, 0}));
    FAIL("expected NonPositiveMass");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kNonPositiveMass);
  }
}

TEST_CASE("reducible inputs are accepted and flagged") {
  const Edge e[] = {{0, 1, 1.0}, {2, 3, 1.0}};
  const DirichletForm f = build_graph_form(4, e, vec({1, 0, 0, 0}), Vector::Ones(4));
  CHECK_FALSE(f.irreducible());
  CHECK(f.component_count() == 2);
  CHECK_FALSE(f.transient());  // second component has no killing
}

TEST_CASE("energy equals assembled quadratic form and L is m-symmetric") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 6;
    std::vector<Edge> edges;
    oracle::Chain chain{n, {}, Vector::Zero(static_cast<Eigen::Index>(n)), Vector::Zero(static_cast<Eigen::Index>(n))};
    for (std::size_t x = 0; x + 1 < n; ++x) {
      const double w = u(rng);
      edges.push_back({x, x + 1, w});
      chain.edges.emplace_back(x, x + 1, w);
    }
    edges.push_back({0, 3, 0.7});
    chain.edges.emplace_back(0, 3, 0.7);
    Vector k(n), m(n);
    for (std::size_t x = 0; x < n; ++x) {
      k[x] = trial % 2 ? u(rng) : 0.0;
      m[x] = u(rng);
    }
    chain.killing = k;
    chain.mass = m;
    const DirichletForm f = build_graph_form(n, edges, k, m);
    const Matrix a = oracle::stiffness(chain, Vector::Zero(static_cast<Eigen::Index>(n)));
    for (int s = 0; s < 5; ++s) {
      Vector v(n);
      for (auto& x : v) x = u(rng) - 1.0;
      const double e = f.energy(v);
      CHECK(std::abs(e - v.dot(a * v)) <= 1e-12 * std::abs(e));
      const Matrix gen = f.generator();
      CHECK(std::abs(e + v.dot(m.asDiagonal() * gen * v)) <= 1e-12 * std::abs(e));
    }
    const Matrix gen = f.generator();
    const Matrix weighted = m.asDiagonal() * gen;
    CHECK((weighted - weighted.transpose()).cwiseAbs().maxCoeff() <=
          1e-14 * weighted.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("grid form: series conductance and node placement") {
  const double marked[] = {-1.0, 1.0};
  const GridForm g = build_grid_form(-2, 2, 1.0, Boundary::kFree, Boundary::kFree, marked);
  CHECK(g.form.size() == 5);
  const auto a = *g.grid.node_index(-1.0);
  const auto b = *g.grid.node_index(1.0);
  CHECK(effective_conductance(g.form, a, b) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(g.form.mass()[0] == doctest::Approx(0.5));
  CHECK(g.form.mass()[2] == doctest::Approx(1.0));
}

TEST_CASE("grid step snaps down and is recorded") {
  const double marked[] = {0.3};
  const GridForm g = build_grid_form(0, 1, 0.25, Boundary::kFree, Boundary::kFree, marked);
  CHECK(g.grid.requested_step == 0.25);
  CHECK(g.grid.step <= 0.25);
  CHECK(g.grid.node_index(0.3).has_value());
  CHECK(g.grid.step == doctest::Approx(0.1));

  const GridForm odd = build_grid_form(0, 1, 0.3, Boundary::kFree, Boundary::kFree);
  CHECK(odd.grid.step == doctest::Approx(0.25));
}

TEST_CASE("marked point outside the interval") {
  const double marked[] = {3.0};
  try {
    build_grid_form(0, 1, 0.1, Boundary::kFree, Boundary::kFree, marked);
    FAIL("expected MarkedPointOffGrid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMarkedPointOffGrid);
  }
}

TEST_CASE("absorbing interval approximates the Dirichlet spectrum pi^2/2") {
  double previous_error = 1e9;
  for (double h : {0.5, 0.1, 0.02, 0.005}) {
    const GridForm g = build_grid_form(0, 1, h, Boundary::kAbsorbing, Boundary::kAbsorbing);
    const Matrix a = Matrix(g.form.stiffness());
    const double lam = oracle::weighted_min(a, g.form.mass());
    // Exact discrete eigenvalue (2/h^2) sin^2(pi h / 2).
    const double s = std::sin(std::numbers::pi * h / 2.0);
    CHECK(lam == doctest::Approx(2.0 * s * s / (h * h)).epsilon(1e-10));
    const double err = std::abs(lam - std::numbers::pi * std::numbers::pi / 2.0);
    CHECK(err < previous_error);
    previous_error = err;
  }
  CHECK(previous_error < 2e-4);
}

TEST_CASE("radial form") {
  const GridForm g = build_radial_form(3, 4.0, 0.1);
  CHECK(g.grid.node_index(1.0).has_value());
  CHECK(g.form.energy(Vector::Ones(static_cast<Eigen::Index>(g.form.size()))) == 0.0);
  CHECK(g.form.recurrent());  // free truncation
  const GridForm ext = build_radial_form(3, 4.0, 0.1, RadialOuter::kExterior);
  CHECK(ext.form.transient());
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  try {
    build_radial_form(2, 4.0, 0.1);
    FAIL("expected UnsupportedDimension");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnsupportedDimension);
  }
}
