// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fkcrit/error.hpp"
#include "fkcrit/measures.hpp"
#include "fkcrit/random_instances.hpp"
#include "fkcrit/scenarios.hpp"
#include "fkcrit/semigroup.hpp"
#include "oracles.hpp"

using namespace fkcrit;

namespace {

oracle::Chain to_chain(const DirichletForm& f) {
  oracle::Chain c{f.size(), {}, f.killing(), f.mass()};
  for (const Edge& e : f.edges()) c.edges.emplace_back(e.from, e.to, e.weight);
  return c;
}

double sup(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

DirichletForm two_state_form(double k0 = 0.0) {
  const Edge e[] = {{0, 1, 1.0}};
  Vector k(2);
  k << k0, 0.0;
  return build_graph_form(2, e, k, Vector::Ones(2));
}

}  // namespace

TEST_CASE("semigroup basics") {
  const RemarkProblem p = make_remark_problem(1.0, 0.1);
  const auto n = static_cast<Eigen::Index>(p.sf.form.size());
  Vector f = Vector::LinSpaced(n, -1.0, 2.0);
  CHECK((fk_apply(p.sf, 0.0, f) - f).cwiseAbs().maxCoeff() == 0.0);

  const SchrodingerForm free(p.sf.form, SignedMeasure(p.sf.form.size()));
  for (double t : {0.5, 3.0}) {
    CHECK(sup(fk_apply(free, t, Vector::Ones(n)) - Vector::Ones(n)) < 1e-12);
    CHECK(sup(fk_apply(free, t, Vector::Ones(n), ExpMethod::kUniformization) -
              Vector::Ones(n)) < 1e-12);
  }
}

TEST_CASE("critical ground state is invariant") {
  const double beta = 0.1;
  const RemarkProblem p = make_remark_problem(oracle::remark_critical_alpha(beta), beta);
  const Vector h = ground_state_time_changed(p.sf);
  for (double t : {0.1, 1.0, 10.0}) {
    CHECK(sup(fk_apply(p.sf, t, h) - h) <= 1e-8 * sup(h));
  }
}

TEST_CASE("semigroup law, m-symmetry and agreement with the dense oracle") {
  RandomSuiteOptions options;
  options.max_states = 12;
  for (std::size_t i = 0; i < 20; ++i) {
    const SchrodingerForm sf = random_instance(5, i, options).sf;
    const auto n = static_cast<Eigen::Index>(sf.form.size());
    Vector f = Vector::LinSpaced(n, 0.5, -1.5);
    const Vector ts = fk_apply(sf, 0.7, fk_apply(sf, 0.4, f));
    const Vector direct = fk_apply(sf, 1.1, f);
    CHECK(sup(ts - direct) <= 1e-9 * std::max(1.0, sup(direct)));

    const Matrix a = oracle::stiffness(to_chain(sf.form), sf.mu.plus() - sf.mu.minus());
    CHECK(sup(direct - oracle::semigroup(a, sf.form.mass(), 1.1, f)) <=
          1e-10 * std::max(1.0, sup(direct)));

    const Matrix p = fk_kernel(sf, 0.9);
    const Matrix weighted = sf.form.mass().asDiagonal() * p;
    CHECK((weighted - weighted.transpose()).cwiseAbs().maxCoeff() <=
          1e-10 * weighted.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("Pade and uniformization agree for nonnegative potentials") {
  RandomSuiteOptions options;
  options.max_states = 12;
  for (std::size_t i = 0; i < 20; ++i) {
    const SchrodingerForm base = random_instance(6, i, options).sf;
    const SchrodingerForm sf(base.form, SignedMeasure(base.mu.plus(), Vector::Zero(base.mu.plus().size())));
    const auto n = static_cast<Eigen::Index>(sf.form.size());
    const Vector f = Vector::LinSpaced(n, 1.0, 3.0);
    for (double t : {0.2, 2.0}) {
      const Vector pade = fk_apply(sf, t, f, ExpMethod::kPade);
      const Vector unif = fk_apply(sf, t, f, ExpMethod::kUniformization);
      CHECK(sup(pade - unif) <= 1e-10 * sup(pade));
    }
  }
}

TEST_CASE("gauge function") {
  const DirichletForm two = two_state_form();
  Vector a(2), b(2);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  const GaugeReport none = gauge_function(two, a, Vector::Zero(2));
  CHECK(none.spectral_radius == 0.0);
  CHECK(sup(none.gauge - Vector::Ones(2)) < 1e-14);
  CHECK(none.gaugeable);

  const GaugeReport bad = gauge_function(two, a, b);
  CHECK(bad.spectral_radius == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(bad.gaugeable);

  // Remark configuration with lambda = 2.
  const RemarkProblem p = make_remark_problem(1.0, 0.1);
  const GaugeReport g = gauge_function(p.sf.form, p.sf.mu.plus(), p.sf.mu.minus());
  CHECK(g.spectral_radius == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(g.gaugeable);
  CHECK(std::isfinite(g.sup_gauge));
  CHECK(g.gauge.minCoeff() >= 1.0);

  try {
    gauge_function(two, Vector::Zero(2), b);
    FAIL("expected RecurrentPositivePart");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRecurrentPositivePart);
  }
}

TEST_CASE("gauge duality with lambda on random chains") {
  for (std::size_t i = 0; i < 100; ++i) {
    const SchrodingerForm sf = random_instance(8, i).sf;
    const GaugeReport g = gauge_function(sf.form, sf.mu.plus(), sf.mu.minus());
    const Matrix a = oracle::stiffness(to_chain(sf.form), sf.mu.plus());
    const double lambda = oracle::generalized_min(a, sf.mu.minus());
    CHECK(lambda * g.spectral_radius == doctest::Approx(1.0).epsilon(1e-8));
    // rho is also the Perron root of A^{-1} B.
    const double rho = oracle::spectral_radius(a.inverse() * sf.mu.minus().asDiagonal());
    CHECK(g.spectral_radius == doctest::Approx(rho).epsilon(1e-8));
    CHECK(g.gaugeable == (lambda > 1.0));
  }
}

TEST_CASE("truncated gauge ladder") {
  const RemarkProblem p = make_remark_problem(1.0, 0.1);
  // Convergence is at the rate lambda0 of the whole form, small on [-5, 5].
  const double horizons[] = {1.0, 16.0, 256.0, 1024.0, 4096.0};
  const auto ladder =
      truncated_gauge(p.sf.form, p.sf.mu.plus(), p.sf.mu.minus(), horizons);
  const GaugeReport g = gauge_function(p.sf.form, p.sf.mu.plus(), p.sf.mu.minus());
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    CHECK((ladder[i] - ladder[i - 1]).minCoeff() >= -1e-9 * sup(g.gauge));
  }
  CHECK(sup(ladder.back() - g.gauge) <= 1e-6 * sup(g.gauge));

  // Without mu- the ladder is at most 1 and nonincreasing.
  const auto n = p.sf.mu.plus().size();
  const auto plain = truncated_gauge(p.sf.form, p.sf.mu.plus(), Vector::Zero(n), horizons);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    CHECK(plain[i].maxCoeff() <= 1.0 + 1e-10);
    if (i) CHECK((plain[i] - plain[i - 1]).maxCoeff() <= 1e-10);
  }
}

TEST_CASE("assumption (A)") {
  const DirichletForm two = two_state_form();
  const AssumptionAReport none = check_assumption_A(two, Vector::Zero(2));
  CHECK_FALSE(none.holds);
  CHECK(sup(none.h_limit - Vector::Ones(2)) < 1e-12);

  Vector a(2);
  a << 0.3, 0.0;
  for (auto method : {AssumptionMethod::kSpectral, AssumptionMethod::kIteration}) {
    const AssumptionAReport r = check_assumption_A(two, a, method);
    CHECK(r.holds);
    CHECK(sup(r.h_limit) < 1e-8);
    if (method == AssumptionMethod::kIteration) CHECK(r.monotone);
  }

  // Killing reachable from everywhere: zeta finite almost surely.
  const DirichletForm killed = two_state_form(0.5);
  CHECK(check_assumption_A(killed, Vector::Zero(2)).holds);
  CHECK(check_assumption_A(killed, Vector::Zero(2), AssumptionMethod::kIteration).holds);

  // Two components, one without any killing: fails there only.
  const Edge e[] = {{0, 1, 1.0}, {2, 3, 1.0}};
  const DirichletForm split = build_graph_form(4, e, Vector::Zero(4), Vector::Ones(4));
  Vector partial = Vector::Zero(4);
  partial[0] = 1.0;
  const AssumptionAReport r = check_assumption_A(split, partial);
  CHECK_FALSE(r.holds);
  CHECK(r.h_limit[0] < 1e-12);
  CHECK(r.h_limit[2] == doctest::Approx(1.0));
}

TEST_CASE("boundary diagnostic on the absorbing unit interval") {
  const double pts[] = {0.5, 0.1, 0.01, 0.001};
  const GridForm g = build_grid_form(0, 1, 1e-3, Boundary::kAbsorbing, Boundary::kAbsorbing, pts);
  std::vector<std::size_t> states;
  for (double x : pts) states.push_back(*g.grid.node_index(x));
  const double eps[] = {0.0, 0.05};
  const BoundaryTable t = boundary_class_diagnostic(g, states, eps);
  REQUIRE(t.rows.size() == 4);
  for (const BoundaryRow& r : t.rows) {
    CHECK(r.laplace == doctest::Approx(oracle::exit_laplace(r.coordinate)).epsilon(1e-6));
    CHECK(r.survival[0] == doctest::Approx(1.0));
  }
  // Midpoint minimizes E_x[exp(-zeta)].
  CHECK(t.rows[0].laplace < t.rows[1].laplace);
  CHECK(t.rows[3].laplace > 0.99);
  CHECK(t.rows[3].survival[1] < 0.01);

  const GridForm closed = build_grid_form(0, 1, 0.1, Boundary::kFree, Boundary::kFree);
  const std::size_t s[] = {1};
  try {
    boundary_class_diagnostic(closed, s, eps);
    FAIL("expected ConservativeChain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConservativeChain);
  }
}
