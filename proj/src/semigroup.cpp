// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <unsupported/Eigen/MatrixFunctions>

#include "fkcrit/error.hpp"
#include "fkcrit/linalg.hpp"

namespace fkcrit {

namespace {

constexpr Eigen::Index kDenseLimit = 600;

// exp(t S) for the symmetrized generator S = M^{1/2} G M^{-1/2}, mapped back
// to the generator basis.
Matrix dense_kernel(const SparseMatrix& stiffness, const Vector& mass, double t) {
  const Vector root = mass.cwiseSqrt();
  const Vector inv_root = root.cwiseInverse();
  Matrix s = -(inv_root.asDiagonal() * Matrix(stiffness) * inv_root.asDiagonal());
  s = 0.5 * (s + s.transpose());
  Matrix e = (t * s).exp();
  e = 0.5 * (e + e.transpose());
  return inv_root.asDiagonal() * e * root.asDiagonal();
}

bool is_substochastic(const SparseMatrix& rates) {
  for (Eigen::Index k = 0; k < rates.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(rates, k); it; ++it) {
      if (it.row() != it.col() && it.value() < 0.0) return false;
    }
  }
  return true;
}

std::vector<bool> killed_components(const DirichletForm& form,
                                    const Vector& potential) {
  std::vector<bool> killed(form.component_count(), false);
  for (std::size_t x = 0; x < form.size(); ++x) {
    auto i = static_cast<Eigen::Index>(x);
    if (form.killing()[i] + potential[i] > 0.0) {
      killed[form.components()[x]] = true;
    }
  }
  return killed;
}

}  // namespace

SparseMatrix fk_generator(const SchrodingerForm& sf) {
  SparseMatrix g = -(sf.form.mass().cwiseInverse().asDiagonal() * sf.stiffness());
  g.makeCompressed();
  return g;
}

Vector uniformization_apply(const SparseMatrix& rates, double t, const Vector& f) {
  if (t < 0.0) throw Error(ErrorCode::kInvalidArgument, "time must be >= 0");
  if (!is_substochastic(rates)) {
    throw Error(ErrorCode::kInvalidArgument,
                "uniformization needs nonnegative off-diagonal rates");
  }
  if (t == 0.0) return f;
  const Eigen::Index n = rates.rows();
  // Shift so every row sum is <= 0; exp(tQ) = exp(ct) exp(t(Q - c)).
  Vector row_sum = rates * Vector::Ones(n);
  const double shift = std::max(0.0, row_sum.maxCoeff());
  double rate = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    rate = std::max(rate, std::abs(rates.coeff(i, i) - shift));
  }
  if (rate == 0.0) return std::exp(shift * t) * f;

  SparseMatrix p = rates / rate;
  for (Eigen::Index i = 0; i < n; ++i) p.coeffRef(i, i) += 1.0 - shift / rate;
  const double q = rate * t;
  const auto terms = static_cast<long>(std::ceil(q + 12.0 * std::sqrt(q) + 30.0));
  const double log_q = std::log(q);
  Vector power = f;
  Vector sum = Vector::Zero(n);
  for (long k = 0; k <= terms; ++k) {
    const double log_w = -q + static_cast<double>(k) * log_q -
                         std::lgamma(static_cast<double>(k) + 1.0);
    if (log_w > -745.0) sum += std::exp(log_w) * power;
    if (k < terms) power = p * power;
  }
  return std::exp(shift * t) * sum;
}

Vector fk_apply(const SchrodingerForm& sf, double t, const Vector& f,
                ExpMethod method) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidArgument, "time must be finite and >= 0");
  }
  if (static_cast<std::size_t>(f.size()) != sf.form.size()) {
    throw Error(ErrorCode::kInvalidArgument, "function has wrong length");
  }
  if (t == 0.0) return f;
  const auto n = static_cast<Eigen::Index>(sf.form.size());
  if (method == ExpMethod::kAuto) {
    method = n <= kDenseLimit ? ExpMethod::kPade : ExpMethod::kUniformization;
  }
  if (method == ExpMethod::kPade) {
    return dense_kernel(sf.stiffness(), sf.form.mass(), t) * f;
  }
  return uniformization_apply(fk_generator(sf), t, f);
}

Matrix fk_kernel(const SchrodingerForm& sf, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "time must be >= 0");
  return dense_kernel(sf.stiffness(), sf.form.mass(), t);
}

GaugeReport gauge_function(const DirichletForm& form, const Vector& mu_plus,
                           const Vector& mu_minus) {
  const auto n = static_cast<Eigen::Index>(form.size());
  if (mu_plus.size() != n || mu_minus.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "measure has wrong length");
  }
  const auto killed = killed_components(form, mu_plus);
  if (!std::all_of(killed.begin(), killed.end(), [](bool k) { return k; })) {
    throw Error(ErrorCode::kRecurrentPositivePart,
                "E^{mu+} has a zero-energy component; no Green operator");
  }
  GaugeReport report;
  if (mu_minus.maxCoeff() <= 0.0) {
    report.gauge = Vector::Ones(n);
    report.spectral_radius = 0.0;
    report.gaugeable = true;
    report.sup_gauge = 1.0;
    return report;
  }
  const SparseMatrix a = form.stiffness(mu_plus);
  Eigen::SimplicialLDLT<SparseMatrix> green(a);
  if (green.info() != Eigen::Success || green.vectorD().minCoeff() <= 0.0) {
    throw Error(ErrorCode::kRecurrentPositivePart,
                "E^{mu+} factorization failed");
  }
  std::vector<Eigen::Index> support;
  for (Eigen::Index x = 0; x < n; ++x) {
    if (mu_minus[x] > 0.0) support.push_back(x);
  }
  const auto ns = static_cast<Eigen::Index>(support.size());
  Matrix unit = Matrix::Zero(n, ns);
  for (Eigen::Index j = 0; j < ns; ++j) unit(support[j], j) = 1.0;
  const Matrix columns = green.solve(unit);
  // B^{1/2} (A^{-1})_{SS} B^{1/2} shares its nonzero spectrum with A^{-1} B.
  Matrix c(ns, ns);
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index j = 0; j < ns; ++j) {
      c(i, j) = std::sqrt(mu_minus[support[i]] * mu_minus[support[j]]) *
                columns(support[i], j);
    }
  }
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c, Eigen::EigenvaluesOnly);
  report.spectral_radius = eig.eigenvalues().cwiseAbs().maxCoeff();
  report.gaugeable = report.spectral_radius < 1.0 - kGaugeTolerance;
  if (!report.gaugeable) {
    report.sup_gauge = std::numeric_limits<double>::infinity();
    return report;
  }
  // g = 1 + A^{-1} B g  <=>  (A - B) g = A 1.
  SparseMatrix shifted = a;
  for (Eigen::Index x = 0; x < n; ++x) shifted.coeffRef(x, x) -= mu_minus[x];
  Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalError, "gauge system factorization failed");
  }
  report.gauge = solver.solve(a * Vector::Ones(n));
  report.sup_gauge = report.gauge.maxCoeff();
  return report;
}

std::vector<Vector> truncated_gauge(const DirichletForm& form,
                                    const Vector& mu_plus,
                                    const Vector& mu_minus,
                                    std::span<const double> horizons) {
  const auto n = static_cast<Eigen::Index>(form.size());
  if (n > kDenseLimit) {
    throw Error(ErrorCode::kInvalidArgument,
                "truncated gauge is computed densely; chain too large");
  }
  SchrodingerForm sf(form, SignedMeasure(mu_plus, mu_minus));
  const Matrix g = Matrix(fk_generator(sf));
  const Vector exit_rate =
      (form.killing() + mu_plus).cwiseQuotient(form.mass());
  // d/dT v = G v + exit_rate, v(0) = 1; augmented exponential carries the
  // integral term.
  Matrix aug = Matrix::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = g;
  aug.topRightCorner(n, 1) = exit_rate;
  std::vector<Vector> out;
  out.reserve(horizons.size());
  for (double horizon : horizons) {
    if (!(horizon > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "horizon must be positive");
    }
    const Matrix e = (horizon * aug).exp();
    out.push_back(e.topLeftCorner(n, n) * Vector::Ones(n) + e.topRightCorner(n, 1));
  }
  return out;
}

AssumptionAReport check_assumption_A(const DirichletForm& form,
                                     const Vector& mu_plus,
                                     AssumptionMethod method,
                                     int max_iterations) {
  const auto n = static_cast<Eigen::Index>(form.size());
  if (mu_plus.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "measure has wrong length");
  }
  AssumptionAReport report;
  if (method == AssumptionMethod::kSpectral) {
    // The killed generator restricted to a component is irreducible: its top
    // eigenvalue is 0 with constant eigenvector when nothing kills there, and
    // strictly negative otherwise, so the limit is 1 or 0 componentwise.
    const SparseMatrix a = form.stiffness(mu_plus);
    report.h_limit = Vector::Zero(n);
    for (std::size_t c = 0; c < form.component_count(); ++c) {
      std::vector<std::size_t> states;
      for (std::size_t x = 0; x < form.size(); ++x) {
        if (form.components()[x] == c) states.push_back(x);
      }
      const SparseMatrix block = extract_block(a, states, states);
      Vector mass(static_cast<Eigen::Index>(states.size()));
      for (std::size_t i = 0; i < states.size(); ++i) {
        mass[static_cast<Eigen::Index>(i)] =
            form.mass()[static_cast<Eigen::Index>(states[i])];
      }
      const SpectralResult bottom = smallest_generalized(block, mass);
      report.component_rates.push_back(bottom.lambda);
      const double scale = std::max(1.0, weighted_row_norm(block, mass));
      if (bottom.lambda <= kAssumptionTolerance * scale) {
        // h_limit = phi (phi, 1)_m on the zero eigenspace.
        const Vector& phi = bottom.minimizer;
        const double coeff = phi.dot(mass);
        for (std::size_t i = 0; i < states.size(); ++i) {
          report.h_limit[static_cast<Eigen::Index>(states[i])] =
              std::clamp(coeff * phi[static_cast<Eigen::Index>(i)], 0.0, 1.0);
        }
      }
    }
  } else {
    SchrodingerForm sf(form, SignedMeasure(mu_plus, Vector::Zero(n)));
    const SparseMatrix g = fk_generator(sf);
    double max_rate = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      max_rate = std::max(max_rate, std::abs(g.coeff(i, i)));
    }
    Vector v = Vector::Ones(n);
    if (max_rate > 0.0) {
      const double dt = 1.0 / max_rate;
      const Matrix step = n <= kDenseLimit ? fk_kernel(sf, dt) : Matrix();
      for (int it = 1; it <= max_iterations; ++it) {
        Vector next = n <= kDenseLimit ? Vector(step * v)
                                       : uniformization_apply(g, dt, v);
        if ((next.array() > v.array() + 1e-14).any()) report.monotone = false;
        const double change = (next - v).lpNorm<Eigen::Infinity>();
        v = next;
        report.iterations = it;
        if (change <= 1e-12) break;
      }
    }
    report.h_limit = v.cwiseMax(0.0).cwiseMin(1.0);
  }
  report.holds = report.h_limit.lpNorm<Eigen::Infinity>() <= kAssumptionTolerance;
  return report;
}

BoundaryTable boundary_class_diagnostic(const GridForm& grid_form,
                                        std::span<const std::size_t> states,
                                        std::span<const double> epsilons) {
  const DirichletForm& form = grid_form.form;
  if (form.killing().maxCoeff() <= 0.0) {
    throw Error(ErrorCode::kConservativeChain,
                "boundary diagnostic needs absorption somewhere");
  }
  const auto n = static_cast<Eigen::Index>(form.size());
  // (1 - L) w = k/m  <=>  (M + A) w = k.
  SparseMatrix shifted = form.stiffness();
  for (Eigen::Index x = 0; x < n; ++x) shifted.coeffRef(x, x) += form.mass()[x];
  Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalError, "resolvent factorization failed");
  }
  const Vector laplace = solver.solve(form.killing());

  SchrodingerForm sf(form, SignedMeasure(form.size()));
  std::vector<Vector> survival;
  for (double eps : epsilons) {
    if (!(eps >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
    }
    survival.push_back(fk_apply(sf, eps, Vector::Ones(n)));
  }

  BoundaryTable table;
  table.epsilons.assign(epsilons.begin(), epsilons.end());
  for (std::size_t x : states) {
    if (x >= form.size()) {
      throw Error(ErrorCode::kInvalidArgument, "state index out of range");
    }
    const auto i = static_cast<Eigen::Index>(x);
    BoundaryRow row;
    row.state = x;
    row.coordinate = x < grid_form.grid.nodes.size() ? grid_form.grid.nodes[x] : 0.0;
    row.laplace = laplace[i];
    for (const Vector& s : survival) row.survival.push_back(s[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace fkcrit
