// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "fkcrit/error.hpp"
#include "fkcrit/linalg.hpp"

namespace fkcrit {

namespace {

constexpr Eigen::Index kDenseLimit = 600;
constexpr int kMaxIterations = 10000;
constexpr double kIterationTol = 1e-12;

// Inverse iteration on A u = lambda B u over the states that matter, used when
// the support of mu- is too large for a dense reduced solve.
SpectralResult lambda_mu_iterative(const SparseMatrix& a, const Vector& minus,
                                   const std::vector<std::size_t>& support,
                                   const std::vector<std::size_t>& off) {
  std::vector<std::size_t> active(support);
  active.insert(active.end(), off.begin(), off.end());
  const SparseMatrix block = extract_block(a, active, active);
  const auto na = static_cast<Eigen::Index>(active.size());
  Vector weight(na);
  for (Eigen::Index i = 0; i < na; ++i) weight[i] = minus[active[i]];
  Eigen::SimplicialLDLT<SparseMatrix> solver(block);
  if (solver.info() != Eigen::Success || solver.vectorD().minCoeff() <= 0.0) {
    throw Error(ErrorCode::kSingularReduction,
                "E^{mu+} is singular on the support components");
  }
  SpectralResult out;
  out.normalization = Normalization::kNegativePart;
  Vector u = Vector::Ones(na);
  u /= std::sqrt(u.dot(weight.cwiseProduct(u)));
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= kMaxIterations; ++it) {
    Vector next = solver.solve(weight.cwiseProduct(u));
    next /= std::sqrt(next.dot(weight.cwiseProduct(next)));
    const double rq = next.dot(block * next);
    out.iterations = it;
    u = next;
    const bool done =
        std::abs(rq - previous) <= kIterationTol * (1.0 + std::abs(rq));
    previous = rq;
    if (done) break;
  }
  out.lambda = previous;
  out.minimizer = Vector::Zero(a.rows());
  for (Eigen::Index i = 0; i < na; ++i) out.minimizer[active[i]] = u[i];
  fix_sign(out.minimizer);
  out.residual =
      (a * out.minimizer - out.lambda * minus.cwiseProduct(out.minimizer))
          .lpNorm<Eigen::Infinity>();
  return out;
}

}  // namespace

// Smallest eigenpair of a u = nu diag(weight) u for symmetric a and positive
// weights. Dense for small problems, shifted inverse iteration otherwise.
SpectralResult smallest_generalized(const SparseMatrix& a, const Vector& weight) {
  const Eigen::Index n = a.rows();
  const Vector inv_sqrt = weight.cwiseSqrt().cwiseInverse();
  SpectralResult out;
  out.normalization = Normalization::kReferenceMass;
  if (n <= kDenseLimit) {
    Matrix c = inv_sqrt.asDiagonal() * Matrix(a) * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
    if (eig.info() != Eigen::Success) {
      throw Error(ErrorCode::kNumericalError, "symmetric eigensolver failed");
    }
    out.lambda = eig.eigenvalues()[0];
    out.minimizer = inv_sqrt.cwiseProduct(eig.eigenvectors().col(0));
  } else {
    // Gershgorin lower bound on the spectrum of M^{-1/2} A M^{-1/2}.
    double shift = std::numeric_limits<double>::infinity();
    Vector offsum = Vector::Zero(n);
    Vector diag = Vector::Zero(n);
    for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
        double scaled = it.value() * inv_sqrt[it.row()] * inv_sqrt[it.col()];
        if (it.row() == it.col()) {
          diag[it.row()] = scaled;
        } else {
          offsum[it.row()] += std::abs(scaled);
        }
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      shift = std::min(shift, diag[i] - offsum[i]);
    }
    shift -= 1e-3 * (1.0 + std::abs(shift));
    SparseMatrix shifted = a;
    for (Eigen::Index i = 0; i < n; ++i) {
      shifted.coeffRef(i, i) -= shift * weight[i];
    }
    Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::kNumericalError, "shifted factorization failed");
    }
    Vector u = Vector::Ones(n);
    u /= std::sqrt(u.dot(weight.cwiseProduct(u)));
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= kMaxIterations; ++it) {
      Vector next = solver.solve(weight.cwiseProduct(u));
      next /= std::sqrt(next.dot(weight.cwiseProduct(next)));
      const double rq = next.dot(a * next);
      out.iterations = it;
      u = next;
      if (std::abs(rq - previous) <= kIterationTol * (1.0 + std::abs(rq))) {
        previous = rq;
        break;
      }
      previous = rq;
    }
    out.lambda = previous;
    out.minimizer = u;
  }
  fix_sign(out.minimizer);
  out.residual =
      (a * out.minimizer - out.lambda * weight.cwiseProduct(out.minimizer))
          .lpNorm<Eigen::Infinity>();
  return out;
}

void fix_sign(Vector& v) {
  double sum = v.sum();
  double scale = std::max(1.0, v.lpNorm<Eigen::Infinity>());
  if (std::abs(sum) > 1e-12 * scale * static_cast<double>(v.size())) {
    if (sum < 0.0) v = -v;
    return;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

SchrodingerForm::SchrodingerForm(DirichletForm f, SignedMeasure m)
    : form(std::move(f)), mu(std::move(m)) {
  if (mu.size() != form.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "measure and form have different state counts");
  }
}

double SchrodingerForm::energy(const Vector& u) const {
  return form.energy(u) + u.cwiseAbs2().dot(mu.net());
}

double SchrodingerForm::positive_energy(const Vector& u) const {
  return form.energy(u) + u.cwiseAbs2().dot(mu.plus());
}

SparseMatrix SchrodingerForm::stiffness() const {
  return form.stiffness(mu.net());
}

SparseMatrix SchrodingerForm::positive_stiffness() const {
  return form.stiffness(mu.plus());
}

SpectralResult compute_lambda_mu(const SchrodingerForm& sf) {
  const DirichletForm& form = sf.form;
  const Vector& minus = sf.mu.minus();
  const Eigen::Index n = static_cast<Eigen::Index>(form.size());
  if (sf.mu.negative_part_empty()) {
    throw Error(ErrorCode::kEmptyNegativePart,
                "lambda(mu) needs a nontrivial negative part");
  }
  SpectralResult out;
  out.normalization = Normalization::kNegativePart;

  // Zero-energy constants already satisfy the constraint.
  if (form.recurrent() && sf.mu.positive_part_empty()) {
    out.lambda = 0.0;
    out.minimizer = Vector::Constant(n, 1.0 / std::sqrt(minus.sum()));
    out.residual = 0.0;
    return out;
  }

  std::vector<bool> touches(form.component_count(), false);
  for (Eigen::Index x = 0; x < n; ++x) {
    if (minus[x] > 0.0) touches[form.components()[x]] = true;
  }
  std::vector<std::size_t> support, off;
  for (Eigen::Index x = 0; x < n; ++x) {
    if (!touches[form.components()[x]]) continue;
    (minus[x] > 0.0 ? support : off).push_back(static_cast<std::size_t>(x));
  }

  const SparseMatrix a = sf.positive_stiffness();
  const auto ns = static_cast<Eigen::Index>(support.size());
  if (ns > kDenseLimit) {
    return lambda_mu_iterative(a, minus, support, off);
  }
  Matrix reduced = Matrix(extract_block(a, support, support));
  Matrix coupling;  // A_OO^{-1} A_OS
  if (!off.empty()) {
    const SparseMatrix a_oo = extract_block(a, off, off);
    const SparseMatrix a_os = extract_block(a, off, support);
    Eigen::SimplicialLDLT<SparseMatrix> solver(a_oo);
    if (solver.info() != Eigen::Success || solver.vectorD().minCoeff() <= 0.0) {
      throw Error(ErrorCode::kSingularReduction,
                  "off-support block of E^{mu+} is singular");
    }
    coupling = solver.solve(Matrix(a_os));
    reduced -= Matrix(a_os).transpose() * coupling;
  }

  Vector weight(ns);
  for (Eigen::Index i = 0; i < ns; ++i) weight[i] = minus[support[i]];
  const Vector inv_sqrt = weight.cwiseSqrt().cwiseInverse();
  Matrix c = inv_sqrt.asDiagonal() * reduced * inv_sqrt.asDiagonal();
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalError, "reduced eigensolver failed");
  }
  out.lambda = std::max(0.0, eig.eigenvalues()[0]);
  const Vector on_support = inv_sqrt.cwiseProduct(eig.eigenvectors().col(0));

  out.minimizer = Vector::Zero(n);
  for (Eigen::Index i = 0; i < ns; ++i) {
    out.minimizer[support[i]] = on_support[i];
  }
  if (!off.empty()) {
    const Vector on_off = -coupling * on_support;
    for (std::size_t i = 0; i < off.size(); ++i) {
      out.minimizer[off[i]] = on_off[static_cast<Eigen::Index>(i)];
    }
  }
  fix_sign(out.minimizer);
  out.residual = (a * out.minimizer - out.lambda * minus.cwiseProduct(out.minimizer))
                     .lpNorm<Eigen::Infinity>();
  return out;
}

SpectralResult compute_lambda0(const SchrodingerForm& sf) {
  return smallest_generalized(sf.stiffness(), sf.form.mass());
}

Vector harmonic_extension(const DirichletForm& form, const Vector& potential,
                          std::span<const std::size_t> boundary,
                          std::span<const double> values) {
  const std::size_t n = form.size();
  if (boundary.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "boundary set must be nonempty");
  }
  if (boundary.size() != values.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "boundary states and values differ in length");
  }
  std::vector<bool> fixed(n, false);
  Vector u = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    if (boundary[i] >= n) {
      throw Error(ErrorCode::kInvalidArgument, "boundary state out of range");
    }
    fixed[boundary[i]] = true;
    u[static_cast<Eigen::Index>(boundary[i])] = values[i];
  }
  std::vector<std::size_t> bnd, off;
  for (std::size_t x = 0; x < n; ++x) (fixed[x] ? bnd : off).push_back(x);
  if (off.empty()) return u;

  const SparseMatrix a = form.stiffness(potential);
  const SparseMatrix a_oo = extract_block(a, off, off);
  const SparseMatrix a_ob = extract_block(a, off, bnd);
  Vector ub(static_cast<Eigen::Index>(bnd.size()));
  for (std::size_t i = 0; i < bnd.size(); ++i) {
    ub[static_cast<Eigen::Index>(i)] = u[static_cast<Eigen::Index>(bnd[i])];
  }
  Eigen::SimplicialLDLT<SparseMatrix> solver(a_oo);
  if (solver.info() != Eigen::Success || solver.vectorD().minCoeff() <= 0.0) {
    throw Error(ErrorCode::kSingularReduction,
                "off-boundary block is singular: a component is neither "
                "killed nor connected to the boundary");
  }
  const Vector uo = solver.solve(-(a_ob * ub));
  for (std::size_t i = 0; i < off.size(); ++i) {
    u[static_cast<Eigen::Index>(off[i])] = uo[static_cast<Eigen::Index>(i)];
  }
  return u;
}

Vector ground_state_time_changed(const SchrodingerForm& sf) {
  return ground_state_time_changed(sf, compute_lambda_mu(sf));
}

Vector ground_state_time_changed(const SchrodingerForm& sf,
                                 const SpectralResult& lambda_mu) {
  if (!(lambda_mu.lambda > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "time-changed ground state needs lambda(mu) > 0");
  }
  Vector h = lambda_mu.minimizer;
  const double norm = lambda_mu.lambda * h.cwiseAbs2().dot(sf.mu.minus());
  return h / std::sqrt(norm);
}

double poincare_constant(const SchrodingerForm& sf) {
  const SpectralResult r =
      smallest_generalized(sf.positive_stiffness(), sf.form.mass());
  const double scale = std::max(
      1.0, weighted_row_norm(sf.positive_stiffness(), sf.form.mass()));
  if (r.lambda <= 1e-13 * scale) return std::numeric_limits<double>::infinity();
  return 1.0 / r.lambda;
}

}  // namespace fkcrit
