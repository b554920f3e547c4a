// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit/measures.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "fkcrit/error.hpp"

namespace fkcrit {

namespace {

void require_nonnegative(const Vector& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
      std::ostringstream os;
      os << what << " must be finite and nonnegative (state " << i << ")";
      throw Error(ErrorCode::kNegativeDensity, os.str());
    }
  }
}

}  // namespace

SignedMeasure::SignedMeasure(std::size_t n)
    : plus_(Vector::Zero(static_cast<Eigen::Index>(n))),
      minus_(Vector::Zero(static_cast<Eigen::Index>(n))) {}

SignedMeasure::SignedMeasure(Vector plus, Vector minus,
                             std::vector<MeasureSource> provenance)
    : plus_(std::move(plus)),
      minus_(std::move(minus)),
      provenance_(std::move(provenance)) {
  if (plus_.size() != minus_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "positive and negative parts differ in length");
  }
  require_nonnegative(plus_, "positive part");
  require_nonnegative(minus_, "negative part");
}

SignedMeasure SignedMeasure::canonical() const {
  Vector common = plus_.cwiseMin(minus_);
  return SignedMeasure(plus_ - common, minus_ - common, provenance_);
}

SignedMeasure SignedMeasure::negated() const {
  std::vector<MeasureSource> prov = provenance_;
  for (auto& s : prov) s.sign = -s.sign;
  return SignedMeasure(minus_, plus_, std::move(prov));
}

SignedMeasure SignedMeasure::scaled_minus(double factor) const {
  if (!(factor > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "scale factor must be positive");
  }
  return SignedMeasure(plus_, factor * minus_, provenance_);
}

SignedMeasure SignedMeasure::operator+(const SignedMeasure& other) const {
  if (other.size() != size()) {
    throw Error(ErrorCode::kInvalidArgument, "measures differ in size");
  }
  std::vector<MeasureSource> prov = provenance_;
  prov.insert(prov.end(), other.provenance_.begin(), other.provenance_.end());
  return SignedMeasure(plus_ + other.plus_, minus_ + other.minus_,
                       std::move(prov));
}

SignedMeasure SignedMeasure::operator-(const SignedMeasure& other) const {
  return *this + other.negated();
}

SignedMeasure atom(const Grid1D& grid, double location, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::kInvalidArgument, "atom weight must be positive");
  }
  auto index = grid.node_index(location);
  if (!index) {
    std::ostringstream os;
    os << "atom location " << location << " is not a grid node";
    throw Error(ErrorCode::kMarkedPointOffGrid, os.str());
  }
  SignedMeasure zero(grid.nodes.size());
  Vector plus = zero.plus();
  plus[static_cast<Eigen::Index>(*index)] = weight;
  return SignedMeasure(std::move(plus), zero.minus(),
                       {{MeasureSource::Kind::kAtom, location, weight, 1}});
}

SignedMeasure density(const DirichletForm& form, const Vector& values) {
  if (static_cast<std::size_t>(values.size()) != form.size()) {
    throw Error(ErrorCode::kInvalidArgument, "density has wrong length");
  }
  require_nonnegative(values, "density");
  return SignedMeasure(values.cwiseProduct(form.mass()),
                       Vector::Zero(values.size()),
                       {{MeasureSource::Kind::kDensity, 0.0, 0.0, 1}});
}

SignedMeasure density(const DirichletForm& form, const Grid1D& grid,
                      const std::function<double(double)>& value) {
  Vector values(static_cast<Eigen::Index>(grid.nodes.size()));
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    values[static_cast<Eigen::Index>(i)] = value(grid.nodes[i]);
  }
  return density(form, values);
}

std::vector<double> kato_diagnostic(const DirichletForm& form,
                                    const Vector& measure_part,
                                    std::span<const double> alphas) {
  require_nonnegative(measure_part, "measure part");
  const SparseMatrix a = form.stiffness();
  std::vector<double> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    if (!(alpha > 0.0)) {
      throw Error(ErrorCode::kSingularResolvent,
                  "resolvent needs alpha > 0");
    }
    // (alpha - L) v = mu / m  <=>  (alpha M + A) v = mu
    SparseMatrix shifted = a;
    for (Eigen::Index i = 0; i < shifted.rows(); ++i) {
      shifted.coeffRef(i, i) += alpha * form.mass()[i];
    }
    Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::kSingularResolvent, "resolvent factorization failed");
    }
    Vector v = solver.solve(measure_part);
    out.push_back(v.size() ? v.maxCoeff() : 0.0);
  }
  return out;
}

std::vector<double> green_tight_diagnostic(
    const DirichletForm& form, const Vector& measure_part,
    std::span<const std::vector<std::size_t>> compact_sequence) {
  require_nonnegative(measure_part, "measure part");
  if (!form.transient()) {
    throw Error(ErrorCode::kRecurrentForm,
                "Green kernel needs killing on every component");
  }
  Eigen::SimplicialLDLT<SparseMatrix> solver(form.stiffness());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kRecurrentForm, "Green operator factorization failed");
  }
  std::vector<double> out;
  out.reserve(compact_sequence.size());
  for (const auto& set : compact_sequence) {
    Vector tail = measure_part;
    for (std::size_t x : set) {
      if (x >= form.size()) {
        throw Error(ErrorCode::kInvalidArgument, "compact set index out of range");
      }
      tail[static_cast<Eigen::Index>(x)] = 0.0;
    }
    if (tail.maxCoeff() <= 0.0) {
      out.push_back(0.0);
      continue;
    }
    Vector v = solver.solve(tail);
    out.push_back(v.maxCoeff());
  }
  return out;
}

}  // namespace fkcrit
