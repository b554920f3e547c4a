// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit/simplex.hpp"

#include <cmath>
#include <limits>

#include "fkcrit/error.hpp"

namespace fkcrit {

namespace {

constexpr int kDegenerateStreak = 50;

}  // namespace

DenseSimplex::DenseSimplex(const Matrix& a, const Vector& b,
                           std::span<const Relation> rel, double tolerance,
                           int max_pivots)
    : n_vars_(a.cols()), rows_(a.rows()), tol_(tolerance), max_pivots_(max_pivots) {
  if (b.size() != rows_ || static_cast<Eigen::Index>(rel.size()) != rows_) {
    throw Error(ErrorCode::kInvalidArgument, "LP dimensions disagree");
  }
  // Row scaling and sign normalization so that every rhs is >= 0.
  Matrix rows = a;
  Vector rhs = b;
  std::vector<Relation> relation(rel.begin(), rel.end());
  for (Eigen::Index i = 0; i < rows_; ++i) {
    double scale = rows.row(i).lpNorm<Eigen::Infinity>();
    if (scale > 0.0) {
      rows.row(i) /= scale;
      rhs[i] /= scale;
    }
    if (rhs[i] < 0.0) {
      rows.row(i) *= -1.0;
      rhs[i] = -rhs[i];
      if (relation[i] == Relation::kLessEqual) {
        relation[i] = Relation::kGreaterEqual;
      } else if (relation[i] == Relation::kGreaterEqual) {
        relation[i] = Relation::kLessEqual;
      }
    }
  }
  Eigen::Index slacks = 0, artificials = 0;
  for (Relation r : relation) {
    if (r != Relation::kEqual) ++slacks;
    if (r != Relation::kLessEqual) ++artificials;
  }
  cols_ = n_vars_ + slacks;
  const Eigen::Index total = cols_ + artificials;
  tableau_ = Matrix::Zero(rows_ + 1, total + 1);
  tableau_.topLeftCorner(rows_, n_vars_) = rows;
  tableau_.col(total).head(rows_) = rhs;
  basis_.assign(static_cast<std::size_t>(rows_), -1);

  Eigen::Index slack = n_vars_, art = cols_;
  std::vector<Eigen::Index> art_rows;
  for (Eigen::Index i = 0; i < rows_; ++i) {
    switch (relation[static_cast<std::size_t>(i)]) {
      case Relation::kLessEqual:
        tableau_(i, slack) = 1.0;
        basis_[static_cast<std::size_t>(i)] = slack++;
        break;
      case Relation::kGreaterEqual:
        tableau_(i, slack++) = -1.0;
        tableau_(i, art) = 1.0;
        basis_[static_cast<std::size_t>(i)] = art++;
        art_rows.push_back(i);
        break;
      case Relation::kEqual:
        tableau_(i, art) = 1.0;
        basis_[static_cast<std::size_t>(i)] = art++;
        art_rows.push_back(i);
        break;
    }
  }

  int pivots = 0;
  if (!art_rows.empty()) {
    // Phase one: maximize -sum(artificials).
    for (Eigen::Index i : art_rows) tableau_.row(rows_) -= tableau_.row(i);
    for (Eigen::Index j = cols_; j < total; ++j) tableau_(rows_, j) = 0.0;
    if (!pivot_loop(rows_, total, pivots)) {
      throw Error(ErrorCode::kLpSolverFailure,
                  limit_hit_ ? "phase one hit the pivot limit"
                             : "phase one reported an unbounded objective");
    }
    const double infeasibility = -tableau_(rows_, total);
    if (infeasibility > tol_ * (1.0 + rhs.lpNorm<Eigen::Infinity>())) {
      feasible_ = false;
      return;
    }
    // Drive artificials out of the basis; drop rows that are redundant.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] >= cols_) {
        Eigen::Index best = -1;
        double best_abs = tol_;
        for (Eigen::Index j = 0; j < cols_; ++j) {
          if (std::abs(tableau_(i, j)) > best_abs) {
            best_abs = std::abs(tableau_(i, j));
            best = j;
          }
        }
        if (best < 0) continue;
        pivot(i, best);
      }
      keep.push_back(i);
    }
    Matrix reduced(static_cast<Eigen::Index>(keep.size()) + 1, cols_ + 1);
    std::vector<Eigen::Index> basis;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      auto r = static_cast<Eigen::Index>(k);
      reduced.row(r).head(cols_) = tableau_.row(keep[k]).head(cols_);
      reduced(r, cols_) = tableau_(keep[k], total);
      basis.push_back(basis_[static_cast<std::size_t>(keep[k])]);
    }
    reduced.row(static_cast<Eigen::Index>(keep.size())).setZero();
    tableau_ = std::move(reduced);
    basis_ = std::move(basis);
    rows_ = static_cast<Eigen::Index>(keep.size());
  }
  feasible_ = true;
}

void DenseSimplex::pivot(Eigen::Index row, Eigen::Index col) {
  tableau_.row(row) /= tableau_(row, col);
  for (Eigen::Index i = 0; i < tableau_.rows(); ++i) {
    if (i == row) continue;
    const double factor = tableau_(i, col);
    if (factor != 0.0) tableau_.row(i) -= factor * tableau_.row(row);
  }
  basis_[static_cast<std::size_t>(row)] = col;
}

bool DenseSimplex::pivot_loop(Eigen::Index objective_row, Eigen::Index usable_cols,
                              int& pivots) {
  const Eigen::Index rhs = tableau_.cols() - 1;
  int degenerate = 0;
  while (true) {
    const bool bland = degenerate >= kDegenerateStreak;
    Eigen::Index enter = -1;
    double best = -tol_;
    for (Eigen::Index j = 0; j < usable_cols; ++j) {
      const double d = tableau_(objective_row, j);
      if (d < best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) return true;

    Eigen::Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double coeff = tableau_(i, enter);
      if (coeff <= tol_) continue;
      const double r = std::max(0.0, tableau_(i, rhs)) / coeff;
      if (r < ratio - 1e-12 ||
          (r <= ratio + 1e-12 && leave >= 0 &&
           basis_[static_cast<std::size_t>(i)] <
               basis_[static_cast<std::size_t>(leave)])) {
        ratio = std::min(ratio, r);
        leave = i;
      }
    }
    if (leave < 0) return false;
    degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
    pivot(leave, enter);
    if (++pivots > max_pivots_) {
      limit_hit_ = true;
      return false;
    }
  }
}

Vector DenseSimplex::primal() const {
  Vector x = Vector::Zero(n_vars_);
  const Eigen::Index rhs = tableau_.cols() - 1;
  for (Eigen::Index i = 0; i < rows_; ++i) {
    const Eigen::Index b = basis_[static_cast<std::size_t>(i)];
    if (b < n_vars_) x[b] = std::max(0.0, tableau_(i, rhs));
  }
  return x;
}

LpSolution DenseSimplex::maximize(const Vector& c) {
  LpSolution out;
  if (!feasible_) {
    out.status = LpStatus::kInfeasible;
    return out;
  }
  if (c.size() != n_vars_) {
    throw Error(ErrorCode::kInvalidArgument, "objective has wrong length");
  }
  tableau_.row(rows_).setZero();
  tableau_.row(rows_).head(n_vars_) = -c.transpose();
  for (Eigen::Index i = 0; i < rows_; ++i) {
    const Eigen::Index b = basis_[static_cast<std::size_t>(i)];
    const double cb = b < n_vars_ ? c[b] : 0.0;
    if (cb != 0.0) tableau_.row(rows_) += cb * tableau_.row(i);
  }
  limit_hit_ = false;
  int pivots = 0;
  const bool bounded = pivot_loop(rows_, cols_, pivots);
  out.pivots = pivots;
  if (!bounded) {
    out.status = limit_hit_ ? LpStatus::kIterationLimit : LpStatus::kUnbounded;
    return out;
  }
  out.x = primal();
  out.objective = c.dot(out.x);
  return out;
}

}  // namespace fkcrit
