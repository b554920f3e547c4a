// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fkcrit/graph_form.hpp"

namespace fkcrit {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double objective = 0.0;
  Vector x;
  int pivots = 0;
};

/// Dense two-phase tableau simplex for
///
///   max c^T x  subject to  a x (<=, >=, =) b,  x >= 0.
///
/// Phase one runs once at construction; maximize() may then be called with
/// different objectives, each starting from the previous optimal basis.
/// Dantzig pricing, switching to Bland's rule after a run of degenerate
/// pivots.
class DenseSimplex {
 public:
  DenseSimplex(const Matrix& a, const Vector& b, std::span<const Relation> rel,
               double tolerance = 1e-9, int max_pivots = 50000);

  bool feasible() const noexcept { return feasible_; }
  LpSolution maximize(const Vector& c);

 private:
  bool pivot_loop(Eigen::Index objective_row, Eigen::Index usable_cols, int& pivots);
  void pivot(Eigen::Index row, Eigen::Index col);
  Vector primal() const;

  Eigen::Index n_vars_ = 0;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;  // structural + slack columns, artificials dropped
  // Rows 0..rows_-1 are constraints; row rows_ is the objective
  // (reduced costs, rhs in the last column).
  Matrix tableau_;
  std::vector<Eigen::Index> basis_;
  double tol_;
  int max_pivots_;
  bool feasible_ = false;
  bool limit_hit_ = false;
};

}  // namespace fkcrit
