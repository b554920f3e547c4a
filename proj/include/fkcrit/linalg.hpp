// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fkcrit/graph_form.hpp"

namespace fkcrit {

/// Rows `rows` and columns `cols` of a sparse matrix, in the given order.
inline SparseMatrix extract_block(const SparseMatrix& a,
                                  std::span<const std::size_t> rows,
                                  std::span<const std::size_t> cols) {
  std::vector<Eigen::Index> row_pos(static_cast<std::size_t>(a.rows()), -1);
  std::vector<Eigen::Index> col_pos(static_cast<std::size_t>(a.cols()), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    row_pos[rows[i]] = static_cast<Eigen::Index>(i);
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    col_pos[cols[j]] = static_cast<Eigen::Index>(j);
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      Eigen::Index r = row_pos[static_cast<std::size_t>(it.row())];
      Eigen::Index c = col_pos[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) triplets.emplace_back(r, c, it.value());
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

/// Largest absolute row sum of M^{-1} A.
inline double weighted_row_norm(const SparseMatrix& a, const Vector& mass) {
  Vector sums = Vector::Zero(a.rows());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      sums[it.row()] += std::abs(it.value()) / mass[it.row()];
    }
  }
  return sums.size() ? sums.maxCoeff() : 0.0;
}

}  // namespace fkcrit
