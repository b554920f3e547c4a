// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "fkcrit/error.hpp"
#include "fkcrit/measures.hpp"

namespace fkcrit {

RemarkProblem make_remark_problem(double alpha, double beta, double half_width,
                                  double h) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "atom weights alpha and beta must be positive");
  }
  if (!(half_width > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "half width must exceed 1");
  }
  const double marked[] = {-1.0, 1.0};
  GridForm gf = build_grid_form(-half_width, half_width, h, Boundary::kFree,
                                Boundary::kFree, marked);
  SignedMeasure mu = atom(gf.grid, -1.0, alpha) - atom(gf.grid, 1.0, beta);
  const std::size_t left = *gf.grid.node_index(-1.0);
  const std::size_t right = *gf.grid.node_index(1.0);
  DirichletForm form = gf.form;
  return RemarkProblem{std::move(gf), SchrodingerForm(std::move(form), std::move(mu)),
                       left, right};
}

namespace closed_form {

double remark_lambda(double alpha, double beta) {
  return alpha / (beta * (4.0 * alpha + 1.0));
}

double remark_plateau(double alpha, double beta) {
  return 1.0 / (std::sqrt(beta) * (4.0 * alpha + 1.0));
}

double remark_critical_alpha(double beta) {
  if (!(beta > 0.0) || !(beta < 0.25)) {
    throw Error(ErrorCode::kInvalidArgument,
                "critical alpha exists only for 0 < beta < 1/4");
  }
  return beta / (1.0 - 4.0 * beta);
}

double sphere_lambda1(int dimension) {
  return 0.5 * static_cast<double>(dimension - 2);
}

double sphere_lambda2(int dimension) {
  const double nu = 0.5 * static_cast<double>(dimension) - 1.0;
  const double z = std::numbers::sqrt2;
  const double inner = std::cyl_bessel_i(nu + 1.0, z) / std::cyl_bessel_i(nu, z);
  const double outer = std::cyl_bessel_k(nu + 1.0, z) / std::cyl_bessel_k(nu, z);
  return 0.5 * z * (inner + outer);
}

double interval_exit_laplace(double x) {
  const double r = std::numbers::sqrt2;
  return std::cosh(r * (x - 0.5)) / std::cosh(r / 2.0);
}

double brownian_local_time_mean(double x, double a, double t) {
  const double d = std::abs(a - x);
  return std::sqrt(2.0 * t / std::numbers::pi) * std::exp(-d * d / (2.0 * t)) -
         d * std::erfc(d / std::sqrt(2.0 * t));
}

}  // namespace closed_form

}  // namespace fkcrit
