// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "fkcrit/graph_form.hpp"
#include "fkcrit/spectral.hpp"

namespace fkcrit {

/// (1/2) u'' - mu with mu = alpha delta_{-1} - beta delta_{1} on
/// [-half_width, half_width], free ends, nodes at +-1.
struct RemarkProblem {
  GridForm grid_form;
  SchrodingerForm sf;
  std::size_t left_atom = 0;   // node at -1
  std::size_t right_atom = 0;  // node at +1
};

RemarkProblem make_remark_problem(double alpha, double beta,
                                  double half_width = 5.0, double h = 0.05);

namespace closed_form {

/// alpha / (beta (4 alpha + 1)).
double remark_lambda(double alpha, double beta);
/// Plateau of the extremal left of -1: 1 / (sqrt(beta) (4 alpha + 1)).
double remark_plateau(double alpha, double beta);
/// Critical alpha_0 = beta / (1 - 4 beta), defined for beta < 1/4.
double remark_critical_alpha(double beta);

/// inf { (1/2) D(u,u) : int u^2 dsigma = 1 } on R^d, equal to (d-2)/2.
double sphere_lambda1(int dimension);
/// inf { (1/2) D(u,u) + (u,u) : int u^2 dsigma = 1 } on R^d, from matching
/// r^{-nu} I_nu(sqrt2 r) inside and r^{-nu} K_nu(sqrt2 r) outside, nu = d/2-1.
double sphere_lambda2(int dimension);

/// E_x[exp(-zeta)] for Brownian motion (generator u''/2) killed on exiting
/// (0, 1): cosh(sqrt2 (x - 1/2)) / cosh(sqrt2 / 2).
double interval_exit_laplace(double x);

/// E_x[l^a_t] for free Brownian motion: int_0^t p_s(x, a) ds with the
/// Gaussian kernel of variance s.
double brownian_local_time_mean(double x, double a, double t);

}  // namespace closed_form

}  // namespace fkcrit
