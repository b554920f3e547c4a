// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference computations used as test oracles. They share no code with the
// library: matrices are assembled by hand from edge lists and every
// eigenproblem is solved densely on the full state space.
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Chain {
  std::size_t n = 0;
  std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
  Vec killing;
  Vec mass;
};

// Matrix of u -> sum_edges w (du)^2 + sum (k + potential) u^2.
inline Mat stiffness(const Chain& c, const Vec& potential) {
  const auto n = static_cast<Eigen::Index>(c.n);
  Mat a = Mat::Zero(n, n);
  for (const auto& [x, y, w] : c.edges) {
    const auto i = static_cast<Eigen::Index>(x);
    const auto j = static_cast<Eigen::Index>(y);
    a(i, i) += w;
    a(j, j) += w;
    a(i, j) -= w;
    a(j, i) -= w;
  }
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) += c.killing[i] + potential[i];
  return a;
}

// min u'Au / u'Bu over u with u'Bu > 0, B = diag(b) >= 0, A positive
// definite on {b = 0}. Solved by a dense Schur complement built from an
// explicit inverse.
inline double generalized_min(const Mat& a, const Vec& b) {
  std::vector<Eigen::Index> s, f;
  for (Eigen::Index i = 0; i < b.size(); ++i) (b[i] > 0 ? s : f).push_back(i);
  const auto ns = static_cast<Eigen::Index>(s.size());
  const auto nf = static_cast<Eigen::Index>(f.size());
  Mat ass(ns, ns), asf(ns, nf), aff(nf, nf);
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index j = 0; j < ns; ++j) ass(i, j) = a(s[i], s[j]);
    for (Eigen::Index j = 0; j < nf; ++j) asf(i, j) = a(s[i], f[j]);
  }
  for (Eigen::Index i = 0; i < nf; ++i) {
    for (Eigen::Index j = 0; j < nf; ++j) aff(i, j) = a(f[i], f[j]);
  }
  Mat r = ass;
  if (nf > 0) r -= asf * aff.inverse() * asf.transpose();
  Vec scale(ns);
  for (Eigen::Index i = 0; i < ns; ++i) scale[i] = 1.0 / std::sqrt(b[s[i]]);
  const Mat sym = scale.asDiagonal() * r * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (sym + sym.transpose()));
  return eig.eigenvalues()[0];
}

// Smallest eigenvalue of A u = lambda M u for diagonal M > 0.
inline double weighted_min(const Mat& a, const Vec& m) {
  const Vec s = m.cwiseSqrt().cwiseInverse();
  const Mat sym = s.asDiagonal() * a * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (sym + sym.transpose()));
  return eig.eigenvalues()[0];
}

// Largest eigenvalue modulus of a general square matrix.
inline double spectral_radius(const Mat& k) {
  Eigen::EigenSolver<Mat> eig(k);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

// exp(t G) f for the generator G = -M^{-1} A by full diagonalization of the
// symmetrized matrix.
inline Vec semigroup(const Mat& a, const Vec& m, double t, const Vec& f) {
  const Vec s = m.cwiseSqrt();
  const Vec si = s.cwiseInverse();
  const Mat sym = si.asDiagonal() * a * si.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (sym + sym.transpose()));
  const Vec decay = (-t * eig.eigenvalues().array()).exp().matrix();
  const Mat q = eig.eigenvectors();
  const Vec g = s.cwiseProduct(f);
  return si.cwiseProduct(q * decay.asDiagonal() * q.transpose() * g);
}

// Two-point example (u0 - u1)^2 + a u0^2 subject to b u1^2 = 1: the optimal
// u0 = u1/(1+a) gives lambda = a/(b(1+a)).
inline double two_state_lambda(double a, double b) { return a / (b * (1.0 + a)); }

// Point interactions on the line: u linear on [-1, 1], constant outside,
// balancing the kink at -1 against alpha u(-1).
inline double remark_lambda(double alpha, double beta) {
  return alpha / (beta * (4.0 * alpha + 1.0));
}
inline double remark_plateau(double alpha, double beta) {
  return 1.0 / (std::sqrt(beta) * (4.0 * alpha + 1.0));
}
inline double remark_critical_alpha(double beta) { return beta / (1.0 - 4.0 * beta); }

// Sphere in R^3: u = min(1, 1/r) gives (1/2) D = 2 pi, sigma mass 4 pi.
inline double sphere_lambda1_d3() { return 0.5; }
// Sphere in R^3 with (u, u)_m: sinh(sqrt2 r)/r inside, exp(-sqrt2 r)/r outside.
inline double sphere_lambda2_d3() {
  const double r = std::numbers::sqrt2;
  return 0.5 * r * (std::cosh(r) / std::sinh(r) + 1.0);
}

// E_x[exp(-zeta)] for Brownian motion killed on leaving (0, 1).
inline double exit_laplace(double x) {
  const double r = std::numbers::sqrt2;
  return std::cosh(r * (x - 0.5)) / std::cosh(r / 2.0);
}

// E_0[l^a_t] = int_0^t exp(-a^2/(2s)) / sqrt(2 pi s) ds, by composite Simpson
// in s = v^2 (removes the endpoint singularity).
inline double local_time_mean(double a, double t, int panels = 20000) {
  const double top = std::sqrt(t);
  const double hv = top / panels;
  auto integrand = [&](double v) {
    if (v == 0.0) return a == 0.0 ? 2.0 / std::sqrt(2.0 * std::numbers::pi) : 0.0;
    const double s = v * v;
    return 2.0 * v * std::exp(-a * a / (2.0 * s)) / std::sqrt(2.0 * std::numbers::pi * s);
  };
  double sum = integrand(0.0) + integrand(top);
  for (int i = 1; i < panels; ++i) sum += integrand(i * hv) * (i % 2 ? 4.0 : 2.0);
  return sum * hv / 3.0;
}

// h violates the maximum principle for A^mu = a_mu: sup h > 0 and, after
// scaling to max 1, -(a_mu h)/m >= -tol row-wise (h is sub-invariant).
inline bool is_mp_violation(const Mat& a_mu, const Vec& m, const Vec& h,
                            double tol = 1e-9) {
  if (h.size() != m.size() || !(h.maxCoeff() > 0.0)) return false;
  const Vec scaled = h / h.maxCoeff();
  const Vec lh = -(a_mu * scaled).cwiseQuotient(m);
  for (Eigen::Index x = 0; x < h.size(); ++x) {
    const double scale = a_mu.row(x).cwiseAbs().sum() / m[x];
    if (lh[x] < -tol * scale) return false;
  }
  return true;
}

}  // namespace oracle
