// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit/principles.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fkcrit/error.hpp"
#include "fkcrit/measures.hpp"
#include "fkcrit/semigroup.hpp"
#include "fkcrit/simplex.hpp"

namespace fkcrit {

namespace {

constexpr Eigen::Index kDenseLiouvilleLimit = 2000;

struct MpOutcome {
  bool holds = true;
  std::optional<Vector> witness;
  std::string certificate;
  double lp_optimum = 0.0;
  double lambda = std::numeric_limits<double>::infinity();
  bool applicable = false;
};

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Shared core of check_mp and its mirror. With z = 1 - h the LP reads
//   min z(x*)  s.t.  A z >= A 1,  z >= 0,
// where A is the matrix of E^mu; h = 0 (z = 1) is always feasible.
MpOutcome decide_mp(const SchrodingerForm& sf) {
  MpOutcome out;
  out.applicable = check_assumption_A(sf.form, sf.mu.plus()).holds;
  std::optional<SpectralResult> lambda_mu;
  if (!sf.mu.negative_part_empty()) {
    lambda_mu = compute_lambda_mu(sf);
    out.lambda = lambda_mu->lambda;
  }

  const Matrix a = Matrix(sf.stiffness());
  const auto n = a.rows();
  const Vector b = a * Vector::Ones(n);
  const std::vector<Relation> rel(static_cast<std::size_t>(n), Relation::kGreaterEqual);
  DenseSimplex lp(a, b, rel, kPrincipleTolerance);
  if (!lp.feasible()) {
    throw Error(ErrorCode::kLpSolverFailure,
                "phase one failed although h = 0 is feasible");
  }
  double best = -std::numeric_limits<double>::infinity();
  Vector best_h;
  for (Eigen::Index peak = 0; peak < n; ++peak) {
    Vector c = Vector::Zero(n);
    c[peak] = -1.0;
    const LpSolution sol = lp.maximize(c);
    if (sol.status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kLpSolverFailure,
                  sol.status == LpStatus::kIterationLimit
                      ? "maximum-principle LP hit the pivot limit"
                      : "maximum-principle LP reported unbounded objective");
    }
    const double s = 1.0 + sol.objective;
    if (s > best) {
      best = s;
      best_h = Vector::Ones(n) - sol.x;
    }
    if (best >= 1.0 - 1e-12) break;  // h <= 1 caps the optimum
  }
  out.lp_optimum = best;

  if (best > kPrincipleTolerance) {
    if (!verify_mp_witness(sf, best_h)) {
      throw Error(ErrorCode::kLpSolverFailure,
                  "LP witness failed direct verification");
    }
    out.holds = false;
    out.witness = best_h / best_h.maxCoeff();
    out.certificate = "LP optimum " + format_value(best) + " > tol";
    return out;
  }
  // At lambda(mu) <= 1 the time-changed ground state h has
  // A^mu h = (lambda - 1) B h <= 0; it is the witness the LP may miss when
  // the violating cone is numerically flat.
  if (lambda_mu && lambda_mu->lambda <= 1.0 + kPrincipleTolerance) {
    Vector h = lambda_mu->minimizer;
    if (verify_mp_witness(sf, h)) {
      out.holds = false;
      out.witness = h / h.maxCoeff();
      out.certificate = "ground-state construction at lambda(mu) = " +
                        format_value(lambda_mu->lambda);
      return out;
    }
  }
  out.holds = true;
  out.certificate = "LP optimum " + format_value(best) + " <= tol";
  return out;
}

}  // namespace

const char* property_name(Property p) noexcept {
  switch (p) {
    case Property::kMaximumPrinciple: return "MP";
    case Property::kLiouville: return "L";
    case Property::kAssumptionA: return "A";
    case Property::kBoundedBelowDual: return "MP-dual";
  }
  return "?";
}

bool verify_mp_witness(const SchrodingerForm& sf, const Vector& h, double tol) {
  if (static_cast<std::size_t>(h.size()) != sf.form.size()) return false;
  const double peak = h.maxCoeff();
  if (!(peak > 0.0) || !std::isfinite(peak)) return false;
  const Vector scaled = h / peak;
  const SparseMatrix a = sf.stiffness();
  const Vector ah = a * scaled;
  // Row scale sum_y |A(x,y)|: A h <= tol * scale  <=>  (L - mu/m) h >= -tol * scale/m.
  Vector scale = Vector::Zero(a.rows());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      scale[it.row()] += std::abs(it.value());
    }
  }
  for (Eigen::Index x = 0; x < ah.size(); ++x) {
    if (ah[x] > tol * std::max(scale[x], 1e-300)) return false;
  }
  return true;
}

PrincipleVerdict check_mp(const SchrodingerForm& sf) {
  MpOutcome o = decide_mp(sf);
  PrincipleVerdict v;
  v.property = Property::kMaximumPrinciple;
  v.holds = o.holds;
  v.witness = std::move(o.witness);
  v.certificate = std::move(o.certificate);
  v.lambda_context = o.lambda;
  v.theorem_applicable = o.applicable;
  v.lp_optimum = o.lp_optimum;
  if (!o.applicable) v.certificate += "; assumption (A) fails, theorem inapplicable";
  return v;
}

PrincipleVerdict check_bounded_below_dual(const SchrodingerForm& sf) {
  // h >= -1, (L - mu/m) h <= 0, min h <= -s is the MP program in -h.
  MpOutcome o = decide_mp(sf);
  PrincipleVerdict v;
  v.property = Property::kBoundedBelowDual;
  v.holds = o.holds;
  if (o.witness) v.witness = -*o.witness;
  v.certificate = "mirrored " + o.certificate;
  v.lambda_context = o.lambda;
  v.theorem_applicable = o.applicable;
  v.lp_optimum = o.lp_optimum;
  return v;
}

PrincipleVerdict check_liouville(const SchrodingerForm& sf) {
  const auto n = static_cast<Eigen::Index>(sf.form.size());
  if (n > kDenseLiouvilleLimit) {
    throw Error(ErrorCode::kInvalidArgument,
                "Liouville check is dense; chain too large");
  }
  PrincipleVerdict v;
  v.property = Property::kLiouville;
  v.theorem_applicable = check_assumption_A(sf.form, sf.mu.plus()).holds;
  v.lambda_context = sf.mu.negative_part_empty()
                         ? std::numeric_limits<double>::infinity()
                         : compute_lambda_mu(sf).lambda;

  const Vector inv_root = sf.form.mass().cwiseSqrt().cwiseInverse();
  Matrix s = inv_root.asDiagonal() * Matrix(sf.stiffness()) * inv_root.asDiagonal();
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalError, "symmetric eigensolver failed");
  }
  const Vector abs_eig = eig.eigenvalues().cwiseAbs();
  Eigen::Index smallest = 0;
  abs_eig.minCoeff(&smallest);
  const double largest = abs_eig.maxCoeff();
  v.scaled_singular_value = largest > 0.0 ? abs_eig[smallest] / largest : 0.0;
  v.holds = v.scaled_singular_value > kPrincipleTolerance;
  if (v.holds) {
    v.certificate = "trivial kernel, scaled singular value " +
                    format_value(v.scaled_singular_value);
  } else {
    Vector h = inv_root.cwiseProduct(eig.eigenvectors().col(smallest));
    fix_sign(h);
    h /= h.lpNorm<Eigen::Infinity>();
    v.witness = std::move(h);
    v.certificate = "kernel vector, scaled singular value " +
                    format_value(v.scaled_singular_value);
  }
  if (!v.theorem_applicable) v.certificate += "; assumption (A) fails";
  return v;
}

SphereReport sphere_experiment(int dimension, double gamma, double r_max,
                                     double h) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must be positive");
  }
  GridForm gf = build_radial_form(dimension, r_max, h, RadialOuter::kExterior);
  const double area = unit_sphere_area(dimension);
  const SignedMeasure sigma = atom(gf.grid, 1.0, area);
  const auto n = static_cast<Eigen::Index>(gf.form.size());
  const Vector zero = Vector::Zero(n);
  const Vector lebesgue = gf.form.mass();

  SphereReport report;
  report.step = gf.grid.step;
  report.lambda1 =
      compute_lambda_mu(SchrodingerForm(gf.form, SignedMeasure(zero, sigma.plus())))
          .lambda;
  report.lambda2 =
      compute_lambda_mu(SchrodingerForm(gf.form, SignedMeasure(lebesgue, sigma.plus())))
          .lambda;
  report.lambda_mu = compute_lambda_mu(SchrodingerForm(
                                           gf.form, SignedMeasure(lebesgue, gamma * sigma.plus())))
                         .lambda;
  report.gauge_rho_without_muplus =
      gauge_function(gf.form, zero, gamma * sigma.plus()).spectral_radius;
  return report;
}

}  // namespace fkcrit
