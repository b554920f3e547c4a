// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit.h"

#include <algorithm>
#include <new>
#include <optional>
#include <string>

#include "fkcrit/error.hpp"
#include "fkcrit/experiments.hpp"
#include "fkcrit/measures.hpp"
#include "fkcrit/principles.hpp"
#include "fkcrit/semigroup.hpp"

using fkcrit::Error;
using fkcrit::ErrorCode;
using fkcrit::Vector;

struct fkc_form {
  fkcrit::DirichletForm form;
  std::optional<fkcrit::Grid1D> grid;
};

struct fkc_measure {
  fkcrit::SignedMeasure mu;
};

namespace {

thread_local std::string g_last_error;

template <class Body>
fkc_status guarded(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return FKC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<fkc_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FKC_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FKC_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

Eigen::Index states(const fkc_form* form) {
  return static_cast<Eigen::Index>(form->form.size());
}

void copy_out(const Vector& v, double* out) {
  if (out) std::copy(v.data(), v.data() + v.size(), out);
}

fkcrit::SchrodingerForm schrodinger(const fkc_form* form, const fkc_measure* mu) {
  require(form && mu, "null handle");
  require(mu->mu.size() == form->form.size(), "measure and form sizes differ");
  return fkcrit::SchrodingerForm(form->form, mu->mu);
}

fkcrit::Boundary boundary(int absorbing) {
  return absorbing ? fkcrit::Boundary::kAbsorbing : fkcrit::Boundary::kFree;
}

}  // namespace

extern "C" {

const char* fkc_version(void) { return FKCRIT_VERSION; }

const char* fkc_status_name(fkc_status status) {
  if (status == FKC_OK) return "Ok";
  if (status == FKC_INTERNAL_ERROR) return "InternalError";
  return fkcrit::error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
}

const char* fkc_last_error(void) { return g_last_error.c_str(); }

fkc_status fkc_form_create(size_t n, size_t n_edges, const size_t* from, const size_t* to,
                           const double* weight, const double* killing,
                           const double* mass, fkc_form** out) {
  return guarded([&] {
    require(out && mass && (n_edges == 0 || (from && to && weight)), "null argument");
    std::vector<fkcrit::Edge> edges(n_edges);
    for (size_t i = 0; i < n_edges; ++i) edges[i] = {from[i], to[i], weight[i]};
    const auto size = static_cast<Eigen::Index>(n);
    const Vector k = killing ? Vector(Eigen::Map<const Vector>(killing, size))
                             : Vector(Vector::Zero(size));
    const Vector m = Eigen::Map<const Vector>(mass, size);
    *out = new fkc_form{fkcrit::build_graph_form(n, edges, k, m), std::nullopt};
  });
}

fkc_status fkc_grid_form_create(double left, double right, double h, int left_absorbing,
                                int right_absorbing, const double* marked,
                                size_t n_marked, fkc_form** out) {
  return guarded([&] {
    require(out && (n_marked == 0 || marked), "null argument");
    fkcrit::GridForm gf = fkcrit::build_grid_form(
        left, right, h, boundary(left_absorbing), boundary(right_absorbing),
        std::span<const double>(marked, n_marked));
    *out = new fkc_form{std::move(gf.form), std::move(gf.grid)};
  });
}

fkc_status fkc_radial_form_create(int dimension, double r_max, double h, fkc_form** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    fkcrit::GridForm gf = fkcrit::build_radial_form(dimension, r_max, h);
    *out = new fkc_form{std::move(gf.form), std::move(gf.grid)};
  });
}

void fkc_form_destroy(fkc_form* form) { delete form; }

size_t fkc_form_size(const fkc_form* form) { return form ? form->form.size() : 0; }

fkc_status fkc_form_step(const fkc_form* form, double* step) {
  return guarded([&] {
    require(form && step, "null argument");
    require(form->grid.has_value(), "form has no grid");
    *step = form->grid->step;
  });
}

fkc_status fkc_form_node_index(const fkc_form* form, double x, size_t* index) {
  return guarded([&] {
    require(form && index, "null argument");
    require(form->grid.has_value(), "form has no grid");
    const auto node = form->grid->node_index(x);
    if (!node) throw Error(ErrorCode::kMarkedPointOffGrid, "location is not a grid node");
    *index = *node;
  });
}

fkc_status fkc_measure_create(const fkc_form* form, const double* plus,
                              const double* minus, fkc_measure** out) {
  return guarded([&] {
    require(form && out, "null argument");
    const Eigen::Index n = states(form);
    auto read = [&](const double* p) {
      return p ? Vector(Eigen::Map<const Vector>(p, n)) : Vector(Vector::Zero(n));
    };
    *out = new fkc_measure{fkcrit::SignedMeasure(read(plus), read(minus))};
  });
}

fkc_status fkc_measure_add_atom(fkc_measure* measure, const fkc_form* form,
                                double location, double weight, int sign) {
  return guarded([&] {
    require(measure && form, "null argument");
    require(form->grid.has_value(), "atoms need a grid form");
    require(sign != 0, "sign must be nonzero");
    require(measure->mu.size() == form->form.size(), "measure and form sizes differ");
    const fkcrit::SignedMeasure piece = fkcrit::atom(*form->grid, location, weight);
    measure->mu = sign > 0 ? measure->mu + piece : measure->mu - piece;
  });
}

void fkc_measure_destroy(fkc_measure* measure) { delete measure; }

fkc_status fkc_lambda_mu(const fkc_form* form, const fkc_measure* mu, double* lambda,
                         double* minimizer) {
  return guarded([&] {
    require(lambda != nullptr, "null argument");
    const fkcrit::SpectralResult r = fkcrit::compute_lambda_mu(schrodinger(form, mu));
    *lambda = r.lambda;
    copy_out(r.minimizer, minimizer);
  });
}

fkc_status fkc_lambda0(const fkc_form* form, const fkc_measure* mu, double* lambda0,
                       double* minimizer) {
  return guarded([&] {
    require(lambda0 != nullptr, "null argument");
    const fkcrit::SpectralResult r = fkcrit::compute_lambda0(schrodinger(form, mu));
    *lambda0 = r.lambda;
    copy_out(r.minimizer, minimizer);
  });
}

fkc_status fkc_gauge(const fkc_form* form, const fkc_measure* mu, double* spectral_radius,
                     int* gaugeable, double* gauge) {
  return guarded([&] {
    require(spectral_radius && gaugeable, "null argument");
    const fkcrit::SchrodingerForm sf = schrodinger(form, mu);
    const fkcrit::GaugeReport r =
        fkcrit::gauge_function(sf.form, sf.mu.plus(), sf.mu.minus());
    *spectral_radius = r.spectral_radius;
    *gaugeable = r.gaugeable ? 1 : 0;
    if (r.gaugeable) copy_out(r.gauge, gauge);
  });
}

fkc_status fkc_assumption_a(const fkc_form* form, const fkc_measure* mu, int* holds) {
  return guarded([&] {
    require(holds != nullptr, "null argument");
    const fkcrit::SchrodingerForm sf = schrodinger(form, mu);
    *holds = fkcrit::check_assumption_A(sf.form, sf.mu.plus()).holds ? 1 : 0;
  });
}

fkc_status fkc_check_mp(const fkc_form* form, const fkc_measure* mu, int* holds,
                        double* lp_optimum, double* witness) {
  return guarded([&] {
    require(holds != nullptr, "null argument");
    const fkcrit::PrincipleVerdict v = fkcrit::check_mp(schrodinger(form, mu));
    *holds = v.holds ? 1 : 0;
    if (lp_optimum) *lp_optimum = v.lp_optimum;
    if (v.witness) copy_out(*v.witness, witness);
  });
}

fkc_status fkc_check_liouville(const fkc_form* form, const fkc_measure* mu, int* holds,
                               double* scaled_singular_value, double* witness) {
  return guarded([&] {
    require(holds != nullptr, "null argument");
    const fkcrit::PrincipleVerdict v = fkcrit::check_liouville(schrodinger(form, mu));
    *holds = v.holds ? 1 : 0;
    if (scaled_singular_value) *scaled_singular_value = v.scaled_singular_value;
    if (v.witness) copy_out(*v.witness, witness);
  });
}

fkc_status fkc_fk_apply(const fkc_form* form, const fkc_measure* mu, double t,
                        const double* f, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    require(t >= 0.0, "time must be nonnegative");
    const Vector in = Eigen::Map<const Vector>(f, states(form));
    copy_out(fkcrit::fk_apply(schrodinger(form, mu), t, in), out);
  });
}

fkc_status fkc_experiment_run(const char* spec_text, const char* out_dir, unsigned threads,
                              int has_seed, uint64_t seed_override, int* exit_code) {
  std::string message;
  const fkc_status status = guarded([&] {
    require(spec_text && out_dir && exit_code, "null argument");
    fkcrit::RunOptions options;
    options.out_dir = out_dir;
    options.threads = std::max(1u, threads);
    if (has_seed) options.seed = seed_override;
    const fkcrit::RunOutcome r = fkcrit::run_experiments(spec_text, options);
    *exit_code = r.exit_code;
    message = r.message;
  });
  // A failed experiment is a result, not an API failure; its reason is
  // still reported through fkc_last_error().
  if (status == FKC_OK) g_last_error = message;
  return status;
}

}  // extern "C"
