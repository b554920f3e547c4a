// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "fkcrit/error.hpp"
#include "fkcrit/measures.hpp"
#include "fkcrit/montecarlo.hpp"
#include "fkcrit/principles.hpp"
#include "fkcrit/random_instances.hpp"
#include "fkcrit/scenarios.hpp"
#include "fkcrit/semigroup.hpp"

namespace fkcrit {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(bool v) { return v ? "1" : "0"; }
std::string fmt(std::size_t v) { return std::to_string(v); }

// Accumulates preamble, header and rows for one CSV file. Metadata may be
// added after rows; text() always puts the preamble first.
class Csv {
 public:
  void meta(const std::string& key, const std::string& value) {
    preamble_ += "# " + key + " = " + value + "\n";
  }
  void meta(const std::string& key, double value) { meta(key, fmt(value)); }
  void header(std::vector<std::string> columns) { header_ = std::move(columns); }
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) {
      throw Error(ErrorCode::kNumericalError, "internal: CSV row width mismatch");
    }
    rows_ += join(cells) + "\n";
  }
  std::string text() const { return preamble_ + join(header_) + "\n" + rows_; }

 private:
  static std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    return out;
  }
  std::string preamble_;
  std::vector<std::string> header_;
  std::string rows_;
};

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

// Pairs two parameter lists elementwise, broadcasting a single value.
std::vector<std::pair<double, double>> zip(const std::vector<double>& a,
                                           const std::vector<double>& b,
                                           const char* what) {
  if (a.size() != b.size() && a.size() != 1 && b.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " lists must have equal length or length 1");
  }
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.emplace_back(a[a.size() == 1 ? 0 : i], b[b.size() == 1 ? 0 : i]);
  }
  return out;
}

double sup_norm(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

void remark_example(const ExperimentSpec& spec, Csv& csv) {
  const double h = spec.number("h", 0.05);
  const double half_width = spec.number("half_width", 5.0);
  const auto pairs = zip(spec.list("alpha", {1.0}), spec.list("beta", {0.1}), "alpha/beta");
  csv.meta("h_requested", h);
  csv.meta("half_width", half_width);
  csv.meta("boundary", "free,free");
  csv.meta("principle_tolerance", kPrincipleTolerance);
  csv.header({"alpha", "beta", "h_adjusted", "lambda_numeric", "lambda_closed",
              "lambda_rel_error", "gamma_numeric", "gamma_closed", "gamma_abs_error",
              "lambda0", "gauge_rho", "gaugeable", "mp_holds", "liouville_holds"});
  for (const auto& [alpha, beta] : pairs) {
    const RemarkProblem p = make_remark_problem(alpha, beta, half_width, h);
    const double lambda = compute_lambda_mu(p.sf).lambda;
    const double closed = closed_form::remark_lambda(alpha, beta);
    const std::size_t boundary[] = {p.right_atom};
    const double values[] = {1.0 / std::sqrt(beta)};
    const Vector u = harmonic_extension(p.sf.form, p.sf.mu.plus(), boundary, values);
    const double gamma = u[0];  // leftmost node, on the plateau
    const double gamma_closed = closed_form::remark_plateau(alpha, beta);
    const double lambda0 = compute_lambda0(p.sf).lambda;
    const GaugeReport gauge = gauge_function(p.sf.form, p.sf.mu.plus(), p.sf.mu.minus());
    csv.row({fmt(alpha), fmt(beta), fmt(p.grid_form.grid.step), fmt(lambda), fmt(closed),
             fmt(std::abs(lambda - closed) / closed), fmt(gamma), fmt(gamma_closed),
             fmt(std::abs(gamma - gamma_closed)), fmt(lambda0),
             fmt(gauge.spectral_radius), fmt(gauge.gaugeable),
             fmt(check_mp(p.sf).holds), fmt(check_liouville(p.sf).holds)});
  }
}

void threshold_scan(const ExperimentSpec& spec, Csv& csv) {
  const double h = spec.number("h", 0.05);
  const double half_width = spec.number("half_width", 5.0);
  const auto betas = spec.list("beta", {0.05, 0.1, 0.2});
  const auto factors = spec.list("alpha_factors", {1.0});
  const auto times = spec.list("times", {0.1, 1.0, 10.0});
  csv.meta("h_requested", h);
  csv.meta("half_width", half_width);
  csv.meta("alpha", "alpha_factor * beta / (1 - 4 beta)");
  std::vector<std::string> header = {"beta", "alpha_factor", "alpha", "h_adjusted",
                                     "lambda_numeric", "lambda_closed"};
  for (double t : times) header.push_back("invariance_residual_t" + fmt(t));
  header.insert(header.end(), {"mp_holds", "liouville_holds"});
  csv.header(header);
  for (double beta : betas) {
    for (double factor : factors) {
      const double alpha = factor * closed_form::remark_critical_alpha(beta);
      const RemarkProblem p = make_remark_problem(alpha, beta, half_width, h);
      const SpectralResult lambda = compute_lambda_mu(p.sf);
      const Vector g = ground_state_time_changed(p.sf, lambda);
      std::vector<std::string> row = {fmt(beta), fmt(factor), fmt(alpha),
                                      fmt(p.grid_form.grid.step), fmt(lambda.lambda),
                                      fmt(closed_form::remark_lambda(alpha, beta))};
      for (double t : times) {
        row.push_back(fmt(sup_norm(fk_apply(p.sf, t, g) - g) / sup_norm(g)));
      }
      row.push_back(fmt(check_mp(p.sf).holds));
      row.push_back(fmt(check_liouville(p.sf).holds));
      csv.row(row);
    }
  }
}

void sphere_example(const ExperimentSpec& spec, Csv& csv) {
  const int d = static_cast<int>(spec.number("dimension", 3));
  const double r_max = spec.number("r_max", 40.0);
  const double h = spec.number("h", 0.01);
  csv.meta("dimension", std::to_string(d));
  csv.meta("r_max", r_max);
  csv.meta("h_requested", h);
  csv.meta("outer_boundary", "exterior harmonic closure");
  csv.header({"dimension", "gamma", "r_max", "h_adjusted", "lambda1", "lambda1_closed",
              "lambda2", "lambda2_closed", "lambda_mu", "lambda2_over_gamma",
              "gauge_rho_without_muplus", "gaugeable_without_muplus"});
  for (double gamma : spec.list("gamma", {1.0})) {
    const SphereReport r = sphere_experiment(d, gamma, r_max, h);
    csv.row({std::to_string(d), fmt(gamma), fmt(r_max), fmt(r.step), fmt(r.lambda1),
             fmt(closed_form::sphere_lambda1(d)), fmt(r.lambda2),
             fmt(closed_form::sphere_lambda2(d)), fmt(r.lambda_mu),
             fmt(r.lambda2 / gamma), fmt(r.gauge_rho_without_muplus),
             fmt(r.gauge_rho_without_muplus < 1.0 - kGaugeTolerance)});
  }
}

void random_suite(const ExperimentSpec& spec, std::uint64_t seed, Csv& csv) {
  RandomSuiteOptions options;
  options.min_states = static_cast<std::size_t>(spec.number("min_states", 2));
  options.max_states = static_cast<std::size_t>(spec.number("max_states", 10));
  options.lambda_min = spec.number("lambda_min", 0.25);
  options.lambda_max = spec.number("lambda_max", 4.0);
  const auto count = static_cast<std::size_t>(spec.number("count", 500));
  const auto critical = static_cast<std::size_t>(spec.number("critical_count", 0));
  std::size_t agree = 0, applicable = 0, product_ok = 0;

  csv.header({"index", "states", "critical", "lambda_mu", "lambda0", "gauge_rho",
               "lambda_times_rho", "assumption_a", "mp_holds", "lambda_gt_1",
               "verdicts_agree", "witness_verified", "liouville_holds",
               "scaled_singular_value", "poincare_c", "lemma_forward", "lemma_converse"});
  for (std::size_t i = 0; i < count + critical; ++i) {
    RandomSuiteOptions o = options;
    o.critical = i >= count;
    const RandomInstance inst = random_instance(seed, i, o);
    const SchrodingerForm& sf = inst.sf;
    const double lambda = compute_lambda_mu(sf).lambda;
    const double lambda0 = compute_lambda0(sf).lambda;
    const GaugeReport gauge = gauge_function(sf.form, sf.mu.plus(), sf.mu.minus());
    const PrincipleVerdict mp = check_mp(sf);
    const PrincipleVerdict lv = check_liouville(sf);
    const bool gt1 = lambda > 1.0 + kPrincipleTolerance;
    const bool witness_ok = !mp.witness || verify_mp_witness(sf, *mp.witness);
    const double c = poincare_constant(sf);
    const bool forward = !(lambda0 > 0.0) || lambda > 1.0;
    const bool converse = !(gt1 && std::isfinite(c)) ||
                          lambda0 >= (lambda - 1.0) / (c * lambda) - 1e-9;
    if (mp.theorem_applicable) {
      ++applicable;
      if (mp.holds == gt1) ++agree;
    }
    const double product = lambda * gauge.spectral_radius;
    if (std::abs(product - 1.0) <= 1e-8) ++product_ok;
    csv.row({fmt(i), fmt(sf.form.size()), fmt(o.critical), fmt(lambda), fmt(lambda0),
              fmt(gauge.spectral_radius), fmt(product), fmt(mp.theorem_applicable),
              fmt(mp.holds), fmt(gt1), fmt(mp.holds == gt1), fmt(witness_ok),
              fmt(lv.holds), fmt(lv.scaled_singular_value), fmt(c), fmt(forward),
              fmt(converse)});
  }
  csv.meta("count", std::to_string(count));
  csv.meta("critical_count", std::to_string(critical));
  csv.meta("states", std::to_string(options.min_states) + ".." +
                         std::to_string(options.max_states));
  csv.meta("lambda_range", list_text({options.lambda_min, options.lambda_max}));
  csv.meta("mp_agreement", std::to_string(agree) + "/" + std::to_string(applicable));
  csv.meta("duality_within_1e-8", std::to_string(product_ok) + "/" +
                                      std::to_string(count + critical));
  csv.meta("principle_tolerance", kPrincipleTolerance);
}

void mc_validation(const ExperimentSpec& spec, std::uint64_t seed, unsigned threads,
                   Csv& csv) {
  const double beta = spec.number("beta", 0.1);
  const double alpha = spec.number("alpha", closed_form::remark_critical_alpha(beta));
  const double half_width = spec.number("half_width", 5.0);
  const double chain_h = spec.number("chain_h", 0.05);
  const double t = spec.number("time", 1.0);
  const double x0 = spec.number("x0", 0.0);
  const double point = spec.number("local_point", 1.0);
  const auto paths = static_cast<std::size_t>(spec.number("paths", 100000));
  const auto horizons = spec.list("horizons", {});

  ContinuumProblem1D problem;
  problem.left = -half_width;
  problem.right = half_width;
  problem.delta = spec.number("delta", 2.5e-5);
  problem.epsilon = spec.number("epsilon", 0.01);
  problem.atoms = {{-1.0, alpha, 1}, {1.0, beta, -1}};
  const MatchedChain chain = discretize(problem, chain_h);
  const Grid1D& grid = chain.grid_form.grid;

  csv.meta("alpha", alpha);
  csv.meta("beta", beta);
  csv.meta("domain", list_text({problem.left, problem.right}) + " reflecting");
  csv.meta("chain_h_requested", chain_h);
  csv.meta("chain_h_adjusted", grid.step);
  csv.meta("x0", x0);
  csv.meta("time", t);
  csv.meta("test_function", "chain ground state of the time-changed problem");
  csv.header({"quantity", "estimate", "stderr", "exact", "z_score", "n_paths", "delta",
              "epsilon"});
  auto emit = [&](const std::string& name, const PathEstimate& e, double exact) {
    const double z = e.std_error > 0.0 ? (e.value - exact) / e.std_error
                                       : (e.value == exact ? 0.0 : INFINITY);
    csv.row({name, fmt(e.value), fmt(e.std_error), fmt(exact), fmt(z), fmt(e.n_paths),
             fmt(e.delta), fmt(e.epsilon)});
  };

  const Vector g = ground_state_time_changed(chain.sf);
  const Vector exact_fk = fk_apply(chain.sf, t, g);
  const auto f = [&](double x) { return grid.interpolate(g, x); };
  const FkAndLocalTime both =
      simulate_fk_and_local_time(problem, x0, t, f, point, paths, seed, threads);
  emit("fk_ground_state", both.fk, grid.interpolate(exact_fk, x0));
  emit("local_time", both.local_time, closed_form::brownian_local_time_mean(x0, point, t));
  if (!horizons.empty()) {
    const auto exact = truncated_gauge(chain.sf.form, chain.sf.mu.plus(),
                                       chain.sf.mu.minus(), horizons);
    const auto ladder = estimate_gauge(problem, x0, horizons, paths, seed, threads);
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      emit("gauge_T" + fmt(horizons[i]), ladder[i], grid.interpolate(exact[i], x0));
    }
  }
}

void boundary_diag(const ExperimentSpec& spec, Csv& csv) {
  const double h = spec.number("h", 1e-3);
  const auto epsilons = spec.list("epsilons", {0.01, 0.05, 0.1});
  const auto points = spec.list("points", {0.5, 0.25, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001});
  GridForm gf = build_grid_form(0.0, 1.0, h, Boundary::kAbsorbing, Boundary::kAbsorbing,
                                points);
  std::vector<std::size_t> states;
  for (double x : points) {
    const auto node = gf.grid.node_index(x);
    if (!node) throw Error(ErrorCode::kMarkedPointOffGrid, "point is not a node");
    states.push_back(*node);
  }
  const BoundaryTable table = boundary_class_diagnostic(gf, states, epsilons);
  csv.meta("h_requested", h);
  csv.meta("h_adjusted", gf.grid.step);
  csv.meta("domain", "(0,1) absorbing");
  std::vector<std::string> header = {"x", "laplace_numeric", "laplace_closed",
                                     "laplace_abs_error"};
  for (double e : epsilons) header.push_back("survival_eps" + fmt(e));
  csv.header(header);
  for (const BoundaryRow& r : table.rows) {
    const double closed = closed_form::interval_exit_laplace(r.coordinate);
    std::vector<std::string> row = {fmt(r.coordinate), fmt(r.laplace), fmt(closed),
                                    fmt(std::abs(r.laplace - closed))};
    for (double s : r.survival) row.push_back(fmt(s));
    csv.row(row);
  }
}

void custom_chain(const ExperimentSpec& spec, Csv& csv) {
  const auto n = static_cast<std::size_t>(spec.number("states", 1));
  const auto n_index = static_cast<Eigen::Index>(n);
  auto vector_of = [&](const char* key, bool required) {
    const auto v = spec.list(key, {});
    if (v.empty() && !required) return Vector(Vector::Zero(n_index));
    if (v.size() != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(key) + " must have one entry per state");
    }
    return Vector(Eigen::Map<const Vector>(v.data(), n_index));
  };
  std::vector<Edge> edges;
  const auto flat = spec.list("edges", {});
  for (std::size_t i = 0; i + 2 < flat.size(); i += 3) {
    if (flat[i] != std::floor(flat[i]) || flat[i + 1] != std::floor(flat[i + 1]) ||
        flat[i] >= static_cast<double>(n) || flat[i + 1] >= static_cast<double>(n)) {
      throw Error(ErrorCode::kInvalidArgument, "edge endpoints must be state indices");
    }
    edges.push_back({static_cast<std::size_t>(flat[i]), static_cast<std::size_t>(flat[i + 1]),
                     flat[i + 2]});
  }
  DirichletForm form = build_graph_form(n, edges, vector_of("killing", false),
                                        vector_of("mass", true));
  const SchrodingerForm sf(form, SignedMeasure(vector_of("mu_plus", false),
                                               vector_of("mu_minus", true)));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  csv.meta("states", std::to_string(n));
  csv.meta("irreducible", fmt(form.irreducible()));
  csv.meta("transient", fmt(form.transient()));
  if (!form.irreducible()) {
    csv.meta("note", "reducible chain; theorem applicability is not claimed");
  }
  csv.header({"quantity", "value"});
  const double lambda = compute_lambda_mu(sf).lambda;
  csv.row({"lambda_mu", fmt(lambda)});
  csv.row({"lambda0", fmt(compute_lambda0(sf).lambda)});
  double rho = nan, sup_gauge = nan;
  try {
    const GaugeReport gauge = gauge_function(form, sf.mu.plus(), sf.mu.minus());
    rho = gauge.spectral_radius;
    sup_gauge = gauge.gaugeable ? gauge.sup_gauge : INFINITY;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kRecurrentPositivePart) throw;
  }
  csv.row({"gauge_rho", fmt(rho)});
  csv.row({"sup_gauge", fmt(sup_gauge)});
  const AssumptionAReport a = check_assumption_A(form, sf.mu.plus());
  csv.row({"assumption_a", fmt(a.holds)});
  const PrincipleVerdict mp = check_mp(sf);
  csv.row({"mp_holds", fmt(mp.holds)});
  csv.row({"mp_lp_optimum", fmt(mp.lp_optimum)});
  const PrincipleVerdict lv = check_liouville(sf);
  csv.row({"liouville_holds", fmt(lv.holds)});
  csv.row({"scaled_singular_value", fmt(lv.scaled_singular_value)});
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kNonSymmetricInput:
    case ErrorCode::kNonPositiveMass:
    case ErrorCode::kMarkedPointOffGrid:
    case ErrorCode::kUnsupportedDimension:
    case ErrorCode::kNegativeDensity:
    case ErrorCode::kEmptyNegativePart:
    case ErrorCode::kBandwidthTooSmall:
    case ErrorCode::kIoError:
      return kExitValidation;
    default:
      return kExitNumerical;
  }
}

}  // namespace

std::string render_experiment(const ExperimentSpec& spec, std::uint64_t seed,
                              unsigned threads) {
  Csv csv;
  csv.meta("fkcrit_version", FKCRIT_VERSION);
  csv.meta("experiment", spec.experiment);
  csv.meta("seed", std::to_string(seed));
  for (const auto& [key, values] : spec.values) csv.meta("param." + key, list_text(values));
  const std::string& name = spec.experiment;
  if (name == "remark_example") {
    remark_example(spec, csv);
  } else if (name == "threshold_scan") {
    threshold_scan(spec, csv);
  } else if (name == "sphere_example") {
    sphere_example(spec, csv);
  } else if (name == "random_suite") {
    random_suite(spec, seed, csv);
  } else if (name == "mc_validation") {
    mc_validation(spec, seed, threads, csv);
  } else if (name == "boundary_diag") {
    boundary_diag(spec, csv);
  } else if (name == "custom_chain") {
    custom_chain(spec, csv);
  } else {
    throw Error(ErrorCode::kParseError, "unknown experiment '" + name + "'");
  }
  return csv.text();
}

RunOutcome run_experiments(std::string_view spec_text, const RunOptions& options) {
  RunOutcome outcome;
  std::vector<std::pair<std::string, std::string>> files;
  try {
    const std::vector<ExperimentSpec> specs = parse_spec(spec_text);
    for (const auto& spec : specs) {
      const std::uint64_t seed =
          options.seed ? *options.seed : spec.seed.value_or(kDefaultSeed);
      files.emplace_back(spec.output, render_experiment(spec, seed, options.threads));
    }
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot create " + options.out_dir);
    for (const auto& [name, text] : files) {
      const fs::path path = fs::path(options.out_dir) / name;
      std::ofstream out(path, std::ios::binary);
      out << text;
      if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
      outcome.files.push_back(path.string());
    }
  } catch (const Error& e) {
    outcome.exit_code = exit_code_for(e.code());
    outcome.message = std::string(error_code_name(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    outcome.exit_code = kExitNumerical;
    outcome.message = e.what();
  }
  return outcome;
}

}  // namespace fkcrit
