// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#include "fkcrit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>
#include <thread>

#include "fkcrit/error.hpp"
#include "fkcrit/measures.hpp"
#include "fkcrit/philox.hpp"

namespace fkcrit {

namespace {

// Per-run constants shared by every path.
struct Prepared {
  const ContinuumProblem1D* problem = nullptr;
  double dt = 0.0;
  double sqrt_dt = 0.0;
  double drift = 0.0;  // radial: (d-1)/2, divided by r at each step
  std::vector<PotentialAtom> plus_atoms;
  std::vector<PotentialAtom> minus_atoms;
  double inv_width = 0.0;  // 1 / (2 eps)
  Philox4x32::Key key{};
};

Prepared prepare(const ContinuumProblem1D& problem, double t, std::uint64_t seed,
                 long& n_steps) {
  problem.validate();
  if (!(t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "time must be positive");
  n_steps = std::max(1L, static_cast<long>(std::ceil(t / problem.delta - 1e-9)));
  Prepared p;
  p.problem = &problem;
  p.dt = t / static_cast<double>(n_steps);
  p.sqrt_dt = std::sqrt(p.dt);
  p.drift = problem.geometry == Geometry::kRadial
                ? 0.5 * static_cast<double>(problem.dimension - 1)
                : 0.0;
  for (const auto& a : problem.atoms) {
    (a.sign > 0 ? p.plus_atoms : p.minus_atoms).push_back(a);
  }
  p.inv_width = 1.0 / (2.0 * problem.epsilon);
  p.key = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return p;
}

double atom_rate(const std::vector<PotentialAtom>& atoms, double x, double eps,
                 double inv_width) {
  double rate = 0.0;
  for (const auto& a : atoms) {
    if (std::abs(x - a.location) <= eps) rate += a.weight * inv_width;
  }
  return rate;
}

struct PotentialRates {
  double plus = 0.0;
  double minus = 0.0;
};

PotentialRates rates_at(const Prepared& p, double x) {
  const ContinuumProblem1D& pr = *p.problem;
  PotentialRates r;
  r.plus = atom_rate(p.plus_atoms, x, pr.epsilon, p.inv_width);
  r.minus = atom_rate(p.minus_atoms, x, pr.epsilon, p.inv_width);
  if (pr.density_plus) r.plus += pr.density_plus(x);
  if (pr.density_minus) r.minus += pr.density_minus(x);
  return r;
}

// Probability that a Brownian bridge of variance dt between x and y (both
// inside) touches the level b.
double bridge_hit(double x, double y, double b, double dt) {
  return std::exp(-2.0 * (x - b) * (y - b) / dt);
}

// Simulates one path for n_steps. on_step(k, x, d_plus, d_minus) is called
// after each completed step with the potential increments over it; a return
// of false stops the path. on_absorb(k) is called if the path leaves through
// an absorbing end during step k.
template <class OnStep, class OnAbsorb>
void walk(const Prepared& p, std::uint64_t path, double x0, long n_steps,
          OnStep&& on_step, OnAbsorb&& on_absorb) {
  const ContinuumProblem1D& pr = *p.problem;
  double x = x0;
  PotentialRates prev = rates_at(p, x);
  Philox4x32::Counter words{};
  const auto path_lo = static_cast<std::uint32_t>(path);
  const auto path_hi = static_cast<std::uint32_t>(path >> 32);
  for (long k = 0; k < n_steps; ++k) {
    double z, bridge_u;
    if ((k & 1) == 0) {
      const auto pair = static_cast<std::uint64_t>(k >> 1);
      words = Philox4x32::generate({static_cast<std::uint32_t>(pair),
                                    static_cast<std::uint32_t>(pair >> 32),
                                    path_lo, path_hi},
                                   p.key);
      const double radius = std::sqrt(-2.0 * std::log(Philox4x32::to_unit(words[0])));
      const double angle = 2.0 * std::numbers::pi * Philox4x32::to_unit(words[1]);
      z = radius * std::cos(angle);
      // Stash the second normal for the odd step in words[1]'s slot.
      const double second = radius * std::sin(angle);
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(second));
      std::memcpy(&bits, &second, sizeof(bits));
      words[0] = static_cast<std::uint32_t>(bits);
      words[1] = static_cast<std::uint32_t>(bits >> 32);
      bridge_u = Philox4x32::to_unit(words[2]);
    } else {
      const std::uint64_t bits =
          (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
      std::memcpy(&z, &bits, sizeof(z));
      bridge_u = Philox4x32::to_unit(words[3]);
    }

    const double drift = p.drift > 0.0 ? p.drift / x : 0.0;
    double y = x + drift * p.dt + p.sqrt_dt * z;

    bool absorbed = false;
    if (y <= pr.left) {
      if (pr.left_end == EndBehavior::kAbsorb) {
        absorbed = true;
      } else {
        y = 2.0 * pr.left - y;
      }
    }
    if (!absorbed && y >= pr.right) {
      if (pr.right_end == EndBehavior::kAbsorb) {
        absorbed = true;
      } else {
        y = 2.0 * pr.right - y;
      }
    }
    if (!absorbed) y = std::clamp(y, pr.left, pr.right);
    if (!absorbed && pr.bridge_correction) {
      double survive = 1.0;
      if (pr.left_end == EndBehavior::kAbsorb) {
        survive *= 1.0 - bridge_hit(x, y, pr.left, p.dt);
      }
      if (pr.right_end == EndBehavior::kAbsorb) {
        survive *= 1.0 - bridge_hit(x, y, pr.right, p.dt);
      }
      absorbed = bridge_u >= survive;
    }
    if (absorbed) {
      on_absorb(k);
      return;
    }
    const PotentialRates next = rates_at(p, y);
    const double d_plus = 0.5 * p.dt * (prev.plus + next.plus);
    const double d_minus = 0.5 * p.dt * (prev.minus + next.minus);
    prev = next;
    x = y;
    if (!on_step(k, x, d_plus, d_minus)) return;
  }
}

// Runs `per_path(i, out_row)` for every path, split into contiguous blocks.
// Results land in path order, so reductions do not depend on `threads`.
template <class PerPath>
std::vector<double> run_paths(std::size_t n_paths, std::size_t width,
                              unsigned threads, PerPath&& per_path) {
  std::vector<double> values(n_paths * width, 0.0);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         std::max<std::size_t>(n_paths, 1))));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) per_path(i, values.data() + i * width);
  };
  if (threads == 1) {
    work(0, n_paths);
    return values;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n_paths + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(n_paths, t * chunk);
    const std::size_t end = std::min(n_paths, begin + chunk);
    pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
  return values;
}

PathEstimate summarize(const std::vector<double>& values, std::size_t width,
                       std::size_t column, std::size_t n_paths, std::uint64_t seed,
                       const ContinuumProblem1D& problem) {
  PathEstimate e;
  e.n_paths = n_paths;
  e.seed = seed;
  e.delta = problem.delta;
  e.epsilon = problem.epsilon;
  if (n_paths == 0) return e;
  double sum = 0.0;
  for (std::size_t i = 0; i < n_paths; ++i) sum += values[i * width + column];
  const double mean = sum / static_cast<double>(n_paths);
  double ss = 0.0;
  for (std::size_t i = 0; i < n_paths; ++i) {
    const double d = values[i * width + column] - mean;
    ss += d * d;
  }
  e.value = mean;
  e.std_error = n_paths > 1 ? std::sqrt(ss / static_cast<double>(n_paths - 1)) /
                                  std::sqrt(static_cast<double>(n_paths))
                            : 0.0;
  return e;
}

void check_start(const ContinuumProblem1D& problem, double x0) {
  if (!(x0 > problem.left && x0 < problem.right)) {
    std::ostringstream os;
    os << "starting point " << x0 << " must be interior to (" << problem.left
       << ", " << problem.right << ")";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

}  // namespace

void ContinuumProblem1D::validate() const {
  if (!(left < right)) {
    throw Error(ErrorCode::kInvalidArgument, "domain requires left < right");
  }
  if (geometry == Geometry::kRadial) {
    if (dimension < 2) {
      throw Error(ErrorCode::kUnsupportedDimension, "radial problems need d >= 2");
    }
    if (!(left > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "radial problems reflect at a positive inner radius");
    }
  }
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "time step must be positive");
  }
  if (!(epsilon >= std::sqrt(delta))) {
    std::ostringstream os;
    os << "bandwidth " << epsilon << " is below sqrt(delta) = " << std::sqrt(delta);
    throw Error(ErrorCode::kBandwidthTooSmall, os.str());
  }
  for (const auto& a : atoms) {
    if (!(a.location > left && a.location < right)) {
      throw Error(ErrorCode::kInvalidArgument, "atoms must be interior");
    }
    if (!(a.weight > 0.0) || (a.sign != 1 && a.sign != -1)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "atoms need positive weight and sign +-1");
    }
  }
}

FkAndLocalTime simulate_fk_and_local_time(const ContinuumProblem1D& problem, double x0,
                                          double t, const std::function<double(double)>& f,
                                          double point, std::size_t n_paths,
                                          std::uint64_t seed, unsigned threads) {
  long n_steps = 0;
  const Prepared p = prepare(problem, t, seed, n_steps);
  check_start(problem, x0);
  const double eps = problem.epsilon;
  const bool want_f = static_cast<bool>(f);
  auto values = run_paths(n_paths, 2, threads, [&](std::size_t i, double* out) {
    double a = 0.0;
    double x_end = x0;
    bool alive = true;
    double prev = std::abs(x0 - point) <= eps ? 1.0 : 0.0;
    double occupation = 0.0;
    walk(
        p, i, x0, n_steps,
        [&](long, double x, double d_plus, double d_minus) {
          a += d_plus - d_minus;
          x_end = x;
          const double cur = std::abs(x - point) <= eps ? 1.0 : 0.0;
          occupation += 0.5 * (prev + cur);
          prev = cur;
          return true;
        },
        [&](long) { alive = false; });
    out[0] = want_f && alive ? std::exp(-a) * f(x_end) : 0.0;
    out[1] = occupation * p.dt * p.inv_width;
  });
  return {summarize(values, 2, 0, n_paths, seed, problem),
          summarize(values, 2, 1, n_paths, seed, problem)};
}

PathEstimate simulate_fk(const ContinuumProblem1D& problem, double x0, double t,
                         const std::function<double(double)>& f,
                         std::size_t n_paths, std::uint64_t seed, unsigned threads) {
  if (!f) throw Error(ErrorCode::kInvalidArgument, "test function is empty");
  return simulate_fk_and_local_time(problem, x0, t, f, x0, n_paths, seed, threads).fk;
}

PathEstimate estimate_local_time(const ContinuumProblem1D& problem, double x0,
                                 double t, double point, std::size_t n_paths,
                                 std::uint64_t seed, unsigned threads) {
  return simulate_fk_and_local_time(problem, x0, t, {}, point, n_paths, seed, threads)
      .local_time;
}

std::vector<PathEstimate> estimate_gauge(const ContinuumProblem1D& problem,
                                         double x0, std::span<const double> horizons,
                                         std::size_t n_paths, std::uint64_t seed,
                                         unsigned threads) {
  if (horizons.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "horizon ladder is empty");
  }
  std::vector<double> ladder(horizons.begin(), horizons.end());
  if (!std::is_sorted(ladder.begin(), ladder.end()) || !(ladder.front() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "horizons must be positive and increasing");
  }
  long n_steps = 0;
  const Prepared p = prepare(problem, ladder.back(), seed, n_steps);
  check_start(problem, x0);
  // Step index after which each horizon is reached.
  std::vector<long> marks;
  for (double h : ladder) {
    marks.push_back(std::max(1L, static_cast<long>(std::llround(h / p.dt))) - 1);
  }
  const std::size_t width = ladder.size();
  auto values = run_paths(n_paths, width, threads, [&](std::size_t i, double* out) {
    double a_plus = 0.0, a_minus = 0.0;
    double killed_sum = 0.0;  // sum over steps of P(killed there) * exp(A-)
    std::size_t next_mark = 0;
    auto record = [&](double tail) {
      while (next_mark < width) out[next_mark++] = killed_sum + tail;
    };
    walk(
        p, i, x0, n_steps,
        [&](long k, double, double d_plus, double d_minus) {
          const double survive_before = std::exp(-a_plus);
          a_plus += d_plus;
          a_minus += d_minus;
          if (d_plus > 0.0) {
            killed_sum += survive_before * -std::expm1(-d_plus) * std::exp(a_minus);
          }
          while (next_mark < width && marks[next_mark] == k) {
            out[next_mark++] = killed_sum + std::exp(a_minus - a_plus);
          }
          return next_mark < width;
        },
        [&](long) { record(std::exp(a_minus - a_plus)); });
    record(0.0);
  });
  std::vector<PathEstimate> out;
  for (std::size_t c = 0; c < width; ++c) {
    out.push_back(summarize(values, width, c, n_paths, seed, problem));
  }
  return out;
}

MatchedChain discretize(const ContinuumProblem1D& problem, double h) {
  problem.validate();
  if (problem.geometry != Geometry::kLine) {
    throw Error(ErrorCode::kInvalidArgument,
                "matched chains are built for line problems only");
  }
  std::vector<double> marked;
  for (const auto& a : problem.atoms) marked.push_back(a.location);
  auto boundary = [](EndBehavior e) {
    return e == EndBehavior::kReflect ? Boundary::kFree : Boundary::kAbsorbing;
  };
  GridForm gf = build_grid_form(problem.left, problem.right, h,
                                boundary(problem.left_end),
                                boundary(problem.right_end), marked);
  SignedMeasure mu(gf.form.size());
  for (const auto& a : problem.atoms) {
    SignedMeasure piece = atom(gf.grid, a.location, a.weight);
    mu = a.sign > 0 ? mu + piece : mu - piece;
  }
  if (problem.density_plus) mu = mu + density(gf.form, gf.grid, problem.density_plus);
  if (problem.density_minus) {
    mu = mu - density(gf.form, gf.grid, problem.density_minus);
  }
  DirichletForm form = gf.form;
  return MatchedChain{std::move(gf), SchrodingerForm(std::move(form), std::move(mu))};
}

}  // namespace fkcrit
