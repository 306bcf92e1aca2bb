// SPDX-License-Identifier: Apache-2.0
#include "gem/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gem/spectrum.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gem {

namespace {

// Signed AC-Stark shift of the memory center for the given coupling.
double stark_center(double delta_c, double rabi) {
  const double r = (std::hypot(delta_c, rabi) - std::fabs(delta_c)) / 2.0;
  return delta_c >= 0 ? r : -r;
}

struct Axis {
  FreeParam which;
  ParamBounds bounds;
  bool geometric; // coarse spacing
};

} // namespace

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const std::vector<ParamBounds>& bounds,
    int max_iters, double spread_tol, double init_step) {
  const std::size_t n = x0.size();
  if (n == 0 || bounds.size() != n)
    throw std::invalid_argument("nelder_mead: empty or mismatched inputs");

  auto clamp = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
  };

  struct Vertex {
    std::vector<double> x;
    double f;
  };
  // lexicographic tie-breaking keeps the ordering deterministic
  auto less = [](const Vertex& a, const Vertex& b) {
    if (a.f != b.f) return a.f < b.f;
    return a.x < b.x;
  };

  std::vector<Vertex> s;
  s.reserve(n + 1);
  {
    std::vector<double> x = x0;
    clamp(x);
    s.push_back({x, f(x)});
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> xi = x0;
      const double span = bounds[i].hi - bounds[i].lo;
      xi[i] += init_step * span;
      if (xi[i] > bounds[i].hi) xi[i] = x0[i] - init_step * span;
      clamp(xi);
      s.push_back({xi, f(xi)});
    }
  }

  int iter = 0;
  for (; iter < max_iters; ++iter) {
    std::stable_sort(s.begin(), s.end(), less);
    if (s.back().f - s.front().f < spread_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += s[v].x[i] / n;

    auto blend = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i)
        x[i] = centroid[i] + coef * (centroid[i] - s[n].x[i]);
      clamp(x);
      return x;
    };

    std::vector<double> xr = blend(1.0);
    const double fr = f(xr);
    if (fr < s[0].f) {
      std::vector<double> xe = blend(2.0);
      const double fe = f(xe);
      if (fe < fr) s[n] = {xe, fe};
      else s[n] = {xr, fr};
    } else if (fr < s[n - 1].f) {
      s[n] = {xr, fr};
    } else {
      const bool outside = fr < s[n].f;
      std::vector<double> xc = blend(outside ? 0.5 : -0.5);
      const double fc = f(xc);
      if (fc < (outside ? fr : s[n].f)) {
        s[n] = {xc, fc};
      } else {
        for (std::size_t v = 1; v <= n; ++v) {
          for (std::size_t i = 0; i < n; ++i)
            s[v].x[i] = s[0].x[i] + 0.5 * (s[v].x[i] - s[0].x[i]);
          s[v].f = f(s[v].x);
        }
      }
    }
  }
  std::stable_sort(s.begin(), s.end(), less);
  return {s.front().x, s.front().f, iter};
}

OptimizeResult optimize(const PhysicalParams& base, const PulseSpec& pulse,
                        const ProtocolSchedule& schedule,
                        const SolverGrid& grid, const OptimizationSpec& spec) {
  base.validate();
  pulse.validate();
  if (spec.free_params.empty())
    throw std::invalid_argument("optimize: need at least one free parameter");

  const double bw_nominal = two_pi / pulse.fwhm;
  const double omega_seed =
      base.d > 0 ? omega_for_optimal(base.d, base.gamma_e, bw_nominal,
                                     base.delta_c)
                 : bw_nominal;
  const double delta0_seed =
      stark_center(base.delta_c, base.rabi > 0 ? base.rabi : omega_seed);

  std::vector<Axis> axes;
  for (FreeParam fp : spec.free_params) {
    Axis ax;
    ax.which = fp;
    switch (fp) {
      case FreeParam::omega:
        ax.bounds = spec.omega_bounds.value_or(
            ParamBounds{0.5 * omega_seed, 16.0 * omega_seed});
        ax.geometric = true;
        break;
      case FreeParam::bw:
        ax.bounds = spec.bw_bounds.value_or(
            ParamBounds{0.5 * bw_nominal, 4.0 * bw_nominal});
        ax.geometric = false;
        break;
      case FreeParam::delta0:
        ax.bounds = spec.delta0_bounds.value_or(
            ParamBounds{-bw_nominal, bw_nominal});
        ax.geometric = false;
        break;
    }
    if (!(ax.bounds.hi > ax.bounds.lo))
      throw std::invalid_argument("optimize: bounds must be ordered");
    axes.push_back(ax);
  }
  const std::size_t n = axes.size();

  SolverGrid scout = grid;
  scout.nz = spec.scout_nz;
  scout.nt = 0;
  scout.phase_ceiling = spec.scout_ceiling;

  OptimizeResult result;
  SolverOptions sopt;
  sopt.parallel = spec.solver_parallel;

  auto materialize = [&](const std::vector<double>& x, PhysicalParams& p,
                         PulseSpec& pl) {
    p = base;
    pl = pulse; // carrier stays as configured unless delta0 is free
    if (p.rabi == 0.0) p.rabi = omega_seed;
    for (std::size_t i = 0; i < n; ++i) {
      switch (axes[i].which) {
        case FreeParam::omega: p.rabi = x[i]; break;
        case FreeParam::bw: p.bandwidth = x[i]; break;
        case FreeParam::delta0: pl.carrier_offset = x[i]; break;
      }
    }
  };

  auto eval_on = [&](const std::vector<double>& x,
                     const SolverGrid& g) -> double {
    PhysicalParams p;
    PulseSpec pl;
    materialize(x, p, pl);
    try {
      return run_gem(p, pl, schedule, g, sopt).eta;
    } catch (const SolverError&) {
      return -1.0; // recorded and counted by the caller (parallel-safe)
    }
  };
  auto record = [&](const std::vector<double>& x, double eta,
                    const char* phase) {
    PhysicalParams p;
    PulseSpec pl;
    materialize(x, p, pl);
    result.evaluations.push_back({p.rabi, p.bandwidth, pl.carrier_offset, eta,
                                  phase});
  };

  // cache on quantized coordinates (1e-7 of the bound range, finer than the
  // 1e-6 relative rounding contract)
  std::map<std::vector<long long>, double> cache;
  auto quantize = [&](const std::vector<double>& x) {
    std::vector<long long> key(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double span = axes[i].bounds.hi - axes[i].bounds.lo;
      key[i] = llround((x[i] - axes[i].bounds.lo) / span * 1e7);
    }
    return key;
  };
  int failures = 0;
  auto eval_scout_cached = [&](const std::vector<double>& x,
                               const char* phase) {
    const auto key = quantize(x);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double eta = eval_on(x, scout);
    if (eta < 0.0) ++failures;
    record(x, eta, phase);
    cache.emplace(key, eta);
    return eta;
  };

  // seed point (analytic start; the optimizer may only improve on it)
  std::vector<double> seed(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    switch (axes[i].which) {
      case FreeParam::omega: v = omega_seed; break;
      case FreeParam::bw: v = bw_nominal; break;
      case FreeParam::delta0: v = delta0_seed; break;
    }
    seed[i] = std::clamp(v, axes[i].bounds.lo, axes[i].bounds.hi);
  }
  eval_scout_cached(seed, "seed");

  // coarse grid
  std::vector<int> counts(n, 1);
  for (std::size_t i = 0; i < n && i < spec.coarse_counts.size(); ++i)
    counts[i] = std::max(1, spec.coarse_counts[i]);
  long total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= counts[i];

  int omega_axis = -1, delta0_axis = -1;
  for (std::size_t i = 0; i < n; ++i) {
    if (axes[i].which == FreeParam::omega) omega_axis = (int)i;
    if (axes[i].which == FreeParam::delta0) delta0_axis = (int)i;
  }

  std::vector<std::vector<double>> coarse_pts(total);
  for (long idx = 0; idx < total; ++idx) {
    std::vector<double> x(n);
    long rem = idx;
    for (std::size_t i = 0; i < n; ++i) {
      const int c = counts[i];
      const int j = rem % c;
      rem /= c;
      const auto& b = axes[i].bounds;
      if (c == 1) {
        x[i] = seed[i];
      } else if (axes[i].geometric && b.lo > 0) {
        x[i] = b.lo * std::pow(b.hi / b.lo, double(j) / (c - 1));
      } else {
        x[i] = b.lo + (b.hi - b.lo) * double(j) / (c - 1);
      }
    }
    // a single-point carrier axis tracks the Stark center of the probed
    // coupling, keeping the coarse scan near the ridge at strong drive
    if (delta0_axis >= 0 && counts[delta0_axis] == 1) {
      const double om = omega_axis >= 0
                            ? x[omega_axis]
                            : (base.rabi > 0 ? base.rabi : omega_seed);
      x[delta0_axis] = std::clamp(stark_center(base.delta_c, om),
                                  axes[delta0_axis].bounds.lo,
                                  axes[delta0_axis].bounds.hi);
    }
    coarse_pts[idx] = std::move(x);
  }
  std::vector<double> coarse_eta(total);
#pragma omp parallel for schedule(dynamic) if (total > 4)
  for (long idx = 0; idx < total; ++idx)
    coarse_eta[idx] = eval_on(coarse_pts[idx], scout);
  for (long idx = 0; idx < total; ++idx) {
    if (coarse_eta[idx] < 0.0) ++failures;
    record(coarse_pts[idx], coarse_eta[idx], "coarse");
    cache.emplace(quantize(coarse_pts[idx]), coarse_eta[idx]);
  }

  // best starting point: highest eta, lexicographic tie-break
  std::vector<double> best_x = seed;
  double best_eta = cache.at(quantize(seed));
  for (long idx = 0; idx < total; ++idx) {
    if (coarse_eta[idx] > best_eta ||
        (coarse_eta[idx] == best_eta && coarse_pts[idx] < best_x)) {
      best_eta = coarse_eta[idx];
      best_x = coarse_pts[idx];
    }
  }

  // local refinement
  std::vector<ParamBounds> nm_bounds(n);
  for (std::size_t i = 0; i < n; ++i) nm_bounds[i] = axes[i].bounds;
  auto objective = [&](const std::vector<double>& x) {
    return -eval_scout_cached(x, "simplex");
  };
  NelderMeadResult nm = nelder_mead(objective, best_x, nm_bounds,
                                    spec.max_refine_iters, spec.spread_tol);
  if (-nm.f > best_eta) {
    best_eta = -nm.f;
    best_x = nm.x;
  }

  if (failures > 0 && best_eta < 0.0)
    throw SolverError("optimize: every evaluation was unstable");

  PhysicalParams pbest;
  PulseSpec plbest;
  materialize(best_x, pbest, plbest);
  result.omega = pbest.rabi;
  result.bw = pbest.bandwidth;
  result.delta0 = plbest.carrier_offset;
  result.eta_scout = best_eta;
  for (std::size_t i = 0; i < n; ++i) {
    const double span = axes[i].bounds.hi - axes[i].bounds.lo;
    if (best_x[i] <= axes[i].bounds.lo + 1e-9 * span ||
        best_x[i] >= axes[i].bounds.hi - 1e-9 * span)
      result.on_bound = true;
  }

  if (spec.final_full_eval) {
    result.eta = eval_on(best_x, grid);
    record(best_x, result.eta, "final");
  } else {
    result.eta = best_eta;
  }
  return result;
}

SweepResult sweep_detuning(const PhysicalParams& base, const PulseSpec& pulse,
                           const ProtocolTimings& timings,
                           const SolverGrid& grid,
                           const std::vector<double>& detunings,
                           const OptimizationSpec& spec, int jobs) {
  if (detunings.empty())
    throw std::invalid_argument("sweep_detuning: empty detuning list");

  SweepResult sweep;
  const GradientOrder orders[2] = {GradientOrder::eit, GradientOrder::eia};
  sweep.rows.resize(detunings.size() * 2);

  [[maybe_unused]] const int nthreads = std::max(1, jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads) \
    if (nthreads > 1)
  for (long idx = 0; idx < (long)sweep.rows.size(); ++idx) {
    const double dc = detunings[idx / 2];
    const GradientOrder order = orders[idx % 2];
    SweepRow row;
    row.delta_c = dc;
    row.order = order;
    try {
      PhysicalParams p = base;
      p.delta_c = dc;
      const ProtocolSchedule schedule =
          make_standard_schedule(order, dc, timings);
      OptimizeResult opt = optimize(p, pulse, schedule, grid, spec);
      row.omega = opt.omega;
      row.bw = opt.bw;
      row.delta0 = opt.delta0;
      row.eta = opt.eta;
      // sub-optimal companion point: 20% higher Rabi frequency
      PhysicalParams ph = p;
      ph.rabi = 1.2 * opt.omega;
      ph.bandwidth = opt.bw;
      PulseSpec pl = pulse;
      pl.carrier_offset = opt.delta0;
      row.eta_high_omega = run_gem(ph, pl, schedule, grid).eta;
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    sweep.rows[idx] = std::move(row);
  }
  return sweep;
}

} // namespace gem
