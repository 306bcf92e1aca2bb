// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gem/core.hpp"
#include "gem/solver.hpp"

namespace gem {

enum class FreeParam { omega, bw, delta0 };

struct ParamBounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Search configuration for one optimize() call. Bounds left unset fall back
/// to defaults derived from the seed point: omega in [0.5, 16] x the
/// analytic seed, BW in [0.5, 4] x (2 pi / pulse FWHM), delta0 in +-(2 pi /
/// pulse FWHM). Searching runs on a cheap scout grid (the time-step error at
/// the scout ceiling is ~1e-5 in eta); the winner is re-evaluated on the
/// caller's grid.
struct OptimizationSpec {
  std::vector<FreeParam> free_params = {FreeParam::omega, FreeParam::bw,
                                        FreeParam::delta0};
  std::optional<ParamBounds> omega_bounds;
  std::optional<ParamBounds> bw_bounds;
  std::optional<ParamBounds> delta0_bounds;
  std::vector<int> coarse_counts = {7, 5, 1}; // per free param, in order
  int max_refine_iters = 60;
  double spread_tol = 1e-4;
  int scout_nz = 128;
  double scout_ceiling = 1.0;
  bool final_full_eval = true;
  bool solver_parallel = false;
};

struct EvalRecord {
  double omega = 0.0, bw = 0.0, delta0 = 0.0;
  double eta = 0.0;
  std::string phase; // seed / coarse / simplex / final / high_omega
};

struct OptimizeResult {
  double omega = 0.0, bw = 0.0, delta0 = 0.0; // rad/us
  double eta = 0.0;        // on the caller's grid (or scout when disabled)
  double eta_scout = 0.0;  // best value seen during the search
  bool on_bound = false;
  std::vector<EvalRecord> evaluations;
};

/// Tunes the free parameters to maximize run_gem efficiency: deterministic
/// coarse grid scan (plus the analytic seed) followed by Nelder-Mead
/// refinement with lexicographic tie-breaking. Throws when every evaluation
/// fails to integrate.
OptimizeResult optimize(const PhysicalParams& base, const PulseSpec& pulse,
                        const ProtocolSchedule& schedule,
                        const SolverGrid& grid, const OptimizationSpec& spec);

struct SweepRow {
  double delta_c = 0.0; // rad/us, signed
  GradientOrder order = GradientOrder::eit;
  double omega = 0.0, bw = 0.0, delta0 = 0.0;
  double eta = 0.0;
  double eta_high_omega = 0.0; // re-evaluated at 1.2 x omega
  bool failed = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Runs optimize per (detuning, order) pair, both orders per detuning, plus
/// one extra evaluation at 1.2 x the tuned Rabi frequency. Rows appear in
/// input order (eit then eia per detuning); per-row failures are recorded
/// and the sweep continues. Rows execute in parallel when jobs > 1.
SweepResult sweep_detuning(const PhysicalParams& base, const PulseSpec& pulse,
                           const ProtocolTimings& timings,
                           const SolverGrid& grid,
                           const std::vector<double>& detunings,
                           const OptimizationSpec& spec, int jobs = 1);

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
};

/// Deterministic bounded Nelder-Mead minimizer (normalized coordinates,
/// clamped proposals, lexicographic tie-breaking). Exposed for direct use
/// against closed-form objectives.
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const std::vector<ParamBounds>& bounds,
    int max_iters, double spread_tol, double init_step = 0.1);

} // namespace gem
