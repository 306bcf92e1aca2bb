// SPDX-License-Identifier: Apache-2.0
#include "gem/solver.hpp"

#include <algorithm>
#include <cmath>

#include "gem/kernels.hpp"

namespace gem {

namespace {

// Local gradient detuning. z is measured against the propagation direction,
// which makes the negative-then-positive gradient order the efficient one
// for delta_c > 0.
std::vector<double> gradient_profile(const PhysicalParams& p, int nz, int sign) {
  std::vector<double> gz(nz);
  const double dz = 1.0 / (nz - 1);
  for (int k = 0; k < nz; ++k) {
    const double z = -0.5 + k * dz;
    gz[k] = p.bandwidth * sign * (-z);
  }
  return gz;
}

kernels::StageCoeffs make_coeffs(const PhysicalParams& p,
                                 const std::vector<double>& gz, bool control_on,
                                 double decay_scale) {
  kernels::StageCoeffs c;
  c.gz = gz.data();
  c.nz = static_cast<int>(gz.size());
  c.dz = 1.0 / (c.nz - 1);
  c.gamma_s = p.gamma_s * decay_scale;
  c.p_re = -0.5 * p.gamma_e * decay_scale;
  c.p_im = p.delta_c;
  c.om_half = control_on ? 0.5 * p.rabi : 0.0;
  c.drive = 0.5 * p.gamma_e * std::sqrt(p.d / 2.0);
  c.couple = std::sqrt(p.d / 2.0);
  return c;
}

double auto_dt(const PhysicalParams& p, const SolverGrid& grid) {
  if (grid.nt > 0) return grid.t_total / (grid.nt - 1);
  const double wmax = std::max({std::fabs(p.delta_c), p.bandwidth / 2.0, p.rabi});
  double dt = wmax > 0 ? grid.phase_ceiling / wmax : grid.t_total / 1024.0;
  // collective coupling P -> E -> P adds stiffness ~ gamma_e * d / 4 beyond
  // the single-point phase rotations; cap the explicit step against it
  const double collective = p.gamma_e * p.d / 4.0;
  if (collective > 0) dt = std::min(dt, 4.0 / collective);
  return dt;
}

void check_finite(const std::vector<cplx>& S, const std::vector<cplx>& P,
                  double t) {
  const int nz = static_cast<int>(S.size());
  for (int k : {0, nz / 2, nz - 1}) {
    if (!std::isfinite(S[k].real()) || !std::isfinite(S[k].imag()) ||
        !std::isfinite(P[k].real()) || !std::isfinite(P[k].imag()))
      throw SolverError("non-finite field values at t = " + std::to_string(t) +
                        " us (unstable step size or parameters)");
  }
}

struct TrapzAccumulator {
  double prev_t = 0.0, prev_v = 0.0;
  double total = 0.0;
  bool primed = false;
  void add(double t, double v) {
    if (primed) total += 0.5 * (t - prev_t) * (v + prev_v);
    prev_t = t;
    prev_v = v;
    primed = true;
  }
};

} // namespace

MemoryResult run_gem(const PhysicalParams& params, const PulseSpec& pulse,
                     const ProtocolSchedule& schedule, const SolverGrid& grid,
                     const SolverOptions& options) {
  params.validate();
  pulse.validate();
  schedule.validate();
  grid.validate_against(params);
  if (schedule.total_time() < grid.t_total - 1e-9)
    throw std::invalid_argument("schedule does not cover the grid time span");
  if (pulse_energy(pulse) <= 0.0 && params.d > 0.0)
    throw std::invalid_argument("input pulse energy must be > 0");

  MemoryResult res;
  res.t_flip = schedule.flip_time();
  res.multi_flip = schedule.multi_flip();

  const int nz = grid.nz;
  std::vector<cplx> S(nz, 0.0), P(nz, 0.0);
  kernels::StepWorkspace ws;
  ws.resize(nz);
  const double dt_target = auto_dt(params, grid);

  auto ein = [&pulse](double t) { return pulse.envelope(t); };

  // snapshot plan
  const int zstride = options.snapshots
                          ? std::max(1, nz / std::max(1, options.snapshot_nz))
                          : 1;
  double snap_dt = 0.0, next_snap = 0.0;
  if (options.snapshots) {
    res.snapshots.emplace();
    for (int k = 0; k < nz; k += zstride)
      res.snapshots->z.push_back(-0.5 + k * grid.dz());
    snap_dt = grid.t_total / std::max(1, options.snapshot_nt - 1);
  }
  auto take_snapshot = [&](double t, const std::vector<cplx>& E) {
    auto& sn = *res.snapshots;
    sn.t.push_back(t);
    for (int k = 0; k < nz; k += zstride) {
      sn.e_abs.push_back(std::abs(E[k]));
      sn.s_abs.push_back(std::abs(S[k]));
      sn.p_sq.push_back(std::norm(P[k]));
    }
  };

  TrapzAccumulator in_acc, out_pre_acc, out_post_acc, pexp_acc;
  double peak = -1.0, peak_t = res.t_flip;
  long step_count = 0;

  auto record = [&](double t, const std::vector<cplx>& E,
                    const kernels::StageCoeffs& c) {
    const double in2 = std::norm(ein(t));
    const double out2 = std::norm(E[nz - 1]);
    res.traces.t.push_back(t);
    res.traces.e_in_sq.push_back(in2);
    res.traces.e_out_sq.push_back(out2);
    in_acc.add(t, in2);
    // the flip instant belongs to the leakage window
    if (t <= res.t_flip) {
      out_pre_acc.add(t, out2);
      if (t == res.t_flip) out_post_acc.add(t, out2); // window boundary
    } else {
      out_post_acc.add(t, out2);
      if (out2 > peak) {
        peak = out2;
        peak_t = t;
      }
    }
    pexp_acc.add(t, kernels::excited_population_z_integral(c, P.data()));
    if (options.snapshots && t >= next_snap - 1e-12) {
      take_snapshot(t, E);
      next_snap += snap_dt;
    }
  };

  for (const auto& seg : schedule.segments) {
    const double a = std::max(0.0, seg.t_start);
    const double b = std::min(grid.t_total, seg.t_end);
    if (b <= a) continue;
    const auto gz = gradient_profile(params, nz, seg.gradient_sign);
    const auto c = make_coeffs(params, gz, seg.control_on, options.decay_scale);
    const int nsteps = std::max(1, (int)std::ceil((b - a) / dt_target - 1e-9));
    const double dt = (b - a) / nsteps;
    for (int n = 0; n < nsteps; ++n) {
      const double t = a + n * dt;
      kernels::field_from_polarization(c, P.data(), ein(t), ws.E1.data());
      record(t, ws.E1, c);
      kernels::rk4_step(c, S.data(), P.data(), t, dt, ein, ws.E1.data(), ws,
                        options.parallel);
      if (++step_count % 256 == 0) check_finite(S, P, t);
    }
  }
  // final sample at t_total
  {
    const auto& seg = schedule.segments.back();
    const auto gz = gradient_profile(params, nz, seg.gradient_sign);
    const auto c = make_coeffs(params, gz, seg.control_on, options.decay_scale);
    kernels::field_from_polarization(c, P.data(), ein(grid.t_total),
                                     ws.E1.data());
    check_finite(S, P, grid.t_total);
    record(grid.t_total, ws.E1, c);
  }

  res.input_energy = in_acc.total;
  if (in_acc.total > 0.0) {
    res.eta = out_post_acc.total / in_acc.total;
    res.leakage_fraction = out_pre_acc.total / in_acc.total;
  }
  // a passive medium cannot emit more than it received; treat gain as a
  // marginally unstable step that escaped the finite checks
  if (res.eta + res.leakage_fraction > 1.02)
    throw SolverError("unphysical energy gain (eta + leakage = " +
                      std::to_string(res.eta + res.leakage_fraction) +
                      "): unstable step size");
  res.recall_peak_time = peak_t;
  res.excited_exposure = pexp_acc.total;
  res.leakage_warning = res.leakage_fraction > 0.5;
  return res;
}

FieldState step(const FieldState& state, const PhysicalParams& params,
                int gradient_sign, bool control_on, double dt,
                const SolverOptions& options,
                const std::function<cplx(double)>& ein) {
  params.validate();
  if (gradient_sign != 1 && gradient_sign != -1)
    throw std::invalid_argument("gradient_sign must be +1 or -1");
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  const int nz = static_cast<int>(state.S.size());
  if (nz < 2 || state.P.size() != state.S.size())
    throw std::invalid_argument("state arrays must have equal length >= 2");

  FieldState out = state;
  const auto gz = gradient_profile(params, nz, gradient_sign);
  const auto c = make_coeffs(params, gz, control_on, options.decay_scale);
  kernels::StepWorkspace ws;
  ws.resize(nz);
  auto boundary = [&](double t) -> cplx { return ein ? ein(t) : cplx(0.0); };
  kernels::field_from_polarization(c, out.P.data(), boundary(state.t),
                                   ws.E1.data());
  kernels::rk4_step(c, out.S.data(), out.P.data(), state.t, dt, boundary,
                    ws.E1.data(), ws, options.parallel);
  out.t = state.t + dt;
  out.E.resize(nz);
  kernels::field_from_polarization(c, out.P.data(), boundary(out.t),
                                   out.E.data());
  check_finite(out.S, out.P, out.t);
  return out;
}

namespace {

double trapz_window(const std::vector<double>& t, const std::vector<double>& v,
                    double t_min) {
  double total = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i - 1] >= t_min)
      total += 0.5 * (t[i] - t[i - 1]) * (v[i] + v[i - 1]);
  return total;
}

} // namespace

double efficiency(const MemoryResult& result) {
  const auto& tr = result.traces;
  if (tr.t.size() < 2)
    throw std::invalid_argument("efficiency: traces are empty");
  double in = trapz_window(tr.t, tr.e_in_sq, -1e300);
  if (in <= 0.0)
    throw std::invalid_argument("efficiency: input trace is identically zero");
  return trapz_window(tr.t, tr.e_out_sq, result.t_flip) / in;
}

double recall_timing_compare(const MemoryResult& result_eit,
                             const MemoryResult& result_eia,
                             double eta_floor) {
  if (result_eit.eta < eta_floor || result_eia.eta < eta_floor)
    throw std::invalid_argument(
        "recall_timing_compare: efficiency below floor, peak time meaningless");
  return result_eia.recall_peak_time - result_eit.recall_peak_time;
}

PopulationMap excited_population_map(const MemoryResult& result) {
  if (!result.snapshots)
    throw std::invalid_argument("excited_population_map: snapshots disabled");
  PopulationMap map;
  map.z = result.snapshots->z;
  map.t = result.snapshots->t;
  map.p_sq = result.snapshots->p_sq;
  map.total_exposure = result.excited_exposure;
  return map;
}

} // namespace gem
