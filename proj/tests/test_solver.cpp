// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gem/config.hpp"
#include "gem/solver.hpp"
#include "gem/spectrum.hpp"

using namespace gem;

namespace {

// scout-grid scenario around the d=400 working point; fast enough for unit
// tests, accurate to ~1e-4 in eta
struct Setup {
  PhysicalParams params;
  PulseSpec pulse;
  ProtocolSchedule schedule;
  SolverGrid grid;
};

Setup working_point(GradientOrder order, double delta_c_mhz = 175.0,
                    double rabi_factor = 10.0, double bw_factor = 1.3) {
  Setup s;
  s.params = make_params(400, 5.75, 0, delta_c_mhz, 1.0, 0.2 * bw_factor);
  const double bw_nominal = two_pi / 5.0;
  const double seed =
      omega_for_optimal(400, s.params.gamma_e, bw_nominal, s.params.delta_c);
  s.params.rabi = rabi_factor * seed;

  const StandardProtocol sp = standard_protocol(5.0);
  s.pulse.fwhm = 5.0;
  s.pulse.center_time = sp.center_time;
  s.pulse.amplitude = 1.0;
  const double stark = (std::hypot(s.params.delta_c, s.params.rabi) -
                        std::fabs(s.params.delta_c)) /
                       2.0;
  s.pulse.carrier_offset = 0.7 * (s.params.delta_c >= 0 ? stark : -stark);
  s.schedule = make_standard_schedule(order, s.params.delta_c, sp.timings);
  s.grid.nz = 128;
  s.grid.t_total = sp.timings.t_total;
  s.grid.phase_ceiling = 1.0;
  return s;
}

FieldState zero_state(int nz) {
  FieldState st;
  st.S.assign(nz, 0.0);
  st.P.assign(nz, 0.0);
  st.E.assign(nz, 0.0);
  return st;
}

} // namespace

TEST_CASE("d = 0: field passes through unchanged, atoms stay dark") {
  Setup s = working_point(GradientOrder::eit);
  s.params.d = 0.0;
  const MemoryResult r = run_gem(s.params, s.pulse, s.schedule, s.grid);
  REQUIRE(r.traces.t.size() > 100);
  for (std::size_t i = 0; i < r.traces.t.size(); ++i)
    CHECK(r.traces.e_out_sq[i] ==
          doctest::Approx(r.traces.e_in_sq[i]).epsilon(1e-12));
  CHECK(r.leakage_fraction == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.eta < 1e-5); // the post-flip pulse tail itself
  CHECK(r.excited_exposure == 0.0);
  CHECK(r.leakage_warning);
}

TEST_CASE("step: polarization decays at gamma_e/2 regardless of detuning") {
  // d = 0 decouples the field, leaving the closed-form single-atom decay;
  // the phase rotation at delta_c never touches |P|
  const PhysicalParams p = make_params(0, 5.75, 0, 175, 0, 0.3);
  FieldState st = zero_state(64);
  for (auto& v : st.P) v = cplx(0.3, -0.4);
  const double dt = 5e-5;
  const int nsteps = 400;
  for (int i = 0; i < nsteps; ++i) st = step(st, p, +1, true, dt);
  const double expected = 0.5 * std::exp(-p.gamma_e / 2 * st.t);
  for (int k : {0, 31, 63})
    CHECK(std::abs(st.P[k]) == doctest::Approx(expected).epsilon(1e-5));
  // spinwave untouched without coupling
  for (int k : {0, 63}) CHECK(std::abs(st.S[k]) == 0.0);
}

TEST_CASE("step: with atoms present the entry point still decays closed-form") {
  // E(z = -1/2) is pinned to the (zero) boundary, so the left edge never
  // feels the radiated field even at d > 0
  const PhysicalParams p = make_params(50, 5.75, 0, 175, 0, 0.3);
  FieldState st = zero_state(64);
  for (auto& v : st.P) v = cplx(0.3, -0.4);
  const double dt = 5e-5;
  for (int i = 0; i < 400; ++i) st = step(st, p, +1, true, dt);
  const double expected = 0.5 * std::exp(-p.gamma_e / 2 * st.t);
  CHECK(std::abs(st.P[0]) == doctest::Approx(expected).epsilon(1e-5));
  // interior points radiate collectively and decay faster
  CHECK(std::abs(st.P[32]) < expected);
}

TEST_CASE("step: spinwave decays at gamma_s under the dephasing reading") {
  PhysicalParams p = make_params(50, 5.75, 0.05, 20, 0, 0.3);
  FieldState st = zero_state(64);
  for (auto& v : st.S) v = cplx(1.0, 0.0);
  const double dt = 5e-4;
  const int nsteps = 500;
  for (int i = 0; i < nsteps; ++i) st = step(st, p, -1, true, dt);
  const double expected = std::exp(-p.gamma_s * st.t);
  for (int k : {0, 20, 63})
    CHECK(std::abs(st.S[k]) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("step: d = 0 gives a z-uniform field equal to the boundary value") {
  const PhysicalParams p = make_params(0, 5.75, 0, 20, 1, 0.3);
  FieldState st = zero_state(32);
  auto ein = [](double) { return cplx(0.6, 0.2); };
  st = step(st, p, +1, true, 1e-3, {}, ein);
  for (const auto& e : st.E) {
    CHECK(e.real() == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(e.imag() == doctest::Approx(0.2).epsilon(1e-14));
  }
}

TEST_CASE("step rejects bad arguments and detects blow-up") {
  const PhysicalParams p = make_params(400, 5.75, 0, 175, 2, 0.3);
  FieldState st = zero_state(32);
  CHECK_THROWS_AS(step(st, p, 0, true, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(step(st, p, +1, true, -1.0), std::invalid_argument);

  // a step far beyond the stability region blows up within a few calls
  for (auto& v : st.P) v = cplx(1.0, 0.0);
  bool threw = false;
  try {
    for (int i = 0; i < 64; ++i) st = step(st, p, +1, true, 1.0);
  } catch (const SolverError&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("serial and OpenMP backends produce identical bits") {
  Setup s = working_point(GradientOrder::eit);
  s.grid.nz = 96;
  s.grid.phase_ceiling = 2.0; // keep it quick; bitwise equality is the point
  SolverOptions serial, parallel;
  serial.parallel = false;
  parallel.parallel = true;
  const MemoryResult a = run_gem(s.params, s.pulse, s.schedule, s.grid, serial);
  const MemoryResult b =
      run_gem(s.params, s.pulse, s.schedule, s.grid, parallel);
  REQUIRE(a.traces.t.size() == b.traces.t.size());
  CHECK(a.eta == b.eta);
  CHECK(a.leakage_fraction == b.leakage_fraction);
  CHECK(a.excited_exposure == b.excited_exposure);
  for (std::size_t i = 0; i < a.traces.t.size(); i += 7)
    CHECK(a.traces.e_out_sq[i] == b.traces.e_out_sq[i]);
}

TEST_CASE("decay-free excitation balance") {
  // decay terms off, drive coefficient kept: input flux = output flux +
  // stored norm growth
  PhysicalParams p = make_params(100, 5.75, 0, 20, 1.0, 0.3);
  PulseSpec pulse;
  pulse.fwhm = 1.0;
  pulse.center_time = 1.5;
  pulse.amplitude = 1.0;
  const int nz = 192; // the balance identity holds to O(dz^2)
  const double dz = 1.0 / (nz - 1);
  FieldState st = zero_state(nz);
  SolverOptions opts;
  opts.decay_scale = 0.0;
  auto ein = [&](double t) { return pulse.envelope(t); };

  const double T = 3.0;
  const double dt = 0.1 / std::fabs(p.delta_c);
  const int nsteps = (int)std::ceil(T / dt);
  double flux_in = 0, flux_out = 0;
  double prev_in = std::norm(ein(0.0)), prev_out = 0.0;
  for (int i = 0; i < nsteps; ++i) {
    st = step(st, p, -1, true, dt, opts, ein);
    const double in2 = std::norm(ein(st.t));
    const double out2 = std::norm(st.E.back());
    flux_in += 0.5 * dt * (prev_in + in2);
    flux_out += 0.5 * dt * (prev_out + out2);
    prev_in = in2;
    prev_out = out2;
  }
  double stored = 0;
  for (int k = 0; k < nz; ++k) {
    const double w = (k == 0 || k == nz - 1) ? 0.5 : 1.0;
    stored += w * dz * (std::norm(st.S[k]) + std::norm(st.P[k]));
  }
  const double gained = p.gamma_e / 2 * (flux_in - flux_out);
  REQUIRE(gained > 0);
  CHECK(std::fabs(stored - gained) / gained < 1e-3);
}

TEST_CASE("linearity of the input-output map") {
  Setup s = working_point(GradientOrder::eit);
  s.grid.phase_ceiling = 2.0;
  const MemoryResult r1 = run_gem(s.params, s.pulse, s.schedule, s.grid);
  SUBCASE("eta invariant under amplitude scaling") {
    Setup s2 = s;
    s2.pulse.amplitude = 2.375;
    const MemoryResult r2 = run_gem(s2.params, s2.pulse, s2.schedule, s2.grid);
    CHECK(r2.eta == doctest::Approx(r1.eta).epsilon(1e-10));
    CHECK(r2.input_energy ==
          doctest::Approx(r1.input_energy * 2.375 * 2.375).epsilon(1e-10));
  }
  SUBCASE("complex scaling of the boundary scales the output field") {
    const PhysicalParams p = make_params(100, 5.75, 0, 20, 1.0, 0.3);
    PulseSpec pulse;
    pulse.fwhm = 1.0;
    pulse.center_time = 1.2;
    const cplx scale(0.7, -0.4);
    auto e1 = [&](double t) { return pulse.envelope(t); };
    auto e2 = [&](double t) { return scale * pulse.envelope(t); };
    FieldState a = zero_state(48), b = zero_state(48);
    const double dt = 0.08 / std::fabs(p.delta_c);
    for (int i = 0; i < 500; ++i) {
      a = step(a, p, -1, true, dt, {}, e1);
      b = step(b, p, -1, true, dt, {}, e2);
    }
    for (int k : {10, 47}) {
      const cplx ratio = b.E[k] / a.E[k];
      CHECK(std::abs(ratio - scale) < 1e-10);
    }
  }
}

TEST_CASE("mirror symmetry under conjugation of the whole protocol") {
  Setup s = working_point(GradientOrder::eit, 175.0);
  Setup m = working_point(GradientOrder::eit, -175.0);
  // same order label mirrors the gradient signs; the carrier mirrors via
  // the sign of the Stark shift inside working_point
  const MemoryResult a = run_gem(s.params, s.pulse, s.schedule, s.grid);
  const MemoryResult b = run_gem(m.params, m.pulse, m.schedule, m.grid);
  CHECK(a.eta == doctest::Approx(b.eta).epsilon(1e-6));
  CHECK(a.leakage_fraction ==
        doctest::Approx(b.leakage_fraction).epsilon(1e-6));
  CHECK(a.recall_peak_time ==
        doctest::Approx(b.recall_peak_time).epsilon(1e-9));
}

TEST_CASE("gradient-order physics at the working point") {
  const Setup eit = working_point(GradientOrder::eit);
  const Setup eia = working_point(GradientOrder::eia);
  SolverOptions opts;
  opts.snapshots = true;
  const MemoryResult a =
      run_gem(eit.params, eit.pulse, eit.schedule, eit.grid, opts);
  const MemoryResult b =
      run_gem(eia.params, eia.pulse, eia.schedule, eia.grid, opts);

  // efficient order stores and recalls more
  CHECK(a.eta > b.eta);
  CHECK(a.eta > 0.5);
  // the medium is passive: recalled plus leaked energy never exceeds input
  CHECK(a.eta + a.leakage_fraction <= 1.0 + 1e-6);
  CHECK(b.eta + b.leakage_fraction <= 1.0 + 1e-6);
  // the comparison is antisymmetric in its arguments (sign of the recall
  // delay itself is regime-dependent; pinned in the acceptance suite)
  CHECK(recall_timing_compare(b, a) ==
        doctest::Approx(-recall_timing_compare(a, b)));
  // excited-state exposure is smaller for the efficient order
  CHECK(a.excited_exposure < b.excited_exposure);
  // capture before the flip is the same physics for both orders
  CHECK(a.leakage_fraction == doctest::Approx(b.leakage_fraction).epsilon(0.05));
}

TEST_CASE("grid convergence at scout resolution") {
  Setup s = working_point(GradientOrder::eit);
  const MemoryResult a = run_gem(s.params, s.pulse, s.schedule, s.grid);
  Setup fine = s;
  fine.grid.nz = 256;
  fine.grid.phase_ceiling = 0.5;
  const MemoryResult b =
      run_gem(fine.params, fine.pulse, fine.schedule, fine.grid);
  CHECK(std::fabs(a.eta - b.eta) < 1e-3);
}

TEST_CASE("efficiency on synthetic traces") {
  MemoryResult r;
  r.t_flip = 10.0;
  const int n = 2001;
  const double T = 20.0;
  PulseSpec in;
  in.fwhm = 1.0;
  in.center_time = 5.0;
  for (int i = 0; i < n; ++i) {
    const double t = T * i / (n - 1);
    r.traces.t.push_back(t);
    r.traces.e_in_sq.push_back(std::norm(in.envelope(t)));
  }
  SUBCASE("output identical to input but time-shifted gives 1") {
    for (int i = 0; i < n; ++i)
      r.traces.e_out_sq.push_back(std::norm(in.envelope(r.traces.t[i] - 10.0)));
    CHECK(efficiency(r) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("zero output gives 0") {
    r.traces.e_out_sq.assign(n, 0.0);
    CHECK(efficiency(r) == 0.0);
  }
  SUBCASE("amplitude 1/sqrt(2) gives 0.5") {
    for (int i = 0; i < n; ++i)
      r.traces.e_out_sq.push_back(
          0.5 * std::norm(in.envelope(r.traces.t[i] - 10.0)));
    CHECK(efficiency(r) == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("zero input throws") {
    r.traces.e_in_sq.assign(n, 0.0);
    r.traces.e_out_sq.assign(n, 0.0);
    CHECK_THROWS_AS(efficiency(r), std::invalid_argument);
  }
}

TEST_CASE("efficiency() matches the online integration of a real run") {
  Setup s = working_point(GradientOrder::eit);
  s.grid.phase_ceiling = 2.0;
  const MemoryResult r = run_gem(s.params, s.pulse, s.schedule, s.grid);
  CHECK(efficiency(r) == doctest::Approx(r.eta).epsilon(1e-12));
}

TEST_CASE("recall_timing_compare guards and antisymmetry") {
  MemoryResult a, b;
  a.eta = b.eta = 0.5;
  a.recall_peak_time = 22.0;
  b.recall_peak_time = 21.4;
  CHECK(recall_timing_compare(a, b) == doctest::Approx(-0.6));
  CHECK(recall_timing_compare(b, a) == doctest::Approx(0.6));
  CHECK(recall_timing_compare(a, a) == 0.0);
  b.eta = 1e-5;
  CHECK_THROWS_AS(recall_timing_compare(a, b), std::invalid_argument);
}

TEST_CASE("excited population map requires snapshots; d = 0 map is zero") {
  Setup s = working_point(GradientOrder::eit);
  s.params.d = 0.0;
  s.grid.phase_ceiling = 2.0;
  const MemoryResult no_snap = run_gem(s.params, s.pulse, s.schedule, s.grid);
  CHECK_THROWS_AS(excited_population_map(no_snap), std::invalid_argument);

  SolverOptions opts;
  opts.snapshots = true;
  opts.snapshot_nz = 32;
  opts.snapshot_nt = 16;
  const MemoryResult r = run_gem(s.params, s.pulse, s.schedule, s.grid, opts);
  const PopulationMap map = excited_population_map(r);
  CHECK(map.total_exposure == 0.0);
  REQUIRE(!map.p_sq.empty());
  for (double v : map.p_sq) CHECK(v == 0.0);
  CHECK(map.z.size() * map.t.size() == map.p_sq.size());
}

TEST_CASE("run_gem validates its preconditions") {
  Setup s = working_point(GradientOrder::eit);
  SUBCASE("zero pulse energy with atoms present") {
    s.pulse.amplitude = 0.0;
    CHECK_THROWS_AS(run_gem(s.params, s.pulse, s.schedule, s.grid),
                    std::invalid_argument);
  }
  SUBCASE("schedule must cover the grid span") {
    s.grid.t_total = s.schedule.total_time() + 5.0;
    CHECK_THROWS_AS(run_gem(s.params, s.pulse, s.schedule, s.grid),
                    std::invalid_argument);
  }
  SUBCASE("schedule without a flip is rejected") {
    s.schedule.segments = {{0, s.grid.t_total, -1, true}};
    CHECK_THROWS_AS(run_gem(s.params, s.pulse, s.schedule, s.grid),
                    std::invalid_argument);
  }
}
