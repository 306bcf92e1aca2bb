// SPDX-License-Identifier: Apache-2.0
// Step-kernel benchmark: serial vs OpenMP backends over a range of grid
// sizes. The two backends run the identical arithmetic, so the checksum
// column must match bitwise.
#include <chrono>
#include <cstdio>
#include <vector>

#include "gem/core.hpp"
#include "gem/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace gem;
using kernels::cplx;

namespace {

double run_steps(int nz, int nsteps, bool parallel, double& checksum) {
  PhysicalParams p = make_params(400, 5.75, 0, 175, 8, 0.26);
  std::vector<double> gz(nz);
  const double dz = 1.0 / (nz - 1);
  for (int k = 0; k < nz; ++k) gz[k] = p.bandwidth * (0.5 - k * dz);

  kernels::StageCoeffs c;
  c.gz = gz.data();
  c.nz = nz;
  c.dz = dz;
  c.gamma_s = p.gamma_s;
  c.p_re = -0.5 * p.gamma_e;
  c.p_im = p.delta_c;
  c.om_half = 0.5 * p.rabi;
  c.drive = 0.5 * p.gamma_e * std::sqrt(p.d / 2.0);
  c.couple = std::sqrt(p.d / 2.0);

  std::vector<cplx> S(nz, cplx(1e-3, 0)), P(nz, 0.0);
  kernels::StepWorkspace ws;
  ws.resize(nz);
  PulseSpec pulse;
  pulse.fwhm = 5;
  pulse.center_time = 6.5;
  auto ein = [&](double t) { return pulse.envelope(t); };
  const double dt = 1e-3;

  const auto t0 = std::chrono::steady_clock::now();
  for (int n = 0; n < nsteps; ++n) {
    const double t = n * dt;
    kernels::field_from_polarization(c, P.data(), ein(t), ws.E1.data());
    kernels::rk4_step(c, S.data(), P.data(), t, dt, ein, ws.E1.data(), ws,
                      parallel);
  }
  const auto t1 = std::chrono::steady_clock::now();
  checksum = 0;
  for (int k = 0; k < nz; ++k) checksum += std::norm(S[k]) + std::norm(P[k]);
  return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
  int nsteps = argc > 1 ? std::atoi(argv[1]) : 20000;
#ifdef _OPENMP
  printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  printf("OpenMP not enabled; parallel column runs serial code\n");
#endif
  printf("%8s %10s %12s %12s %9s %s\n", "nz", "steps", "serial st/s",
         "omp st/s", "speedup", "checksum match");
  for (int nz : {256, 1024, 4096, 16384}) {
    const int steps = std::max(200, nsteps * 256 / nz);
    double cs_serial = 0, cs_par = 0;
    const double ts = run_steps(nz, steps, false, cs_serial);
    const double tp = run_steps(nz, steps, true, cs_par);
    printf("%8d %10d %12.0f %12.0f %8.2fx %s\n", nz, steps, steps / ts,
           steps / tp, ts / tp, cs_serial == cs_par ? "yes" : "NO");
  }
  return 0;
}
