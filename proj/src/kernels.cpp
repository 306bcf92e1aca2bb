// SPDX-License-Identifier: Apache-2.0
#include "gem/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gem::kernels {

void field_from_polarization(const StageCoeffs& c, const cplx* P, cplx ein,
                             cplx* E) {
  const double h = c.couple * c.dz / 2.0; // i*h per trapezoid panel
  double er = ein.real(), ei = ein.imag();
  E[0] = ein;
  for (int k = 1; k < c.nz; ++k) {
    const double pr = P[k - 1].real() + P[k].real();
    const double pi = P[k - 1].imag() + P[k].imag();
    er -= h * pi;
    ei += h * pr;
    E[k] = cplx(er, ei);
  }
}

namespace {

// dS = (-gamma_s + i gz) S + i om P   [om = om_half]
// dP = (p_re + i p_im) P + i om S + i drive E
template <bool Init>
inline void stage_body(const StageCoeffs& c, int k,
                       const cplx* __restrict Sst, const cplx* __restrict Pst,
                       const cplx* __restrict E, const cplx* __restrict Sbase,
                       const cplx* __restrict Pbase, double w_acc,
                       double a_next, cplx* __restrict accS,
                       cplx* __restrict accP, cplx* __restrict Sn,
                       cplx* __restrict Pn) {
  const double sr = Sst[k].real(), si = Sst[k].imag();
  const double pr = Pst[k].real(), pi = Pst[k].imag();
  const double er = E[k].real(), ei = E[k].imag();
  const double g = c.gz[k];
  const double dSr = -c.gamma_s * sr - g * si - c.om_half * pi;
  const double dSi = g * sr - c.gamma_s * si + c.om_half * pr;
  const double dPr = c.p_re * pr - c.p_im * pi - c.om_half * si - c.drive * ei;
  const double dPi = c.p_im * pr + c.p_re * pi + c.om_half * sr + c.drive * er;
  if (Init) {
    accS[k] = cplx(w_acc * dSr, w_acc * dSi);
    accP[k] = cplx(w_acc * dPr, w_acc * dPi);
  } else {
    accS[k] += cplx(w_acc * dSr, w_acc * dSi);
    accP[k] += cplx(w_acc * dPr, w_acc * dPi);
  }
  Sn[k] = Sbase[k] + cplx(a_next * dSr, a_next * dSi);
  Pn[k] = Pbase[k] + cplx(a_next * dPr, a_next * dPi);
}

template <bool Init>
void stage_loop(const StageCoeffs& c, const cplx* Sst, const cplx* Pst,
                const cplx* E, const cplx* Sbase, const cplx* Pbase,
                double w_acc, double a_next, cplx* accS, cplx* accP, cplx* Sn,
                cplx* Pn, bool parallel) {
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < c.nz; ++k)
      stage_body<Init>(c, k, Sst, Pst, E, Sbase, Pbase, w_acc, a_next, accS,
                       accP, Sn, Pn);
  } else {
    for (int k = 0; k < c.nz; ++k)
      stage_body<Init>(c, k, Sst, Pst, E, Sbase, Pbase, w_acc, a_next, accS,
                       accP, Sn, Pn);
  }
}

inline void finish_body(const StageCoeffs& c, int k,
                        const cplx* __restrict Sst, const cplx* __restrict Pst,
                        const cplx* __restrict E, double w_acc,
                        const cplx* __restrict accS,
                        const cplx* __restrict accP, cplx* __restrict S,
                        cplx* __restrict P) {
  const double sr = Sst[k].real(), si = Sst[k].imag();
  const double pr = Pst[k].real(), pi = Pst[k].imag();
  const double er = E[k].real(), ei = E[k].imag();
  const double g = c.gz[k];
  const double dSr = -c.gamma_s * sr - g * si - c.om_half * pi;
  const double dSi = g * sr - c.gamma_s * si + c.om_half * pr;
  const double dPr = c.p_re * pr - c.p_im * pi - c.om_half * si - c.drive * ei;
  const double dPi = c.p_im * pr + c.p_re * pi + c.om_half * sr + c.drive * er;
  S[k] += accS[k] + cplx(w_acc * dSr, w_acc * dSi);
  P[k] += accP[k] + cplx(w_acc * dPr, w_acc * dPi);
}

} // namespace

void rk4_stage(const StageCoeffs& c, const cplx* Sst, const cplx* Pst,
               const cplx* E, const cplx* Sbase, const cplx* Pbase,
               double w_acc, bool init_acc, double a_next, cplx* accS,
               cplx* accP, cplx* Sn, cplx* Pn, bool parallel) {
  if (init_acc)
    stage_loop<true>(c, Sst, Pst, E, Sbase, Pbase, w_acc, a_next, accS, accP,
                     Sn, Pn, parallel);
  else
    stage_loop<false>(c, Sst, Pst, E, Sbase, Pbase, w_acc, a_next, accS, accP,
                      Sn, Pn, parallel);
}

void rk4_finish(const StageCoeffs& c, const cplx* Sst, const cplx* Pst,
                const cplx* E, double w_acc, const cplx* accS,
                const cplx* accP, cplx* S, cplx* P, bool parallel) {
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < c.nz; ++k)
      finish_body(c, k, Sst, Pst, E, w_acc, accS, accP, S, P);
  } else {
    for (int k = 0; k < c.nz; ++k)
      finish_body(c, k, Sst, Pst, E, w_acc, accS, accP, S, P);
  }
}

double excited_population_z_integral(const StageCoeffs& c, const cplx* P) {
  double sum = 0.0;
  for (int k = 0; k < c.nz; ++k) {
    const double w = (k == 0 || k == c.nz - 1) ? 0.5 : 1.0;
    sum += w * std::norm(P[k]);
  }
  return sum * c.dz;
}

} // namespace gem::kernels
