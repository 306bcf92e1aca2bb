// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gem/units.hpp"

namespace gem {

/// Atomic/optical constants for one run. All frequencies are angular
/// (rad/us); construct from MHz inputs via make_params.
struct PhysicalParams {
  double d = 0.0;         // optical depth, dimensionless
  double gamma_e = 0.0;   // excited-state linewidth (rad/us)
  double gamma_s = 0.0;   // spinwave dephasing rate (rad/us)
  double delta_c = 0.0;   // control detuning, signed (rad/us)
  double rabi = 0.0;      // control Rabi frequency (rad/us)
  double bandwidth = 0.0; // total gradient span across the ensemble (rad/us)

  void validate() const;
};

/// Builds PhysicalParams from plain-MHz inputs. Each frequency is multiplied
/// by 2*pi exactly once.
PhysicalParams make_params(double d, double gamma_e_mhz, double gamma_s_mhz,
                           double delta_c_mhz, double rabi_mhz,
                           double bandwidth_mhz);

enum class PulseShape { gaussian };

/// Signal envelope definition. The envelope is
///   E_in(t) = amplitude * exp(-4 ln2 (t-t0)^2 / fwhm^2) * exp(-i delta0 (t-t0))
/// with delta0 the carrier offset from the nominal memory center.
struct PulseSpec {
  PulseShape shape = PulseShape::gaussian;
  double fwhm = 0.0;           // us
  double carrier_offset = 0.0; // rad/us
  double center_time = 0.0;    // us
  double amplitude = 1.0;      // peak envelope, dimensionless

  void validate() const;
  std::complex<double> envelope(double t) const;
};

/// Analytic input energy integral |E_in|^2 dt. For the Gaussian:
/// amplitude^2 * fwhm * sqrt(pi / (8 ln2)).
double pulse_energy(const PulseSpec& pulse);

/// One contiguous piece of the gradient/control program.
struct ProtocolSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  int gradient_sign = +1; // +1 or -1
  bool control_on = true;
};

/// Which spectral side the signal traverses around the Raman line.
/// `eit` is the efficient order, `eia` the lossy one.
enum class GradientOrder { eit, eia };

const char* to_string(GradientOrder order);

/// Time-segmented gradient sign and control-field program over [0, T].
/// Segments must be contiguous, non-overlapping and cover the full span.
struct ProtocolSchedule {
  std::vector<ProtocolSegment> segments;

  void validate() const;
  double total_time() const;
  /// Time of the first gradient sign change. Throws if the sign never flips.
  double flip_time() const;
  /// True when the gradient sign changes more than once (permitted, flagged).
  bool multi_flip() const;
};

/// Timing knobs for the standard two-sign protocol: write with the control
/// on, optional hold with the control off, flip, read with the control on.
struct ProtocolTimings {
  double t_flip = 0.0;     // us
  double t_total = 0.0;    // us
  double t_ctrl_off = -1;  // start of the hold; <0 means no hold
};

/// Builds the baseline single-flip schedule for the requested order.
/// For delta_c > 0 the efficient (eit) order writes with gradient -1 and
/// reads with +1; the mapping mirrors with the sign of delta_c.
ProtocolSchedule make_standard_schedule(GradientOrder order, double delta_c,
                                        const ProtocolTimings& timings);

/// Spatial/temporal discretization. nt == 0 selects the automatic step from
/// phase_ceiling: dt * max(|delta_c|, BW/2, rabi) <= phase_ceiling.
struct SolverGrid {
  int nz = 256;
  int nt = 0;
  double t_total = 0.0;          // us
  double phase_ceiling = 0.1;    // rad per step, used when nt == 0

  void validate() const;
  void validate_against(const PhysicalParams& params) const;
  double dz() const { return 1.0 / (nz - 1); }
};

} // namespace gem
