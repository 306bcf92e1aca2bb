// SPDX-License-Identifier: Apache-2.0
#include "gem/core.hpp"

#include <algorithm>
#include <cmath>

namespace gem {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " must be finite");
}

} // namespace

void PhysicalParams::validate() const {
  require_finite(d, "d");
  require_finite(gamma_e, "gamma_e");
  require_finite(gamma_s, "gamma_s");
  require_finite(delta_c, "delta_c");
  require_finite(rabi, "rabi");
  require_finite(bandwidth, "bandwidth");
  if (d < 0) throw std::invalid_argument("optical depth d must be >= 0");
  if (gamma_e <= 0) throw std::invalid_argument("gamma_e must be > 0");
  if (gamma_s < 0) throw std::invalid_argument("gamma_s must be >= 0");
  if (rabi < 0) throw std::invalid_argument("rabi must be >= 0");
  if (bandwidth <= 0) throw std::invalid_argument("bandwidth must be > 0");
}

PhysicalParams make_params(double d, double gamma_e_mhz, double gamma_s_mhz,
                           double delta_c_mhz, double rabi_mhz,
                           double bandwidth_mhz) {
  PhysicalParams p;
  p.d = d;
  p.gamma_e = mhz_to_rad_us(gamma_e_mhz);
  p.gamma_s = mhz_to_rad_us(gamma_s_mhz);
  p.delta_c = mhz_to_rad_us(delta_c_mhz);
  p.rabi = mhz_to_rad_us(rabi_mhz);
  p.bandwidth = mhz_to_rad_us(bandwidth_mhz);
  p.validate();
  return p;
}

void PulseSpec::validate() const {
  require_finite(fwhm, "fwhm");
  require_finite(carrier_offset, "carrier_offset");
  require_finite(center_time, "center_time");
  require_finite(amplitude, "amplitude");
  if (fwhm <= 0) throw std::invalid_argument("pulse fwhm must be > 0");
  if (amplitude < 0) throw std::invalid_argument("pulse amplitude must be >= 0");
}

std::complex<double> PulseSpec::envelope(double t) const {
  const double x = (t - center_time) / fwhm;
  const double mag = amplitude * std::exp(-4.0 * std::numbers::ln2 * x * x);
  const double phase = -carrier_offset * (t - center_time);
  return std::polar(mag, phase);
}

double pulse_energy(const PulseSpec& pulse) {
  pulse.validate();
  return pulse.amplitude * pulse.amplitude * pulse.fwhm *
         std::sqrt(std::numbers::pi / (8.0 * std::numbers::ln2));
}

const char* to_string(GradientOrder order) {
  return order == GradientOrder::eit ? "eit" : "eia";
}

void ProtocolSchedule::validate() const {
  if (segments.empty())
    throw std::invalid_argument("schedule has no segments");
  const double eps = 1e-9;
  if (std::fabs(segments.front().t_start) > eps)
    throw std::invalid_argument("schedule must start at t = 0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!std::isfinite(s.t_start) || !std::isfinite(s.t_end))
      throw std::invalid_argument("segment times must be finite");
    if (s.t_end <= s.t_start + eps)
      throw std::invalid_argument("segment has non-positive duration");
    if (s.gradient_sign != 1 && s.gradient_sign != -1)
      throw std::invalid_argument("gradient_sign must be +1 or -1");
    if (i > 0 && std::fabs(s.t_start - segments[i - 1].t_end) > eps)
      throw std::invalid_argument("segments must be contiguous (gap or overlap)");
  }
}

double ProtocolSchedule::total_time() const {
  validate();
  return segments.back().t_end;
}

double ProtocolSchedule::flip_time() const {
  validate();
  for (std::size_t i = 1; i < segments.size(); ++i)
    if (segments[i].gradient_sign != segments[i - 1].gradient_sign)
      return segments[i].t_start;
  throw std::invalid_argument("schedule never flips the gradient sign");
}

bool ProtocolSchedule::multi_flip() const {
  validate();
  int flips = 0;
  for (std::size_t i = 1; i < segments.size(); ++i)
    if (segments[i].gradient_sign != segments[i - 1].gradient_sign) ++flips;
  return flips > 1;
}

ProtocolSchedule make_standard_schedule(GradientOrder order, double delta_c,
                                        const ProtocolTimings& t) {
  if (t.t_flip <= 0 || t.t_total <= t.t_flip)
    throw std::invalid_argument("need 0 < t_flip < t_total");
  // Efficient order for delta_c > 0: write -1, read +1; mirrored for
  // negative detuning (the spectrum mirrors with the sign of delta_c).
  int write_sign = (delta_c >= 0) ? -1 : +1;
  if (order == GradientOrder::eia) write_sign = -write_sign;
  const int read_sign = -write_sign;

  ProtocolSchedule sched;
  if (t.t_ctrl_off > 0 && t.t_ctrl_off < t.t_flip) {
    sched.segments = {{0.0, t.t_ctrl_off, write_sign, true},
                      {t.t_ctrl_off, t.t_flip, write_sign, false},
                      {t.t_flip, t.t_total, read_sign, true}};
  } else {
    sched.segments = {{0.0, t.t_flip, write_sign, true},
                      {t.t_flip, t.t_total, read_sign, true}};
  }
  sched.validate();
  return sched;
}

void SolverGrid::validate() const {
  if (nz < 2) throw std::invalid_argument("grid nz must be >= 2");
  if (nt != 0 && nt < 2) throw std::invalid_argument("grid nt must be 0 (auto) or >= 2");
  if (!(t_total > 0)) throw std::invalid_argument("grid t_total must be > 0");
  if (!(phase_ceiling > 0)) throw std::invalid_argument("phase ceiling must be > 0");
}

void SolverGrid::validate_against(const PhysicalParams& params) const {
  validate();
  if (nt == 0) return; // automatic step satisfies the ceiling by construction
  const double dt = t_total / (nt - 1);
  const double wmax = std::max({std::fabs(params.delta_c), params.bandwidth / 2.0,
                                params.rabi});
  if (dt * wmax > phase_ceiling)
    throw std::invalid_argument("grid nt too coarse: dt*max(|delta_c|,BW/2,rabi) "
                                "exceeds the phase ceiling");
}

} // namespace gem
