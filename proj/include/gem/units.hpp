// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

namespace gem {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Internal unit system: angular frequencies in rad/us, time in us,
// z dimensionless on [-1/2, +1/2].
inline constexpr double mhz_to_rad_us(double mhz) { return two_pi * mhz; }
inline constexpr double rad_us_to_mhz(double rad_us) { return rad_us / two_pi; }

} // namespace gem
