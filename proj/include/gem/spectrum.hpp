// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "gem/core.hpp"

namespace gem {

/// One sample of the two-level+control absorption spectrum: transmission
/// through the full ensemble is exp(-alpha).
struct AbsorptionPoint {
  double delta_s = 0.0; // signal detuning (rad/us)
  double alpha = 0.0;   // dimensionless absorption exponent, >= 0
};

struct LossBudget {
  double l_leakage = 0.0;
  double l_scatter = 0.0;
  double product_efficiency = 0.0; // (1 - l_leakage)(1 - l_scatter)
};

enum class SignConvention { eit_positive };

/// Gradient-order effect from the two routes: the closed form and the
/// half-band quadrature of -2*alpha'. Both store the raw route values;
/// applied() attaches the reporting convention (EIT order positive).
struct GradientOrderEffect {
  double g_closed = 0.0;
  double g_numeric = 0.0;
  SignConvention sign_convention = SignConvention::eit_positive;

  double closed_applied(GradientOrder order) const;
  double numeric_applied(GradientOrder order) const;
};

/// Absorption exponent at signal detuning delta_s (3-level steady state,
/// strong control). The two-photon detuning is delta = delta_s - delta_c.
/// Non-negative for gamma_s >= 0; exactly zero at delta = 0 when
/// gamma_s = 0 (complete transparency).
double alpha(const PhysicalParams& params, double delta_s);

/// Signal detuning of the Raman absorption line center, located numerically
/// as the minimizer of the coupled-response denominator modulus. This is the
/// AC-Stark-shifted two-photon resonance, delta ~ rabi^2/(4 delta_c) above
/// the bare resonance.
double raman_line_center(const PhysicalParams& params);

/// FWHM of the far-detuned limit of the Raman line. Leading order
/// gamma_e * rabi^2 / (4 delta_c^2); the full expression keeps the exact
/// AC-Stark root. (Equivalent to gamma_e * W^2 / delta_c^2 when W is read
/// as the half-Rabi coupling.)
double far_lorentzian_fwhm(const PhysicalParams& params);

/// Symmetric Lorentzian limit of the Raman line: height d, FWHM
/// far_lorentzian_fwhm, centered on raman_line_center. Requires
/// delta_c != 0 and rabi > 0.
double alpha_far_lorentzian(const PhysicalParams& params, double delta_s);

/// alpha - alpha_far_lorentzian: negative in the EIT window, positive in the
/// EIA wing, with a constant resonant-tail offset at small detuning.
double alpha_prime(const PhysicalParams& params, double delta_s);

/// Fraction of signal energy transmitted unabsorbed during storage:
/// exp(-pi Gamma W^2 d / (BW delta_c^2)). Note that at the omega_for_optimal
/// working point the exponent is exactly ln 2, i.e. the leakage factor is
/// 0.5; see omega_for_optimal_numeric for the product-maximizing constant.
double leakage_loss(const PhysicalParams& params);

/// Control-field scattering loss: 1 - exp(-pi Gamma W^2 / (BW delta_c^2)).
double scatter_loss(const PhysicalParams& params);

LossBudget loss_budget(const PhysicalParams& params);

/// Rabi frequency satisfying pi Gamma W^2/(BW delta_c^2) = ln2 / d
/// (the stated optimal-parameter constraint).
double omega_for_optimal(double d, double gamma_e, double bandwidth,
                         double delta_c);

/// Rabi frequency that actually maximizes (1-L_leakage)(1-L_scatter):
/// the constraint constant is ln(d+1)/d rather than ln2/d.
double omega_for_optimal_numeric(double d, double gamma_e, double bandwidth,
                                 double delta_c);

/// Closed-form gradient-order effect in terms of d and
/// delta_gamma = delta_c / gamma_e. Valid for d, delta_gamma >> 1 with
/// d below ~delta_gamma^2; returns the raw formula value in g_closed.
GradientOrderEffect gradient_order_effect_closed(double d, double delta_gamma);

/// Half-bandwidth quadrature route: g = -(2/BW) * int alpha' over the half
/// window [center - BW/2, center] on the EIT side of the Raman line
/// (mirrored for delta_c < 0). Result in g_numeric; zero when rabi == 0.
GradientOrderEffect gradient_order_effect_numeric(const PhysicalParams& params,
                                                  double rel_tol = 1e-6);

/// Same integral over a selected side (eit or eia half of the window).
double gradient_half_band_integral(const PhysicalParams& params,
                                   GradientOrder side, double rel_tol = 1e-6);

/// eta_near = exp(g) * eta_far, clamped to 1. clamped (when non-null) is set
/// when the prediction exceeded 1.
double predicted_near_efficiency(double eta_far, double g,
                                 bool* clamped = nullptr);

/// Uniform spectrum scan over [delta_s_min, delta_s_max].
std::vector<AbsorptionPoint> alpha_scan(const PhysicalParams& params,
                                        double delta_s_min, double delta_s_max,
                                        int n_points);

} // namespace gem
