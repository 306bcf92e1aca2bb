// SPDX-License-Identifier: Apache-2.0
#include "gem/spectrum.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "gem/quadrature.hpp"

namespace gem {

using cplx = std::complex<double>;

double GradientOrderEffect::closed_applied(GradientOrder order) const {
  const double mag = std::fabs(g_closed);
  return order == GradientOrder::eit ? mag : -mag;
}

double GradientOrderEffect::numeric_applied(GradientOrder order) const {
  const double mag = std::fabs(g_numeric);
  return order == GradientOrder::eit ? mag : -mag;
}

double alpha(const PhysicalParams& p, double delta_s) {
  p.validate();
  const double delta = delta_s - p.delta_c;
  const double w2 = p.rabi * p.rabi;
  const double num =
      p.gamma_e * (p.d / 2.0) *
      (8.0 * delta * delta * p.gamma_e +
       2.0 * p.gamma_s * (w2 + p.gamma_s * p.gamma_e));
  const cplx den = cplx(w2, 0.0) + cplx(p.gamma_e, 2.0 * (p.delta_c + delta)) *
                                       cplx(p.gamma_s, 2.0 * delta);
  const double den2 = std::norm(den);
  if (den2 == 0.0)
    throw std::domain_error("alpha: response denominator vanished");
  return num / den2;
}

namespace {

// |W^2 + (Gamma + 2i(delta_c + delta)) * 2i*delta|^2, the gamma_s = 0
// denominator whose minimum locates the Raman line.
double denom_mod2(const PhysicalParams& p, double delta) {
  const cplx den = cplx(p.rabi * p.rabi, 0.0) +
                   cplx(p.gamma_e, 2.0 * (p.delta_c + delta)) * cplx(0.0, 2.0 * delta);
  return std::norm(den);
}

// Exact root of the real part: delta* = sign(dc) (sqrt(dc^2+W^2) - |dc|)/2.
double stark_root(const PhysicalParams& p) {
  const double adc = std::fabs(p.delta_c);
  const double r = (std::hypot(p.delta_c, p.rabi) - adc) / 2.0;
  return p.delta_c >= 0 ? r : -r;
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

void require_dc(const PhysicalParams& p) {
  if (p.delta_c == 0.0)
    throw std::invalid_argument("operation requires delta_c != 0");
}

} // namespace

double raman_line_center(const PhysicalParams& p) {
  p.validate();
  if (p.rabi == 0.0) return p.delta_c; // bare two-photon resonance
  require_dc(p);
  const double guess = stark_root(p);
  const double lo = std::min(0.25 * guess, 1.75 * guess);
  const double hi = std::max(0.25 * guess, 1.75 * guess);
  const double delta =
      golden_min([&](double x) { return denom_mod2(p, x); }, lo, hi,
                 std::fabs(guess) * 1e-12 + 1e-300);
  return p.delta_c + delta;
}

double far_lorentzian_fwhm(const PhysicalParams& p) {
  p.validate();
  require_dc(p);
  if (p.rabi == 0.0)
    throw std::invalid_argument("far Lorentzian undefined for rabi = 0");
  const double ds = std::fabs(stark_root(p));
  return p.gamma_e * ds / std::hypot(p.delta_c, p.rabi);
}

double alpha_far_lorentzian(const PhysicalParams& p, double delta_s) {
  const double hwhm = far_lorentzian_fwhm(p) / 2.0;
  const double center = raman_line_center(p);
  const double u = delta_s - center;
  return p.d * hwhm * hwhm / (u * u + hwhm * hwhm);
}

double alpha_prime(const PhysicalParams& p, double delta_s) {
  return alpha(p, delta_s) - alpha_far_lorentzian(p, delta_s);
}

double leakage_loss(const PhysicalParams& p) {
  p.validate();
  require_dc(p);
  const double x = std::numbers::pi * p.gamma_e * p.rabi * p.rabi * p.d /
                   (p.bandwidth * p.delta_c * p.delta_c);
  return std::exp(-x);
}

double scatter_loss(const PhysicalParams& p) {
  p.validate();
  require_dc(p);
  const double x = std::numbers::pi * p.gamma_e * p.rabi * p.rabi /
                   (p.bandwidth * p.delta_c * p.delta_c);
  return 1.0 - std::exp(-x);
}

LossBudget loss_budget(const PhysicalParams& p) {
  LossBudget b;
  b.l_leakage = leakage_loss(p);
  b.l_scatter = scatter_loss(p);
  b.product_efficiency = (1.0 - b.l_leakage) * (1.0 - b.l_scatter);
  return b;
}

namespace {

double omega_from_constant(double d, double gamma_e, double bandwidth,
                           double delta_c, double constant) {
  if (!(d > 0)) throw std::invalid_argument("omega_for_optimal requires d > 0");
  if (!(gamma_e > 0) || !(bandwidth > 0))
    throw std::invalid_argument("omega_for_optimal requires positive gamma_e, BW");
  if (delta_c == 0.0)
    throw std::invalid_argument("omega_for_optimal requires delta_c != 0");
  return std::fabs(delta_c) *
         std::sqrt(bandwidth * constant / (std::numbers::pi * gamma_e * d));
}

} // namespace

double omega_for_optimal(double d, double gamma_e, double bandwidth,
                         double delta_c) {
  return omega_from_constant(d, gamma_e, bandwidth, delta_c, std::numbers::ln2);
}

double omega_for_optimal_numeric(double d, double gamma_e, double bandwidth,
                                 double delta_c) {
  return omega_from_constant(d, gamma_e, bandwidth, delta_c, std::log1p(d));
}

GradientOrderEffect gradient_order_effect_closed(double d, double delta_gamma) {
  if (!(d > 0))
    throw std::invalid_argument("gradient_order_effect_closed requires d > 0");
  if (!(delta_gamma > 0))
    throw std::invalid_argument("gradient_order_effect_closed requires delta_gamma > 0");
  const double ln4 = std::log(4.0);
  const double g =
      d / (2.0 * std::numbers::pi * delta_gamma * delta_gamma) +
      ln4 * (1.0 + (2.0 / (std::numbers::pi * delta_gamma)) *
                       (std::log(ln4 / d) -
                        delta_gamma * std::atan(2.0 * delta_gamma)));
  GradientOrderEffect e;
  e.g_closed = g;
  return e;
}

double gradient_half_band_integral(const PhysicalParams& p, GradientOrder side,
                                   double rel_tol) {
  p.validate();
  if (p.rabi == 0.0) return 0.0; // no Raman line, no EIT
  require_dc(p);
  const double center = raman_line_center(p);
  const double hwhm = far_lorentzian_fwhm(p) / 2.0;
  // EIT lies between the line and the bare two-photon resonance: below the
  // line for delta_c > 0, above it for delta_c < 0.
  const bool below = (side == GradientOrder::eit) == (p.delta_c > 0);
  // ascending window [a, b] with a midpoint isolating the line core
  const double a = below ? center - p.bandwidth / 2.0 : center;
  const double b = below ? center : center + p.bandwidth / 2.0;
  const double m = below ? center - 50.0 * hwhm : center + 50.0 * hwhm;
  auto f = [&](double ds) { return alpha_prime(p, ds); };
  const double abs_tol = 1e-14 * p.d * p.bandwidth + 1e-300;
  const double integral = integrate_gk_checked(f, a, m, rel_tol, abs_tol) +
                          integrate_gk_checked(f, m, b, rel_tol, abs_tol);
  return -2.0 * integral / p.bandwidth;
}

GradientOrderEffect gradient_order_effect_numeric(const PhysicalParams& p,
                                                  double rel_tol) {
  GradientOrderEffect e;
  e.g_numeric = gradient_half_band_integral(p, GradientOrder::eit, rel_tol);
  return e;
}

double predicted_near_efficiency(double eta_far, double g, bool* clamped) {
  if (!(eta_far >= 0.0 && eta_far <= 1.0))
    throw std::invalid_argument("eta_far must lie in [0, 1]");
  const double eta = std::exp(g) * eta_far;
  if (clamped) *clamped = eta > 1.0;
  return eta > 1.0 ? 1.0 : eta;
}

std::vector<AbsorptionPoint> alpha_scan(const PhysicalParams& p,
                                        double delta_s_min, double delta_s_max,
                                        int n_points) {
  if (n_points < 2) throw std::invalid_argument("alpha_scan needs >= 2 points");
  std::vector<AbsorptionPoint> out;
  out.reserve(n_points);
  const double h = (delta_s_max - delta_s_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double ds = delta_s_min + i * h;
    out.push_back({ds, alpha(p, ds)});
  }
  return out;
}

} // namespace gem
