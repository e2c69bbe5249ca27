#include "heatfield/constants.hpp"

#include <cmath>

namespace heatfield::constants {

double alpha_H(double H) { return H * (2.0 * H - 1.0); }

double sphere_area(int d) {
  return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double fourier_norm(int d) { return std::pow(2.0 * pi, -d); }

double solution_prefactor(const ModelParams& p) {
  return alpha_H(p.H) * fourier_norm(p.d);
}

double fractional_spectral_constant(double H) {
  return std::pow(2.0, 2.0 * H - 2.0) * std::tgamma(H - 0.5) /
         (std::sqrt(pi) * std::tgamma(1.0 - H));
}

double riesz_gaussian_moment(const ModelParams& p) {
  const double half = 0.5 * p.codim();
  return sphere_area(p.d) * std::pow(2.0, half - 1.0) * std::tgamma(half);
}

double riesz_resolvent_integral(const ModelParams& p) {
  // int_0^inf r^{q-1} / (1 + r^4/4) dr with q = d - alpha; substituting
  // x = r^4/4 turns it into a Beta integral.
  const double q = p.codim();
  return sphere_area(p.d) * std::pow(4.0, q / 4.0) * pi /
         (4.0 * std::sin(pi * q / 4.0));
}

double pinned_density_amplitude(const ModelParams& p) {
  return solution_prefactor(p) * fractional_spectral_constant(p.H) *
         riesz_resolvent_integral(p);
}

double one_minus_cos_moment(double s) {
  return pi / (2.0 * std::tgamma(1.0 + s) * std::sin(pi * s / 2.0));
}

double fbm_variance_from_density(double c, double gamma) {
  return 4.0 * c * one_minus_cos_moment(2.0 * gamma);
}

double printed_pinned_density_amplitude(const ModelParams& p) {
  const double H = p.H;
  return alpha_H(H) * std::pow(2.0, 2.0 * H - 1.0) * std::tgamma(H - 0.5) /
         (std::pow(2.0 * pi, p.d + 0.5) * std::tgamma(1.0 - H)) *
         riesz_resolvent_integral(p);
}

double printed_c0_squared(const ModelParams& p) {
  const double H = p.H;
  const double num = std::pow(2.0 * pi, -p.d + 0.5) * alpha_H(H) *
                     std::pow(2.0, 2.0 * H - 1.0) * std::tgamma(H - 0.5);
  const double den = std::sin(pi * (p.d - (H - p.alpha) / 4.0)) *
                     std::tgamma(1.0 + 2.0 * H - p.codim() / 2.0) *
                     std::tgamma(1.0 - H);
  return num / den * riesz_resolvent_integral(p);
}

double riesz_real_constant(const ModelParams& p) {
  return std::pow(2.0, p.codim()) * std::pow(pi, 0.5 * p.d) *
         std::tgamma(0.5 * p.codim()) / std::tgamma(0.5 * p.alpha);
}

}  // namespace heatfield::constants
