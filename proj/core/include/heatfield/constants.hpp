#pragma once

// Every normalization constant used by the covariance engine lives here.
// Other translation units must not re-derive any of these factors.

#include "heatfield/model.hpp"

namespace heatfield::constants {

inline constexpr double pi = 3.14159265358979323846;

/// alpha_H = H (2H - 1).
double alpha_H(double H);

/// Surface measure of the unit sphere S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
/// (2, 2 pi, 4 pi for d = 1, 2, 3.)
double sphere_area(int d);

/// Fourier normalization (2 pi)^{-d}.
double fourier_norm(int d);

/// alpha_H (2 pi)^{-d}: prefactor of every mu-integral of the solution.
double solution_prefactor(const ModelParams& p);

/// Spectral constant of the fractional kernel |x|^{2H-2}:
///   int int phi(u) |u - v|^{2H-2} phi(v) du dv
///       = A_H int |tau|^{1-2H} |F phi(tau)|^2 d tau,
/// A_H = 2^{2H-2} Gamma(H - 1/2) / (sqrt(pi) Gamma(1 - H)).
double fractional_spectral_constant(double H);

/// Gaussian radial moment for the Riesz weight:
///   int_{R^d} |xi|^{-alpha} exp(-a |xi|^2 / 2) d xi = K_{d,alpha} a^{-(d-alpha)/2},
/// K_{d,alpha} = |S^{d-1}| 2^{(d-alpha)/2 - 1} Gamma((d - alpha)/2).
double riesz_gaussian_moment(const ModelParams& p);

/// J(d, alpha) = int_{R^d} d eta / (|eta|^alpha (1 + |eta|^4 / 4))
///             = |S^{d-1}| 4^{(d-alpha)/4} pi / (4 sin(pi (d-alpha)/4)).
double riesz_resolvent_integral(const ModelParams& p);

/// Amplitude c of the pinned-string spectral density f_U(tau) = c |tau|^{-(1+2 gamma)}
/// for the Riesz kernel: c = alpha_H (2 pi)^{-d} A_H J(d, alpha).
double pinned_density_amplitude(const ModelParams& p);

/// int_0^inf (1 - cos x) x^{-1-s} dx = pi / (2 Gamma(1+s) sin(pi s / 2)), 0 < s < 2.
double one_minus_cos_moment(double s);

/// Variance scale of fBm with spectral density c |tau|^{-(1+2 gamma)} on R:
///   int_R 2 (1 - cos tau) c |tau|^{-(1+2 gamma)} d tau = 4 c one_minus_cos_moment(2 gamma).
double fbm_variance_from_density(double c, double gamma);

/// Constant of the displayed Riesz closed form of f_U, kept for comparison:
///   alpha_H 2^{2H-1} Gamma(H-1/2) / ((2 pi)^{d+1/2} Gamma(1-H)) J(d, alpha).
double printed_pinned_density_amplitude(const ModelParams& p);

/// The displayed expression for C_0^2, kept for comparison only:
///   (2 pi)^{-d+1/2} alpha_H 2^{2H-1} Gamma(H-1/2) J(d, alpha)
///   / (sin(pi (d - (H - alpha)/4)) Gamma(1 + 2H - (d-alpha)/2) Gamma(1-H)).
double printed_c0_squared(const ModelParams& p);

/// gamma_{alpha,d} = 2^{d-alpha} pi^{d/2} Gamma((d-alpha)/2) / Gamma(alpha/2).
double riesz_real_constant(const ModelParams& p);

}  // namespace heatfield::constants
