#pragma once

// Covariances, variograms and spectral densities of the solution field
// u(t, x) of du = (1/2) Laplace(u) dt + dW^H with vanishing initial data.
//
// Time arguments are in the model's time units, spatial arguments are
// Euclidean norms |x - y| unless a vector overload is used.

#include <span>

#include "heatfield/model.hpp"
#include "heatfield/quadrature.hpp"

namespace heatfield {

// ---------------------------------------------------------------------------
// Time slice t -> u(t, x) at fixed x.

/// E[u(t,x) u(s,x)]. Riesz kernel only (UnsupportedKernelError otherwise).
/// Exact zero if t = 0 or s = 0.
double temporal_covariance(const ModelParams& p, double t, double s,
                           const QuadratureSpec& q = {});

/// E|u(t,x) - u(s,x)|^2 = R(t,t) + R(s,s) - 2 R(t,s), clamped at 0.
double temporal_variogram(const ModelParams& p, double t, double s,
                          const QuadratureSpec& q = {});

// ---------------------------------------------------------------------------
// Pinned string U (stationary increments, U(0) = 0).

enum class DensityBackend { ClosedFormRiesz, Quadrature };

/// f_U(tau) = alpha_H (2 pi)^{-d} A_H |tau|^{1-2H} int mu(d xi) / (tau^2 + |xi|^4/4),
/// normalized so that E|U(t) - U(s)|^2 = int_R 2 (1 - cos((t-s) tau)) f_U(tau) d tau.
/// ClosedFormRiesz evaluates c |tau|^{-(1 + 2 gamma)}. Throws DomainError at tau = 0.
double pinned_spectral_density(const ModelParams& p, double tau,
                               DensityBackend backend = DensityBackend::Quadrature,
                               const QuadratureSpec& q = {});

/// v(h) = E|U(t+h) - U(t)|^2 computed from the quadrature-backed density.
double pinned_variogram(const ModelParams& p, double h, const QuadratureSpec& q = {});

/// C_0 with v(h) = C_0^2 h^{2 gamma} (Riesz), read off at the given lag.
double c0_constant(const ModelParams& p, const QuadratureSpec& q = {}, double lag = 1.0);

// ---------------------------------------------------------------------------
// Space slice x -> u(t, x) at fixed t (stationary).

/// I_t(w) = int_0^t int_0^t |u - v|^{2H-2} exp(-(u + v) w / 2) du dv.
double time_smoothing_integral(double H, double t, double w, const QuadratureSpec& q = {});

/// Density of the spectral measure of u(t, .) at |xi| = r:
/// alpha_H (2 pi)^{-d} weight(r) I_t(r^2).
double spatial_spectral_density(const ModelParams& p, double t, double r,
                                const QuadratureSpec& q = {});

/// E[u(t,x) u(t,x+z)] as a function of |z|.
double spatial_covariance(const ModelParams& p, double t, double z,
                          const QuadratureSpec& q = {});
/// Vector form; z.size() must equal p.d.
double spatial_covariance(const ModelParams& p, double t, std::span<const double> z,
                          const QuadratureSpec& q = {});

/// E|u(t,x) - u(t,y)|^2 with |x - y| = lag, computed directly from the
/// (1 - kernel) transform rather than by differencing covariances.
double spatial_variogram(const ModelParams& p, double t, double lag,
                         const QuadratureSpec& q = {});

// ---------------------------------------------------------------------------
// Smooth remainder Y of u = U - Y.

/// E|Y'(t) - Y'(s)|^2 for lower_cutoff <= s <= t. Throws DomainError below
/// the cutoff (smoothness only holds away from 0).
double y_derivative_variogram(const ModelParams& p, double s, double t,
                              const QuadratureSpec& q = {}, double lower_cutoff = 1e-3);

// ---------------------------------------------------------------------------
// Reference processes.

/// 2^{-K} ((t^{2Hb} + s^{2Hb})^K - |t - s|^{2 Hb K}).
double bifbm_covariance(double Hb, double K, double t, double s);

/// (sqrt(t + s) - sqrt|t - s|) / sqrt(2 pi): white-in-time, d = 1 baseline.
double white_noise_solution_covariance(double t, double s);

/// (t^{2g} + s^{2g} - |t - s|^{2g}) / 2.
double fbm_covariance(double g, double t, double s);

// ---------------------------------------------------------------------------

/// Evaluable spectral density bound to its parameters.
class SpectralDensity {
 public:
  enum class Kind { PinnedTime, SpatialSlice };

  static SpectralDensity pinned(const ModelParams& p, DensityBackend backend,
                                QuadratureSpec q = {});
  static SpectralDensity spatial(const ModelParams& p, double t, QuadratureSpec q = {});

  double operator()(double arg) const;

  Kind kind() const noexcept { return kind_; }
  DensityBackend backend() const noexcept { return backend_; }
  const ModelParams& params() const noexcept { return params_; }
  double slice_time() const noexcept { return t_; }
  /// alpha_H (2 pi)^{-d}.
  double normalization() const;

 private:
  SpectralDensity(const ModelParams& p, Kind k, DensityBackend b, double t, QuadratureSpec q)
      : params_(p), kind_(k), backend_(b), t_(t), q_(q) {}
  ModelParams params_;
  Kind kind_;
  DensityBackend backend_;
  double t_;
  QuadratureSpec q_;
};

}  // namespace heatfield
