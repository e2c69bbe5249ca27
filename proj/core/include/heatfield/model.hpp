#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace heatfield {

/// Spatial covariance family of the noise.
///   Riesz:  mu(d xi) = |xi|^{-alpha} d xi
///   Bessel: mu(d xi) = (1 + |xi|^2)^{-alpha/2} d xi
enum class Kernel { Riesz, Bessel };

std::string_view to_string(Kernel k);
Kernel kernel_from_string(std::string_view s);

/// Full parameterization of the noise and the equation.
///
/// Construct through `ModelParams::make`, which enforces every invariant:
/// 1/2 < H < 1, 0 < alpha < d, T > 0, d in {1,2,3} and the existence
/// condition d < 4H + alpha.
struct ModelParams {
  double H = 0.7;
  double alpha = 0.5;
  int d = 1;
  Kernel kernel = Kernel::Riesz;
  double T = 1.0;

  /// Throws ParameterDomainError on any violated invariant.
  static ModelParams make(double H, double alpha, int d,
                          Kernel kernel = Kernel::Riesz, double T = 1.0);

  /// d - alpha.
  double codim() const noexcept { return d - alpha; }
  /// Self-similarity / temporal Hoelder index H - (d - alpha)/4.
  double gamma() const noexcept { return H - codim() / 4.0; }
  /// Spatial index 2H - (d - alpha)/2 before capping at 1.
  double raw_beta() const noexcept { return 2.0 * H - codim() / 2.0; }
  /// min(1, 2H - (d - alpha)/2).
  double beta() const noexcept;

  bool operator==(const ModelParams&) const = default;

  /// Stable 64-bit hash of the parameter values.
  std::uint64_t fingerprint() const noexcept;
};

/// Field-wise range checks only (no existence condition).
void check_ranges(const ModelParams& p);

/// True iff d < 4H + alpha.
bool validate_existence(const ModelParams& p) noexcept;

/// Radial spectral weight r -> mu density at |xi| = r (dimensionless).
/// Throws DomainError for r = 0 with the Riesz kernel and for r < 0.
double spectral_weight(const ModelParams& p, double r);

/// Riesz kernel in real space: gamma_{alpha,d} |x|^{alpha - d}, with x the
/// Euclidean norm of the spatial point. Throws DomainError at x = 0.
double riesz_real_kernel(const ModelParams& p, double x);

}  // namespace heatfield
