#include <doctest.h>

#include <cmath>

#include "heatfield/constants.hpp"
#include "heatfield/covariance.hpp"
#include "oracles/oracles.hpp"

using namespace heatfield;

namespace {
const ModelParams P = ModelParams::make(0.7, 0.5, 1);
}

TEST_CASE("temporal covariance vanishes at t = 0 and is symmetric") {
  CHECK(temporal_covariance(P, 0.0, 0.7) == 0.0);
  CHECK(temporal_covariance(P, 0.4, 0.0) == 0.0);
  for (double t : {0.1, 0.5, 0.9})
    for (double s : {0.2, 0.6, 1.0})
      CHECK(temporal_covariance(P, t, s) == doctest::Approx(temporal_covariance(P, s, t)).epsilon(1e-12));
}

TEST_CASE("temporal covariance agrees with the nested oracle at t = s = 1") {
  const double o = oracle::nested_temporal_covariance(P, 1.0, 1.0);
  CHECK(temporal_covariance(P, 1.0, 1.0) == doctest::Approx(o).epsilon(1e-4));
}

TEST_CASE("temporal covariance agrees with the nested oracle off the diagonal") {
  const double o = oracle::nested_temporal_covariance(P, 0.8, 0.3);
  CHECK(temporal_covariance(P, 0.8, 0.3) == doctest::Approx(o).epsilon(1e-4));
}

TEST_CASE("variance matches the incomplete Beta closed form") {
  for (auto p : {P, ModelParams::make(0.6, 0.5, 1), ModelParams::make(0.9, 0.2, 1),
                 ModelParams::make(0.8, 1.5, 2)})
    for (double t : {0.3, 1.0})
      CHECK(temporal_covariance(p, t, t) == doctest::Approx(oracle::riesz_variance(p, t)).epsilon(1e-9));
}

TEST_CASE("temporal covariance rejects the Bessel kernel") {
  CHECK_THROWS_AS(temporal_covariance(ModelParams::make(0.7, 0.5, 1, Kernel::Bessel), 1.0, 1.0),
                  UnsupportedKernelError);
}

TEST_CASE("temporal variogram") {
  CHECK(temporal_variogram(P, 0.5, 0.5) == 0.0);
  double lo = INFINITY, hi = 0.0;
  for (int k = 2; k <= 10; ++k) {
    const double h = std::ldexp(1.0, -k);
    for (double s : {0.0, 0.3, 1.0 - h}) {
      const double v = temporal_variogram(P, s + h, s);
      CHECK(v <= 2.0 * (temporal_covariance(P, s + h, s + h) + temporal_covariance(P, s, s)));
      const double r = v / std::pow(h, 2.0 * P.gamma());
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo < 3.0);
}

TEST_CASE("pinned spectral density backends") {
  for (auto p : {P, ModelParams::make(0.6, 0.5, 1), ModelParams::make(0.8, 1.2, 2)})
    for (double tau : {0.1, 1.0, 10.0}) {
      const double cf = pinned_spectral_density(p, tau, DensityBackend::ClosedFormRiesz);
      CHECK(pinned_spectral_density(p, tau) == doctest::Approx(cf).epsilon(1e-4));
      CHECK(oracle::pinned_density(p, tau) == doctest::Approx(cf).epsilon(1e-8));
      CHECK(pinned_spectral_density(p, -tau) == doctest::Approx(pinned_spectral_density(p, tau)));
    }
  CHECK_THROWS_AS(pinned_spectral_density(P, 0.0), DomainError);
  const auto b = ModelParams::make(0.7, 0.5, 1, Kernel::Bessel);
  CHECK(pinned_spectral_density(b, 2.0) == doctest::Approx(oracle::pinned_density(b, 2.0)).epsilon(1e-8));
  CHECK_THROWS_AS(pinned_spectral_density(b, 1.0, DensityBackend::ClosedFormRiesz), UnsupportedKernelError);
}

TEST_CASE("pinned variogram scales with C0") {
  const double c02 = std::pow(c0_constant(P), 2);
  CHECK(c02 == doctest::Approx(constants::fbm_variance_from_density(
                                   constants::pinned_density_amplitude(P), P.gamma()))
                   .epsilon(1e-9));
  for (int k = 0; k <= 8; ++k) {
    const double h = std::ldexp(1.0, -k);
    CHECK(pinned_variogram(P, h) / (c02 * std::pow(h, 2.0 * P.gamma())) ==
          doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("Bessel pinned variogram sits below the Riesz one at small lags") {
  const auto b = ModelParams::make(0.7, 0.5, 1, Kernel::Bessel);
  for (double h : {0.01, 0.1, 1.0}) {
    const double vb = pinned_variogram(b, h);
    CHECK(vb > 0.0);
    CHECK(vb < pinned_variogram(P, h));
  }
}

TEST_CASE("time-smoothing integral matches a direct double integral") {
  for (double H : {0.6, 0.9})
    for (double t : {0.5, 2.0})
      for (double w : {0.0, 0.01, 1.0, 30.0, 400.0}) {
        const double ref = w == 0.0 ? std::pow(t, 2 * H) / constants::alpha_H(H)
                                    : oracle::time_smoothing(H, t, w);
        CHECK(time_smoothing_integral(H, t, w) == doctest::Approx(ref).epsilon(1e-7));
      }
  CHECK(time_smoothing_integral(0.7, 0.0, 1.0) == 0.0);
}

TEST_CASE("space slice variance equals the time slice variance") {
  for (auto p : {P, ModelParams::make(0.6, 0.5, 1), ModelParams::make(0.8, 1.2, 2),
                 ModelParams::make(0.8, 1.5, 3)})
    CHECK(spatial_covariance(p, 1.0, 0.0) == doctest::Approx(temporal_covariance(p, 1.0, 1.0)).epsilon(1e-3));
}

TEST_CASE("space variogram is twice the covariance drop") {
  for (auto p : {P, ModelParams::make(0.8, 1.2, 2), ModelParams::make(0.8, 1.5, 3)})
    for (double z : {0.05, 0.5, 2.0}) {
      const double v = spatial_variogram(p, 1.0, z);
      const double c = 2.0 * (spatial_covariance(p, 1.0, 0.0) - spatial_covariance(p, 1.0, z));
      CHECK(v == doctest::Approx(c).epsilon(1e-6));
    }
  CHECK(spatial_variogram(P, 1.0, 0.0) == 0.0);
  const std::vector<double> z{0.3, 0.4};
  CHECK(spatial_covariance(ModelParams::make(0.8, 1.2, 2), 1.0, z) ==
        doctest::Approx(spatial_covariance(ModelParams::make(0.8, 1.2, 2), 1.0, 0.5)));
}

TEST_CASE("spatial spectral density") {
  const auto f = SpectralDensity::spatial(P, 1.0);
  CHECK(f.kind() == SpectralDensity::Kind::SpatialSlice);
  CHECK(f(2.0) == doctest::Approx(f(-2.0)));
  CHECK(f(2.0) > f(4.0));
  CHECK(f.normalization() == doctest::Approx(constants::solution_prefactor(P)));
  const auto g = SpectralDensity::pinned(P, DensityBackend::ClosedFormRiesz);
  CHECK(g(3.0) == doctest::Approx(pinned_spectral_density(P, 3.0, DensityBackend::ClosedFormRiesz)));
}

TEST_CASE("smooth remainder derivative variogram") {
  CHECK_THROWS_AS(y_derivative_variogram(P, 0.0, 0.5), DomainError);
  CHECK(y_derivative_variogram(P, 0.5, 0.5) == 0.0);
  const double a = y_derivative_variogram(P, 0.5, 0.5 + 1.0 / 64);
  const double b = y_derivative_variogram(P, 0.5, 0.5 + 1.0 / 128);
  CHECK(a / b == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("reference covariances") {
  CHECK(bifbm_covariance(0.5, 1.0, 0.3, 0.7) == doctest::Approx(0.3));
  CHECK(bifbm_covariance(0.7, 1.0, 0.4, 0.9) == doctest::Approx(fbm_covariance(0.7, 0.4, 0.9)).epsilon(1e-14));
  CHECK(white_noise_solution_covariance(1.0, 1.0) ==
        doctest::Approx(std::sqrt(2.0) / std::sqrt(2.0 * constants::pi)).epsilon(1e-15));
  CHECK(white_noise_solution_covariance(0.0, 0.0) == 0.0);
  CHECK(fbm_covariance(0.5, 0.3, 0.8) == doctest::Approx(0.3));
  CHECK_THROWS_AS(bifbm_covariance(0.5, 1.5, 1.0, 1.0), ParameterDomainError);
}
