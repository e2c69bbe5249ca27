#pragma once

// Exact-in-law Gaussian samplers. Path j draws its normals from a stream
// derived from (seed, j), so the first k paths of any run are the same as a
// k-path run with the same seed.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heatfield/cov_matrix.hpp"

namespace heatfield {

enum class SamplerMethod { Cholesky, CirculantEmbedding, SpectralSeries };

std::string_view to_string(SamplerMethod m);
SamplerMethod sampler_method_from_string(std::string_view s);

using PathMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PathEnsemble {
  std::vector<double> grid;
  std::string units = "time";  ///< "time" or "space"
  PathMatrix paths;            ///< n_paths x n_grid
  std::uint64_t seed = 0;
  SamplerMethod method = SamplerMethod::Cholesky;
  std::uint64_t fingerprint = 0;
  /// Fallbacks and truncation notes, in the order they occurred.
  std::vector<std::string> warnings;
  /// SpectralSeries only: neglected spectral mass / total variance.
  double series_bias = 0.0;

  int n_paths() const { return static_cast<int>(paths.rows()); }
  int n_grid() const { return static_cast<int>(paths.cols()); }
};

struct SamplerOptions {
  int cholesky_max = 4096;
  int fft_max = 1 << 20;
  /// SpectralSeries: the neglected tail mass is below this fraction of the
  /// variance, and the cutoff is at least nyquist_factor * pi / (grid step).
  double series_tail = 1e-3;
  double nyquist_factor = 8.0;
  QuadratureSpec q{};
};

/// Hash of the parameters, the grid and a tag for the sampled process.
std::uint64_t ensemble_fingerprint(std::uint64_t params_fp, std::span<const double> grid,
                                   std::string_view process);

/// Centered Gaussian ensemble with Gram matrix cov.values (+ the recorded jitter).
PathEnsemble sample_gaussian(const CovMatrix& cov, int n_paths, std::uint64_t seed);

/// Pinned string U. CirculantEmbedding needs a uniform grid whose first point
/// is a nonnegative multiple of the step.
PathEnsemble sample_pinned_U(const ModelParams& p, std::span<const double> time_grid, int n_paths,
                             std::uint64_t seed, SamplerMethod method,
                             const SamplerOptions& opt = {});

/// Time slice t -> u(t, x) by Cholesky.
PathEnsemble sample_time_slice(const ModelParams& p, std::span<const double> time_grid,
                               int n_paths, std::uint64_t seed, const SamplerOptions& opt = {});

/// Space slice x -> u(t, x) along a line (d = 1 for the FFT/series methods).
PathEnsemble sample_space_slice(const ModelParams& p, double t, std::span<const double> space_grid,
                                int n_paths, std::uint64_t seed, SamplerMethod method,
                                const SamplerOptions& opt = {});

/// fBm with index gamma, by circulant embedding of the increments (uniform
/// grids) or Cholesky.
PathEnsemble sample_fbm(double gamma, std::span<const double> grid, int n_paths,
                        std::uint64_t seed,
                        SamplerMethod method = SamplerMethod::CirculantEmbedding,
                        const SamplerOptions& opt = {});

/// Covariance reproduced exactly by SpectralSeries: frequencies r_k and masses
/// m_k so that C(z) ~ sum_k m_k cos(r_k z).
struct SpectralSeriesPlan {
  std::vector<double> freq, mass;
  double cutoff = 0.0;
  double tail_fraction = 0.0;
  double variance = 0.0;
};
SpectralSeriesPlan plan_spectral_series(const ModelParams& p, double t, double span,
                                        double step, const SamplerOptions& opt = {});

}  // namespace heatfield
