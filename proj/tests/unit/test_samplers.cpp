#include <doctest.h>

#include <cmath>

#include "heatfield/samplers.hpp"
#include "heatfield/errors.hpp"

using namespace heatfield;

namespace {
const ModelParams P = ModelParams::make(0.7, 0.5, 1);

std::vector<double> lattice(int n, double step, int first = 0) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back((first + i) * step);
  return g;
}

// Empirical covariance within `z` standard errors of the target.
void check_covariance(const PathEnsemble& e, const Eigen::MatrixXd& target, double z = 4.5) {
  const int n = e.n_paths();
  for (int i = 0; i < e.n_grid(); ++i)
    for (int j = i; j < e.n_grid(); ++j) {
      const Eigen::ArrayXd prod = e.paths.col(i).array() * e.paths.col(j).array();
      const double m = prod.mean();
      const double sd = std::sqrt((prod - m).square().sum() / (n - 1));
      CHECK(std::abs(m - target(i, j)) <= z * sd / std::sqrt(n) + 1e-12);
    }
}
}  // namespace

TEST_CASE("time slice ensemble reproduces the covariance") {
  const auto g = lattice(8, 0.125, 1);
  const auto e = sample_time_slice(P, g, 20000, 3);
  CHECK(e.units == "time");
  check_covariance(e, build_cov_matrix(CovSpec::time_slice(), P, g).values);
}

TEST_CASE("time slice at t = 0 is identically zero") {
  const auto e = sample_time_slice(P, lattice(4, 0.25), 50, 1);
  CHECK(e.paths.col(0).norm() == 0.0);
  CHECK(e.paths.col(1).norm() > 0.0);
}

TEST_CASE("fBm with index 1/2 has independent increments") {
  const auto g = lattice(65, 1.0 / 64);
  const auto e = sample_fbm(0.5, g, 4000, 11);
  Eigen::MatrixXd inc(e.n_paths(), 64);
  for (int k = 0; k < 64; ++k) inc.col(k) = e.paths.col(k + 1) - e.paths.col(k);
  const Eigen::MatrixXd c = inc.transpose() * inc / e.n_paths();
  const double se = std::sqrt(2.0 / e.n_paths()) / 64;
  for (int k = 0; k < 64; ++k) CHECK(std::abs(c(k, k) - 1.0 / 64) < 5 * se);
  const double se_off = 1.0 / 64 / std::sqrt(e.n_paths());
  for (int k = 0; k + 1 < 64; ++k) CHECK(std::abs(c(k, k + 1)) < 5 * se_off);
}

TEST_CASE("fBm variance follows t^{2 gamma}") {
  for (double gam : {0.3, 0.75}) {
    const auto g = lattice(33, 1.0 / 32);
    const auto e = sample_fbm(gam, g, 20000, 5);
    for (int i : {8, 16, 32}) {
      const double v = e.paths.col(i).squaredNorm() / e.n_paths();
      CHECK(v == doctest::Approx(std::pow(g[i], 2 * gam)).epsilon(5 * std::sqrt(2.0 / 20000)));
    }
  }
}

TEST_CASE("pinned string variance by circulant embedding") {
  const auto g = lattice(65, 1.0 / 64);
  const auto e = sample_pinned_U(P, g, 20000, 9, SamplerMethod::CirculantEmbedding);
  CHECK(e.paths.col(0).norm() == 0.0);
  const double v = e.paths.col(64).squaredNorm() / e.n_paths();
  CHECK(v == doctest::Approx(pinned_variogram(P, 1.0)).epsilon(5 * std::sqrt(2.0 / 20000)));
}

TEST_CASE("pinned string methods agree in law") {
  const auto g = lattice(8, 0.125, 1);
  const auto target = build_cov_matrix(CovSpec::pinned_u(), P, g).values;
  check_covariance(sample_pinned_U(P, g, 20000, 2, SamplerMethod::CirculantEmbedding), target);
  check_covariance(sample_pinned_U(P, g, 20000, 2, SamplerMethod::Cholesky), target);
}

TEST_CASE("space slice ensembles are stationary with the right covariance") {
  const auto p = ModelParams::make(0.6, 0.5, 1);
  const auto g = lattice(8, 0.125);
  const auto target = build_cov_matrix(CovSpec::space_slice(1.0), p, g).values;
  check_covariance(sample_space_slice(p, 1.0, g, 20000, 4, SamplerMethod::Cholesky), target);
  const auto s = sample_space_slice(p, 1.0, g, 20000, 4, SamplerMethod::SpectralSeries);
  CHECK(s.series_bias < 1e-3);
  check_covariance(s, target, 5.0);
}

TEST_CASE("spectral series plan carries the variance") {
  const auto p = ModelParams::make(0.6, 0.5, 1);
  const auto plan = plan_spectral_series(p, 1.0, 1.0, 1.0 / 64);
  double m = 0.0;
  for (double x : plan.mass) m += x;
  CHECK(plan.variance == doctest::Approx(spatial_covariance(p, 1.0, 0.0)).epsilon(1e-6));
  CHECK(m == doctest::Approx(plan.variance * (1.0 - plan.tail_fraction)).epsilon(1e-6));
  CHECK(plan.cutoff >= 8.0 * M_PI * 64 * (1 - 1e-12));
  CHECK(plan.tail_fraction < 1e-3);
}

TEST_CASE("ensembles are prefix-stable and deterministic") {
  const auto g = lattice(16, 1.0 / 16, 1);
  const auto a = sample_fbm(0.4, g, 10, 77);
  const auto b = sample_fbm(0.4, g, 25, 77);
  const auto c = sample_fbm(0.4, g, 10, 77);
  CHECK((a.paths - b.paths.topRows(10)).norm() == 0.0);
  CHECK((a.paths - c.paths).norm() == 0.0);
  const auto d = sample_fbm(0.4, g, 10, 78);
  CHECK((a.paths - d.paths).norm() > 0.0);
  CHECK(a.seed == 77);
  CHECK(a.fingerprint == c.fingerprint);
}

TEST_CASE("circulant embedding falls back to Cholesky for short space grids") {
  const auto p = ModelParams::make(0.6, 0.5, 1);
  const auto e = sample_space_slice(p, 1.0, lattice(16, 1.0 / 16), 5, 1,
                                    SamplerMethod::CirculantEmbedding);
  CHECK(e.n_paths() == 5);
  REQUIRE_FALSE(e.warnings.empty());
  CHECK(e.method == SamplerMethod::Cholesky);
}

TEST_CASE("sampler argument errors") {
  const std::vector<double> irregular{0.1, 0.2, 0.4};
  CHECK_THROWS_AS(sample_fbm(0.4, irregular, 5, 1, SamplerMethod::SpectralSeries), Error);
  const auto fb = sample_pinned_U(P, irregular, 5, 1, SamplerMethod::CirculantEmbedding);
  CHECK(fb.method == SamplerMethod::Cholesky);
  CHECK_FALSE(fb.warnings.empty());
  CHECK_THROWS_AS(sampler_method_from_string("euler"), ParameterDomainError);
  for (auto m : {SamplerMethod::Cholesky, SamplerMethod::CirculantEmbedding, SamplerMethod::SpectralSeries})
    CHECK(sampler_method_from_string(to_string(m)) == m);
}
