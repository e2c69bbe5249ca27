#include <doctest.h>

#include <cmath>

#include "heatfield/errors.hpp"
#include "heatfield/estimators.hpp"

using namespace heatfield;

namespace {
std::vector<double> lattice(int n, double step, int first = 0) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back((first + i) * step);
  return g;
}

std::vector<double> steps(std::initializer_list<int> k, double step) {
  std::vector<double> out;
  for (int x : k) out.push_back(x * step);
  return out;
}

PathEnsemble constant_paths(int n_paths, int n_grid, double value) {
  PathEnsemble e;
  e.grid = lattice(n_grid, 1.0 / (n_grid - 1));
  e.paths = PathMatrix::Constant(n_paths, n_grid, value);
  return e;
}
}  // namespace

TEST_CASE("constant paths have a zero variogram") {
  const auto e = constant_paths(4, 65, 2.5);
  const auto t = empirical_variogram(e, steps({1, 2, 4}, 1.0 / 64));
  for (double v : t.values) CHECK(v == 0.0);
  CHECK(t.n_pairs[0] == 64);
  CHECK(t.n_pairs[2] == 61);
}

TEST_CASE("window restricts the pairs") {
  const auto e = constant_paths(2, 65, 1.0);
  const auto t = empirical_variogram(e, steps({1, 8}, 1.0 / 64), Window{0.5, 1.0});
  CHECK(t.n_pairs[0] == 32);
  CHECK(t.n_pairs[1] == 25);
}

TEST_CASE("Brownian variogram is the lag") {
  const auto g = lattice(1025, 1.0 / 1024);
  const auto e = sample_fbm(0.5, g, 200, 3);
  const auto t = empirical_variogram(e, steps({1, 4, 16, 64}, 1.0 / 1024));
  for (std::size_t k = 0; k < t.lags.size(); ++k) {
    CHECK(std::abs(t.values[k] - t.lags[k]) < 5 * t.stderrs[k]);
    CHECK(t.stderrs[k] > 0.0);
  }
}

TEST_CASE("exact power laws fit exactly") {
  VariogramTable t;
  for (int k = 0; k < 8; ++k) {
    t.lags.push_back(std::ldexp(1.0, -k));
    t.values.push_back(3.0 * std::pow(t.lags.back(), 1.4));
    t.stderrs.push_back(0.0);
    t.n_pairs.push_back(1);
  }
  const auto r = fit_exponent(t, 0.7, 1e-9);
  CHECK(r.estimate == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(r.prefactor == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(r.r_squared == doctest::Approx(1.0));
  CHECK(r.pass);
  CHECK_FALSE(fit_exponent(t, 0.75, 0.01).pass);
  const auto l = loglog_fit(t.lags, t.values);
  CHECK(l.slope == doctest::Approx(1.4));
  CHECK(l.intercept == doctest::Approx(std::log(3.0)));
}

TEST_CASE("degenerate fits are rejected") {
  VariogramTable t;
  for (int k = 0; k < 4; ++k) {
    t.lags.push_back(k + 1.0);
    t.values.push_back(k + 1.0);
    t.stderrs.push_back(0.0);
    t.n_pairs.push_back(1);
  }
  CHECK_THROWS_AS(fit_exponent(t, 0.5, 0.1), DegenerateFitError);
  t.lags.push_back(5.0);
  t.values.push_back(5.0);
  t.stderrs.push_back(0.0);
  t.n_pairs.push_back(1);
  CHECK_THROWS_AS(fit_exponent(t, 0.5, 0.1), DegenerateFitError);
}

TEST_CASE("lags must sit on the grid") {
  const auto e = constant_paths(2, 65, 0.0);
  const std::vector<double> lags{1.5 / 64};
  CHECK_THROWS_AS(empirical_variogram(e, lags), LagNotOnGridError);
  PathEnsemble irregular = e;
  irregular.grid[3] += 1e-3;
  const std::vector<double> ok{1.0 / 64};
  CHECK_THROWS_AS(empirical_variogram(irregular, ok), LagNotOnGridError);
}

TEST_CASE("moduli of zero paths vanish and ignore constants") {
  const auto g = lattice(1025, 1.0 / 1024);
  auto e = sample_fbm(0.5, g, 20, 8);
  const auto eps = steps({256, 128, 64, 32, 16}, 1.0 / 1024);
  for (auto kind : {ModulusKind::UniformLog, ModulusKind::LocalLogLog, ModulusKind::ChungLogLog}) {
    const auto a = modulus_statistic(e, kind, 0.5, eps, 0.5);
    PathEnsemble shifted = e;
    shifted.paths.array() += 7.0;
    const auto b = modulus_statistic(shifted, kind, 0.5, eps, 0.5);
    for (std::size_t k = 0; k < eps.size(); ++k) CHECK(a.medians[k] == doctest::Approx(b.medians[k]).epsilon(1e-9));
    const auto z = modulus_statistic(constant_paths(3, 1025, 0.0), kind, 0.5, eps, 0.5);
    for (double m : z.medians) CHECK(m == 0.0);
    CHECK(a.epsilons == eps);
    CHECK(a.per_path.size() == eps.size());
    CHECK(a.per_path[0].size() == 20);
  }
}

TEST_CASE("underresolved windows are rejected") {
  const auto e = constant_paths(2, 1025, 0.0);
  const auto eps = steps({64, 4}, 1.0 / 1024);
  CHECK_THROWS_AS(modulus_statistic(e, ModulusKind::UniformLog, 0.5, eps), WindowUnderresolvedError);
  const std::vector<double> ok{64.0 / 1024};
  CHECK_THROWS_AS(modulus_statistic(e, ModulusKind::LocalLogLog, 0.5, ok, 0.3), Error);
}

TEST_CASE("modulus kind names") {
  for (auto k : {ModulusKind::UniformLog, ModulusKind::LocalLogLog, ModulusKind::ChungLogLog})
    CHECK(modulus_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(modulus_kind_from_string("x"), ParameterDomainError);
}

TEST_CASE("conditional variance") {
  const auto g = lattice(5, 0.25, 1);
  const auto m = build_cov_matrix(CovSpec::fbm_ref(0.5), ModelParams{}, g);
  CHECK(slnd_conditional_variance(m, 2, {}) == doctest::Approx(0.75));
  // Brownian motion is Markov: only the neighbours matter
  const std::vector<int> c1{1, 3}, c2{0, 1, 3, 4};
  CHECK(slnd_conditional_variance(m, 2, c1) == doctest::Approx(0.125));
  CHECK(slnd_conditional_variance(m, 2, c2) == doctest::Approx(0.125));
  const std::vector<int> dup{1, 1};
  CHECK(slnd_conditional_variance(m, 2, dup) == doctest::Approx(0.25));
  const std::vector<int> self{2};
  CHECK_THROWS_AS(slnd_conditional_variance(m, 2, self), DomainError);
}

TEST_CASE("small SLND search") {
  SlndOptions o;
  o.step = 0.25;
  o.max_points = 2;
  const auto r = slnd_search(ModelParams::make(0.7, 0.5, 1), o);
  CHECK(r.exponent == doctest::Approx(2.3));
  CHECK(r.configurations > 0);
  CHECK(r.min_ratio_by_size.size() == 3);
  CHECK(r.min_ratio_by_size[1] <= r.min_ratio_by_size[0]);
  CHECK(r.pass);
  CHECK(r.violations == 0);
}

TEST_CASE("smoothness check guards its regime") {
  const auto p = ModelParams::make(0.6, 0.5, 1);
  const auto e = constant_paths(2, 65, 0.0);
  const auto lags = steps({1, 2, 4, 8, 16}, 1.0 / 64);
  CHECK_THROWS_AS(smoothness_check(e, p, lags, 0.05), RegimeError);
}

TEST_CASE("self-similarity at scale one is exact") {
  const auto p = ModelParams::make(0.7, 0.5, 1);
  const std::vector<double> g{0.0, 0.25, 0.5};
  CHECK(self_similarity_check(p, 1.0, g) == 0.0);
  CHECK(self_similarity_check(p, 2.0, g) < 1e-8);
  const std::vector<double> far{0.75};
  CHECK_THROWS_AS(self_similarity_check(p, 2.0, far), DomainError);
}

TEST_CASE("whitening accepts the right law and rejects the wrong one") {
  const auto g = lattice(8, 0.125, 1);
  const auto cov = build_cov_matrix(CovSpec::fbm_ref(0.5), ModelParams{}, g);
  const auto e = sample_gaussian(cov, 4000, 12);
  const auto ok = whitening_test(e, cov);
  CHECK(ok.dof == 36);
  CHECK(ok.pass);
  const auto wrong = build_cov_matrix(CovSpec::fbm_ref(0.55), ModelParams{}, g);
  CHECK_FALSE(whitening_test(e, wrong).pass);
}

TEST_CASE("fBm calibration of the exponent fit") {
  const auto g = lattice(4097, 1.0 / 4096);
  const auto lags = steps({1, 2, 4, 8, 16, 32, 64, 128}, 1.0 / 4096);
  for (double gam : {0.3, 0.5, 0.7}) {
    const auto e = sample_fbm(gam, g, 200, 21);
    const auto r = fit_exponent(empirical_variogram(e, lags), gam, 0.02);
    CHECK(r.pass);
    CHECK(std::abs(r.estimate - gam) <= 0.02);
  }
}

TEST_CASE("fBm moduli calibration") {
  const int n = 1 << 15;
  const auto g = lattice(n + 1, 1.0 / n);
  const auto e = sample_fbm(0.5, g, 200, 4);
  std::vector<double> eps;
  for (int k = 6; k <= 12; ++k) eps.push_back(std::ldexp(1.0, -k));
  const auto local = modulus_statistic(e, ModulusKind::LocalLogLog, 0.5, eps, 0.5);
  CHECK(local.stability <= 0.15);
  const auto chung = modulus_statistic(e, ModulusKind::ChungLogLog, 0.5, eps, 0.5);
  CHECK(chung.spread <= 4.0);
  const auto uni = modulus_statistic(e, ModulusKind::UniformLog, 0.5, eps);
  CHECK(uni.stability <= 0.15);
}
