#include "heatfield/samplers.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <mutex>

#include "heatfield/constants.hpp"
#include "heatfield/errors.hpp"
#include "heatfield/parallel.hpp"
#include "heatfield/rng.hpp"

namespace heatfield {

std::string_view to_string(SamplerMethod m) {
  switch (m) {
    case SamplerMethod::Cholesky: return "cholesky";
    case SamplerMethod::CirculantEmbedding: return "circulant_embedding";
    case SamplerMethod::SpectralSeries: return "spectral_series";
  }
  return "?";
}

SamplerMethod sampler_method_from_string(std::string_view s) {
  for (auto m : {SamplerMethod::Cholesky, SamplerMethod::CirculantEmbedding,
                 SamplerMethod::SpectralSeries})
    if (s == to_string(m)) return m;
  throw ParameterDomainError("unknown sampler method '" + std::string(s) + "'");
}

std::uint64_t ensemble_fingerprint(std::uint64_t params_fp, std::span<const double> grid,
                                   std::string_view process) {
  std::uint64_t h = splitmix64(params_fp);
  for (double g : grid) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(g));
  for (char c : process) h = splitmix64(h ^ static_cast<unsigned char>(c));
  return h;
}

namespace {

std::mutex& fftw_mutex() {
  static std::mutex mu;
  return mu;
}

struct UniformGrid {
  bool ok = false;
  double step = 0.0;
  long k0 = 0;  // grid[0] / step when that is a nonnegative integer, else -1
};

UniformGrid classify(std::span<const double> grid) {
  UniformGrid u;
  const std::size_t n = grid.size();
  if (n < 2) return u;
  u.step = (grid.back() - grid.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(grid[i] - (grid.front() + i * u.step)) > 1e-9 * u.step) return u;
  u.ok = true;
  const double k = grid.front() / u.step;
  const double r = std::round(k);
  u.k0 = (r >= 0.0 && std::abs(k - r) <= 1e-9 * std::max(1.0, k)) ? static_cast<long>(r) : -1;
  return u;
}

// Stationary Gaussian sequence of length n with autocovariance c[0..n-1],
// embedded in a circulant of size 2(n-1).
class Embedding {
 public:
  // Returns false (with a note) if an eigenvalue is below -1e-10 max.
  bool init(const std::vector<double>& c, std::string& note) {
    n_ = static_cast<int>(c.size());
    if (n_ == 1) {
      sqrt_lam_ = {std::sqrt(std::max(0.0, c[0]))};
      return true;
    }
    m_ = 2 * (n_ - 1);
    std::vector<std::complex<double>> row(m_), lam(m_);
    for (int k = 0; k < n_; ++k) row[k] = c[k];
    for (int k = 1; k < n_ - 1; ++k) row[m_ - k] = c[k];
    {
      std::lock_guard lock(fftw_mutex());
      auto* in = reinterpret_cast<fftw_complex*>(row.data());
      auto* out = reinterpret_cast<fftw_complex*>(lam.data());
      fftw_plan once = fftw_plan_dft_1d(m_, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
      fftw_execute(once);
      fftw_destroy_plan(once);
      fftw_complex* a = fftw_alloc_complex(m_);
      fftw_complex* b = fftw_alloc_complex(m_);
      plan_.reset(fftw_plan_dft_1d(m_, a, b, FFTW_FORWARD, FFTW_ESTIMATE), [](fftw_plan p) {
        std::lock_guard l(fftw_mutex());
        fftw_destroy_plan(p);
      });
      fftw_free(a);
      fftw_free(b);
    }
    double mx = 0.0, mn = 0.0;
    for (const auto& l : lam) {
      mx = std::max(mx, l.real());
      mn = std::min(mn, l.real());
    }
    if (mn < -1e-10 * mx) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "circulant embedding: eigenvalue %.3e below -1e-10 * max (max %.3e)", mn, mx);
      note = buf;
      return false;
    }
    sqrt_lam_.resize(m_);
    for (int k = 0; k < m_; ++k) sqrt_lam_[k] = std::sqrt(std::max(0.0, lam[k].real()) / m_);
    return true;
  }

  void draw(std::mt19937_64& g, StdNormal& z, double* out) const {
    if (n_ == 1) {
      out[0] = sqrt_lam_[0] * z(g);
      return;
    }
    fftw_complex* in = fftw_alloc_complex(m_);
    fftw_complex* res = fftw_alloc_complex(m_);
    for (int k = 0; k < m_; ++k) {
      in[k][0] = sqrt_lam_[k] * z(g);
      in[k][1] = sqrt_lam_[k] * z(g);
    }
    fftw_execute_dft(plan_.get(), in, res);
    for (int j = 0; j < n_; ++j) out[j] = res[j][0];
    fftw_free(in);
    fftw_free(res);
  }

 private:
  int n_ = 0, m_ = 0;
  std::vector<double> sqrt_lam_;
  std::shared_ptr<std::remove_pointer_t<fftw_plan>> plan_;
};

PathEnsemble make_shell(std::span<const double> grid, int n_paths, std::uint64_t seed,
                        SamplerMethod method, std::string units, std::uint64_t fp) {
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
  PathEnsemble e;
  e.grid.assign(grid.begin(), grid.end());
  e.units = std::move(units);
  e.paths.resize(n_paths, static_cast<Eigen::Index>(grid.size()));
  e.seed = seed;
  e.method = method;
  e.fingerprint = fp;
  return e;
}

void fill_from_factor(PathEnsemble& e, const CovMatrix& cov) {
  const int k = static_cast<int>(cov.active.size());
  parallel_for(e.n_paths(), [&](std::size_t j) {
    auto g = path_stream(e.seed, j);
    StdNormal z;
    Eigen::VectorXd w(k);
    for (int i = 0; i < k; ++i) w[i] = z(g);
    const Eigen::VectorXd x = cov.factor.triangularView<Eigen::Lower>() * w;
    auto row = e.paths.row(j);
    row.setZero();
    for (int i = 0; i < k; ++i) row[cov.active[i]] = x[i];
  });
}

// Stationary-increment process with variogram v on a uniform grid starting
// at k0 * step, X(0) = 0.
bool increments_by_embedding(PathEnsemble& e, const std::vector<double>& inc_cov, long k0,
                             std::string& note) {
  const int n = e.n_grid();
  const long N = k0 + n - 1;
  if (N == 0) {
    e.paths.setZero();
    return true;
  }
  Embedding emb;
  if (!emb.init(inc_cov, note)) return false;
  parallel_for(e.n_paths(), [&](std::size_t j) {
    auto g = path_stream(e.seed, j);
    StdNormal z;
    std::vector<double> inc(N);
    emb.draw(g, z, inc.data());
    auto row = e.paths.row(j);
    double s = 0.0;
    long idx = 0;
    for (long k = 0; k <= N; ++k) {
      if (k >= k0) row[idx++] = s;
      if (k < N) s += inc[k];
    }
  });
  return true;
}

// 1/2 (|k+1|^e - 2 k^e + |k-1|^e) without cancellation
double fgn_autocov(double e, long k) {
  if (k == 0) return 1.0;
  if (k == 1) return 0.5 * (std::pow(2.0, e) - 2.0);
  const double x = 1.0 / static_cast<double>(k);
  return 0.5 * std::pow(static_cast<double>(k), e) *
         (std::expm1(e * std::log1p(x)) + std::expm1(e * std::log1p(-x)));
}

std::string hexfloat(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

void check_cap(std::size_t n, int cap, const char* what) {
  if (static_cast<long>(n) > cap)
    throw DomainError(std::string(what) + ": grid of " + std::to_string(n) +
                      " points exceeds the cap of " + std::to_string(cap));
}

}  // namespace

PathEnsemble sample_gaussian(const CovMatrix& cov, int n_paths, std::uint64_t seed) {
  if (cov.factor.rows() != static_cast<Eigen::Index>(cov.active.size()))
    throw FactorizationError("covariance matrix has no factor");
  auto e = make_shell(cov.grid, n_paths, seed, SamplerMethod::Cholesky,
                      cov.spec.kind == CovKind::SpaceSlice ? "space" : "time",
                      ensemble_fingerprint(0, cov.grid, to_string(cov.spec.kind)));
  fill_from_factor(e, cov);
  return e;
}

PathEnsemble sample_fbm(double gamma, std::span<const double> grid, int n_paths, std::uint64_t seed,
                        SamplerMethod method, const SamplerOptions& opt) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterDomainError("fBm index must lie in (0, 1)");
  if (grid.empty()) throw DomainError("grid is empty");
  const auto fp = ensemble_fingerprint(std::bit_cast<std::uint64_t>(gamma), grid, "fbm");
  auto e = make_shell(grid, n_paths, seed, method, "time", fp);
  const auto u = classify(grid);
  if (method == SamplerMethod::CirculantEmbedding) {
    if (u.ok && u.k0 >= 0) {
      check_cap(u.k0 + grid.size(), opt.fft_max, "sample_fbm");
      const long N = u.k0 + static_cast<long>(grid.size()) - 1;
      std::vector<double> c(std::max(N, 1L));
      const double s2 = std::pow(u.step, 2.0 * gamma);
      for (long k = 0; k < N; ++k) c[k] = s2 * fgn_autocov(2.0 * gamma, k);
      std::string note;
      if (increments_by_embedding(e, c, u.k0, note)) return e;
      e.warnings.push_back(note + "; fell back to Cholesky");
    } else {
      e.warnings.push_back("circulant embedding needs a uniform grid anchored at 0; fell back to Cholesky");
    }
  } else if (method != SamplerMethod::Cholesky) {
    throw DomainError("sample_fbm supports cholesky and circulant_embedding");
  }
  check_cap(grid.size(), opt.cholesky_max, "sample_fbm");
  const auto cov = build_cov_matrix(CovSpec::fbm_ref(gamma), ModelParams{}, grid, opt.q);
  e.method = SamplerMethod::Cholesky;
  fill_from_factor(e, cov);
  return e;
}

PathEnsemble sample_pinned_U(const ModelParams& p, std::span<const double> grid, int n_paths,
                             std::uint64_t seed, SamplerMethod method, const SamplerOptions& opt) {
  if (grid.empty()) throw DomainError("grid is empty");
  if (grid.front() < 0.0 || grid.back() > p.T)
    throw DomainError("time grid must lie within [0, T]");
  auto e = make_shell(grid, n_paths, seed, method, "time",
                      ensemble_fingerprint(p.fingerprint(), grid, "pinned_u"));
  const auto u = classify(grid);
  if (method == SamplerMethod::CirculantEmbedding) {
    if (u.ok && u.k0 >= 0) {
      check_cap(u.k0 + grid.size(), opt.fft_max, "sample_pinned_U");
      const long N = u.k0 + static_cast<long>(grid.size()) - 1;
      std::vector<double> c(std::max(N, 1L));
      if (p.kernel == Kernel::Riesz) {
        // U = C0 B^gamma in law
        const double c0 = c0_constant(p, opt.q);
        const double s2 = c0 * c0 * std::pow(u.step, 2.0 * p.gamma());
        for (long k = 0; k < N; ++k) c[k] = s2 * fgn_autocov(2.0 * p.gamma(), k);
      } else {
        std::vector<double> v(N + 1);
        parallel_for(N + 1, [&](std::size_t k) { v[k] = pinned_variogram(p, k * u.step, opt.q); });
        for (long k = 0; k < N; ++k) c[k] = 0.5 * (v[k + 1] + v[std::abs(k - 1)] - 2.0 * v[k]);
      }
      std::string note;
      if (increments_by_embedding(e, c, u.k0, note)) return e;
      e.warnings.push_back(note + "; fell back to Cholesky");
    } else {
      e.warnings.push_back("circulant embedding needs a uniform grid anchored at 0; fell back to Cholesky");
    }
  } else if (method != SamplerMethod::Cholesky) {
    throw DomainError("sample_pinned_U supports cholesky and circulant_embedding");
  }
  check_cap(grid.size(), opt.cholesky_max, "sample_pinned_U");
  const auto cov = build_cov_matrix(CovSpec::pinned_u(), p, grid, opt.q);
  e.method = SamplerMethod::Cholesky;
  fill_from_factor(e, cov);
  return e;
}

PathEnsemble sample_time_slice(const ModelParams& p, std::span<const double> grid, int n_paths,
                               std::uint64_t seed, const SamplerOptions& opt) {
  check_cap(grid.size(), opt.cholesky_max, "sample_time_slice");
  CovBuildOptions bo;
  bo.eigen_check_max = 512;
  const auto cov = build_cov_matrix(CovSpec::time_slice(), p, grid, opt.q, bo);
  auto e = make_shell(grid, n_paths, seed, SamplerMethod::Cholesky, "time",
                      ensemble_fingerprint(p.fingerprint(), grid, "time_slice"));
  if (cov.jitter > 0.0) e.warnings.push_back("cholesky jitter " + hexfloat(cov.jitter));
  fill_from_factor(e, cov);
  return e;
}

SpectralSeriesPlan plan_spectral_series(const ModelParams& p, double t, double span, double step,
                                        const SamplerOptions& opt) {
  if (p.d != 1) throw DomainError("spectral series sampling is implemented for d = 1");
  if (!(t > 0.0)) throw DomainError("space slice needs t > 0");
  const auto& q = opt.q;
  auto dens = [&](double r) { return spatial_spectral_density(p, t, r, q); };
  SpectralSeriesPlan plan;
  plan.variance = spatial_covariance(p, t, 0.0, q);
  auto tail = [&](double R) {
    return 2.0 * tanh_sinh_half_line([&](double r, double) { return dens(r); }, R, R, q).value;
  };
  double R = step > 0.0 ? opt.nyquist_factor * constants::pi / step : 1.0;
  double tm = tail(R);
  while (tm > opt.series_tail * plan.variance) {
    R *= 2.0;
    tm = tail(R);
  }
  plan.cutoff = R;
  plan.tail_fraction = tm / plan.variance;

  const double width = span > 0.0 ? std::min(R, 4.0 * constants::pi / span) : R;
  std::vector<double> nodes, weights;
  auto panel = [&](double a, double b, int npts) {
    const auto& gl = GaussLegendre::get(npts);
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    for (int i = 0; i < npts; ++i) {
      nodes.push_back(m + h * gl.x[i]);
      weights.push_back(h * gl.w[i]);
    }
  };
  // graded panels toward the (possibly singular) origin
  constexpr int kGrades = 60;
  const double eps = std::ldexp(width, -kGrades);
  {
    const double sing = p.kernel == Kernel::Riesz ? p.alpha : 0.0;
    nodes.push_back(0.5 * eps);
    weights.push_back(eps / (1.0 - sing) * dens(eps) / dens(0.5 * eps));
  }
  for (int k = kGrades - 1; k >= 0; --k) panel(std::ldexp(width, -k - 1), std::ldexp(width, -k), 8);
  for (double a = width; a < R; a += width) panel(a, std::min(R, a + width), 16);
  plan.freq = nodes;
  plan.mass.resize(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t k) { plan.mass[k] = 2.0 * weights[k] * dens(nodes[k]); });
  return plan;
}

PathEnsemble sample_space_slice(const ModelParams& p, double t, std::span<const double> grid,
                                int n_paths, std::uint64_t seed, SamplerMethod method,
                                const SamplerOptions& opt) {
  if (!(t > 0.0)) throw DomainError("space slice needs t > 0");
  if (grid.empty()) throw DomainError("grid is empty");
  auto e = make_shell(grid, n_paths, seed, method, "space",
                      ensemble_fingerprint(p.fingerprint(), grid, "space_slice@" + hexfloat(t)));
  const auto u = classify(grid);
  if (method == SamplerMethod::CirculantEmbedding) {
    if (p.d != 1) throw DomainError("circulant embedding is implemented for d = 1");
    if (u.ok) {
      check_cap(grid.size(), opt.fft_max, "sample_space_slice");
      const int n = static_cast<int>(grid.size());
      std::vector<double> c(n);
      const double c0 = spatial_covariance(p, t, 0.0, opt.q);
      parallel_for(n, [&](std::size_t k) {
        c[k] = k == 0 ? c0 : c0 - 0.5 * spatial_variogram(p, t, k * u.step, opt.q);
      });
      Embedding emb;
      std::string note;
      if (emb.init(c, note)) {
        parallel_for(e.n_paths(), [&](std::size_t j) {
          auto g = path_stream(seed, j);
          StdNormal z;
          emb.draw(g, z, e.paths.row(j).data());
        });
        return e;
      }
      e.warnings.push_back(note + "; fell back to Cholesky");
    } else {
      e.warnings.push_back("circulant embedding needs a uniform grid; fell back to Cholesky");
    }
  } else if (method == SamplerMethod::SpectralSeries) {
    const double span = grid.back() - grid.front();
    double step = span;
    for (std::size_t i = 1; i < grid.size(); ++i) step = std::min(step, grid[i] - grid[i - 1]);
    const auto plan = plan_spectral_series(p, t, span, step, opt);
    e.series_bias = plan.tail_fraction;
    const std::size_t K = plan.freq.size();
    std::vector<double> amp(K);
    for (std::size_t k = 0; k < K; ++k) amp[k] = std::sqrt(plan.mass[k]);
    const int n = e.n_grid();
    const double x0 = grid.front();
    parallel_for(e.n_paths(), [&](std::size_t j) {
      auto g = path_stream(seed, j);
      StdNormal z;
      std::vector<double> acc(n, 0.0);
      for (std::size_t k = 0; k < K; ++k) {
        const double a = z(g), b = z(g);
        const double r = plan.freq[k];
        if (u.ok) {
          // x_i = x0 + i step: rotate a phasor instead of calling sin/cos per point
          std::complex<double> ph = amp[k] * std::complex<double>(a, -b) *
                                    std::polar(1.0, r * x0);
          const std::complex<double> rot = std::polar(1.0, r * u.step);
          for (int i = 0; i < n; ++i) {
            acc[i] += ph.real();
            ph *= rot;
          }
        } else {
          for (int i = 0; i < n; ++i)
            acc[i] += amp[k] * (a * std::cos(r * grid[i]) + b * std::sin(r * grid[i]));
        }
      }
      for (int i = 0; i < n; ++i) e.paths(j, i) = acc[i];
    });
    return e;
  }
  check_cap(grid.size(), opt.cholesky_max, "sample_space_slice");
  const auto cov = build_cov_matrix(CovSpec::space_slice(t), p, grid, opt.q);
  if (cov.jitter > 0.0) e.warnings.push_back("cholesky jitter " + hexfloat(cov.jitter));
  e.method = SamplerMethod::Cholesky;
  fill_from_factor(e, cov);
  return e;
}

}  // namespace heatfield
