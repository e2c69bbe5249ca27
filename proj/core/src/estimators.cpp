#include "heatfield/estimators.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

#include "heatfield/errors.hpp"
#include "heatfield/parallel.hpp"

namespace heatfield {

namespace {

double uniform_step(const std::vector<double>& grid) {
  const std::size_t n = grid.size();
  if (n < 2) throw LagNotOnGridError("grid has fewer than two points");
  const double step = (grid.back() - grid.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(grid[i] - (grid.front() + i * step)) > 1e-9 * step)
      throw LagNotOnGridError("grid is not uniform");
  return step;
}

int lag_steps(double lag, double step) {
  const double k = lag / step;
  const double r = std::round(k);
  if (r < 1.0 || std::abs(k - r) > 1e-6 * std::max(1.0, r)) {
    std::ostringstream os;
    os << "lag " << lag << " is not a positive multiple of the grid step " << step;
    throw LagNotOnGridError(os.str());
  }
  return static_cast<int>(r);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + m, v.end());
  const double hi = v[m];
  if (v.size() % 2) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + m));
}

double coeff_of_variation(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / v.size());
  return mean == 0.0 ? 0.0 : sd / mean;
}

}  // namespace

VariogramTable empirical_variogram(const PathEnsemble& e, std::span<const double> lags,
                                   const Window& w) {
  const double step = uniform_step(e.grid);
  const int n = e.n_grid();
  int lo = 0, hi = n - 1;
  while (lo < n && e.grid[lo] < w.lo - 1e-12 * step) ++lo;
  while (hi >= 0 && e.grid[hi] > w.hi + 1e-12 * step) --hi;
  VariogramTable t;
  for (double lag : lags) {
    const int k = lag_steps(lag, step);
    const long pairs = hi - k - lo + 1;
    if (pairs < 1) throw LagNotOnGridError("lag exceeds the window");
    std::vector<double> per(e.n_paths());
    parallel_for(e.n_paths(), [&](std::size_t j) {
      const auto row = e.paths.row(j);
      double s = 0.0;
      for (int i = lo; i + k <= hi; ++i) {
        const double d = row[i + k] - row[i];
        s += d * d;
      }
      per[j] = s / pairs;
    });
    double mean = 0.0;
    for (double v : per) mean += v;
    mean /= per.size();
    double ss = 0.0;
    for (double v : per) ss += (v - mean) * (v - mean);
    const double se = per.size() > 1 ? std::sqrt(ss / (per.size() - 1) / per.size()) : 0.0;
    t.lags.push_back(k * step);
    t.values.push_back(mean);
    t.stderrs.push_back(se);
    t.n_pairs.push_back(pairs);
  }
  return t;
}

LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DegenerateFitError("log-log fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DegenerateFitError("log-log fit of nonpositive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DegenerateFitError("log-log fit with a single abscissa");
  LogLogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return f;
}

ExponentReport fit_exponent(const VariogramTable& table, double theory_value, double tolerance) {
  const std::size_t n = table.lags.size();
  if (n < 5) throw DegenerateFitError("need at least 5 lags, got " + std::to_string(n));
  const auto [mn, mx] = std::minmax_element(table.lags.begin(), table.lags.end());
  if (!(*mx >= 8.0 * *mn * (1.0 - 1e-12)))
    throw DegenerateFitError("lags must span at least 3 octaves");
  std::vector<double> x(n), y(n), w(n);
  bool weighted = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(table.values[i] > 0.0))
      throw DegenerateFitError("variogram value at lag " + std::to_string(table.lags[i]) +
                               " is not positive");
    x[i] = std::log(table.lags[i]);
    y[i] = std::log(table.values[i]);
    const double se = i < table.stderrs.size() ? table.stderrs[i] : 0.0;
    if (!(se > 0.0)) weighted = false;
    w[i] = se > 0.0 ? std::pow(table.values[i] / se, 2) : 1.0;
  }
  if (!weighted) std::fill(w.begin(), w.end(), 1.0);
  double sw = 0.0, mxw = 0.0, myw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    mxw += w[i] * x[i];
    myw += w[i] * y[i];
  }
  mxw /= sw;
  myw /= sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - mxw) * (x[i] - mxw);
    sxy += w[i] * (x[i] - mxw) * (y[i] - myw);
    syy += w[i] * (y[i] - myw) * (y[i] - myw);
  }
  const double slope = sxy / sxx;
  const double icpt = myw - slope * mxw;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) rss += w[i] * std::pow(y[i] - icpt - slope * x[i], 2);
  double var_slope;
  if (weighted)
    var_slope = std::max(1.0, rss / (n - 2)) / sxx;
  else
    var_slope = rss / (n - 2) / sxx;
  ExponentReport r;
  r.estimate = 0.5 * slope;
  r.stderr_ = 0.5 * std::sqrt(var_slope);
  r.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - rss / syy, 0.0, 1.0);
  r.prefactor = std::exp(icpt);
  r.lags_used = table.lags;
  r.theory_value = theory_value;
  r.tolerance = tolerance;
  r.pass = std::abs(r.estimate - theory_value) <= tolerance;
  return r;
}

std::string_view to_string(ModulusKind k) {
  switch (k) {
    case ModulusKind::UniformLog: return "uniform_log";
    case ModulusKind::LocalLogLog: return "local_loglog";
    case ModulusKind::ChungLogLog: return "chung_loglog";
  }
  return "?";
}

ModulusKind modulus_kind_from_string(std::string_view s) {
  for (auto k : {ModulusKind::UniformLog, ModulusKind::LocalLogLog, ModulusKind::ChungLogLog})
    if (s == to_string(k)) return k;
  throw ParameterDomainError("unknown modulus kind '" + std::string(s) + "'");
}

ModulusReport modulus_statistic(const PathEnsemble& e, ModulusKind kind, double index,
                                std::span<const double> epsilons, double anchor, const Window& w) {
  const double step = uniform_step(e.grid);
  const int n = e.n_grid();
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1])) throw DomainError("epsilons must be strictly decreasing");
  ModulusReport rep;
  rep.normalizer = kind;
  rep.epsilons.assign(epsilons.begin(), epsilons.end());
  std::vector<int> ks;
  for (double eps : epsilons) {
    const int k = static_cast<int>(std::floor(eps / step + 1e-9));
    if (k < 8)
      throw WindowUnderresolvedError("eps=" + std::to_string(eps) + " spans only " +
                                     std::to_string(k) + " grid steps (need >= 8)");
    if (kind != ModulusKind::UniformLog && !(eps < std::exp(-1.0)))
      throw DomainError("log log(1/eps) needs eps < 1/e");
    ks.push_back(k);
  }
  int lo = 0, hi = n - 1, i0 = -1;
  if (kind == ModulusKind::UniformLog) {
    while (lo < n && e.grid[lo] < w.lo - 1e-12 * step) ++lo;
    while (hi >= 0 && e.grid[hi] > w.hi + 1e-12 * step) --hi;
    if (hi - lo < ks.front()) throw WindowUnderresolvedError("window shorter than the largest eps");
  } else {
    const double k = (anchor - e.grid.front()) / step;
    if (!std::isfinite(k) || std::abs(k - std::round(k)) > 1e-6)
      throw LagNotOnGridError("anchor is not a grid point");
    i0 = static_cast<int>(std::round(k));
    if (i0 - ks.front() < 0 || i0 + ks.front() >= n)
      throw WindowUnderresolvedError("eps-neighbourhood of the anchor leaves the grid");
  }
  const int np = e.n_paths();
  rep.per_path.assign(ks.size(), std::vector<double>(np));
  if (kind == ModulusKind::UniformLog) rep.per_path_pairwise.assign(ks.size(), std::vector<double>(np));
  parallel_for(np, [&](std::size_t j) {
    const auto row = e.paths.row(j);
    for (std::size_t m = 0; m < ks.size(); ++m) {
      const int k = ks[m];
      const double eps = epsilons[m];
      if (kind == ModulusKind::UniformLog) {
        double sup = 0.0, sup_pair = 0.0;
        for (int i = lo; i < hi; ++i)
          for (int l = 1; l <= k && i + l <= hi; ++l) {
            const double d = std::abs(row[i + l] - row[i]);
            sup = std::max(sup, d);
            const double h = l * step;
            if (h < 1.0) sup_pair = std::max(sup_pair, d / (std::pow(h, index) * std::sqrt(std::log(1.0 / h))));
          }
        rep.per_path[m][j] = sup / (std::pow(eps, index) * std::sqrt(std::log(1.0 / eps)));
        rep.per_path_pairwise[m][j] = sup_pair;
      } else {
        double sup = 0.0;
        for (int l = -k; l <= k; ++l) sup = std::max(sup, std::abs(row[i0 + l] - row[i0]));
        const double ll = std::log(std::log(1.0 / eps));
        rep.per_path[m][j] = kind == ModulusKind::LocalLogLog
                                 ? sup / (std::pow(eps, index) * std::sqrt(ll))
                                 : sup / std::pow(eps / ll, index);
      }
    }
  });
  for (const auto& v : rep.per_path) rep.medians.push_back(median(v));
  for (const auto& v : rep.per_path_pairwise) rep.medians_pairwise.push_back(median(v));
  const std::size_t m = rep.medians.size();
  const std::size_t take = std::min<std::size_t>(4, m);
  rep.stability = coeff_of_variation(std::span<const double>(rep.medians).last(take));
  if (!rep.medians_pairwise.empty())
    rep.stability_pairwise =
        coeff_of_variation(std::span<const double>(rep.medians_pairwise).last(take));
  const auto [mn, mx] = std::minmax_element(rep.medians.begin(), rep.medians.end());
  rep.spread = *mn > 0.0 ? *mx / *mn : std::numeric_limits<double>::infinity();
  if (*mx == 0.0) rep.spread = 1.0;
  return rep;
}

double slnd_conditional_variance(const CovMatrix& cov, int target, std::span<const int> cond) {
  const int n = cov.size();
  if (target < 0 || target >= n) throw DomainError("target index out of range");
  for (int c : cond) {
    if (c < 0 || c >= n) throw DomainError("conditioning index out of range");
    if (c == target) throw DomainError("conditioning set contains the target");
  }
  const double v = cov.values(target, target);
  if (cond.empty()) return v;
  const int k = static_cast<int>(cond.size());
  Eigen::MatrixXd S(k, k);
  Eigen::VectorXd b(k);
  for (int i = 0; i < k; ++i) {
    b[i] = cov.values(cond[i], target);
    for (int j = 0; j < k; ++j) S(i, j) = cov.values(cond[i], cond[j]);
  }
  const double tol = 1e-12 * S.trace() / k;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  // pseudo-inverse on the numerically nonsingular part handles duplicate points
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  double red = 0.0;
  const Eigen::VectorXd proj = es.eigenvectors().transpose() * b;
  for (int i = 0; i < k; ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam > tol) red += proj[i] * proj[i] / lam;
    else if (std::abs(proj[i]) > 1e-6 * std::sqrt(v * std::max(tol, 1e-300)))
      throw FactorizationError("singular conditioning block");
  }
  return std::max(0.0, v - red);
}

SlndReport slnd_search(const ModelParams& p, const SlndOptions& opt, const QuadratureSpec& q) {
  SlndReport rep;
  rep.exponent = 4.0 * p.H + p.alpha - p.d;
  const int half = static_cast<int>(std::lround(opt.half_width / opt.step));
  const int L = 2 * half + 1;  // lattice -half..half
  std::vector<double> cov_lag(L);
  const double c0 = spatial_covariance(p, opt.t, 0.0, q);
  parallel_for(L, [&](std::size_t k) {
    cov_lag[k] = k == 0 ? c0 : c0 - 0.5 * spatial_variogram(p, opt.t, k * opt.step, q);
  });
  auto C = [&](int i, int j) { return cov_lag[std::abs(i - j)]; };
  const int nmax = opt.max_points;
  rep.min_ratio_by_size.assign(nmax + 1, std::numeric_limits<double>::infinity());

  struct Hit {
    double ratio;
    int target;
    std::vector<int> set;
  };
  // per target: DFS over increasing index subsets of the other lattice points
  std::vector<std::vector<Hit>> worst(half);
  std::vector<std::vector<double>> min_by_size(half, std::vector<double>(nmax + 1, INFINITY));
  std::vector<long> counts(half, 0);
  parallel_for(half, [&](std::size_t ti) {
    const int x = static_cast<int>(ti) + 1;  // targets 1..half (x > 0)
    std::vector<int> others;
    for (int y = -half; y <= half; ++y)
      if (y != x) others.push_back(y);
    const int M = static_cast<int>(others.size());
    // L rows of the Cholesky factor of the conditioning block, the projection
    // coefficients of the target, and the conditional variance per depth
    std::vector<std::vector<double>> Lrow(nmax);
    std::vector<double> coef(nmax);
    std::vector<double> cv(nmax + 1);
    std::vector<int> chosen(nmax), mind(nmax + 1);
    cv[0] = C(x, x);
    mind[0] = std::abs(x);  // y0 = 0
    min_by_size[ti][0] = cv[0] / std::pow(mind[0] * opt.step, rep.exponent);
    long count = 1;
    auto dfs = [&](auto&& self, int depth, int start) -> void {
      if (depth == nmax) return;
      for (int a = start; a < M; ++a) {
        const int y = others[a];
        auto& row = Lrow[depth];
        row.resize(depth);
        double ss = 0.0;
        for (int i = 0; i < depth; ++i) {
          double s = C(y, chosen[i]);
          for (int k = 0; k < i; ++k) s -= row[k] * Lrow[i][k];
          row[i] = s / Lrow[i][i];
          ss += row[i] * row[i];
        }
        const double piv2 = C(y, y) - ss;
        if (!(piv2 > 1e-14 * C(y, y))) continue;  // numerically dependent point
        const double piv = std::sqrt(piv2);
        row.push_back(piv);
        double s = C(x, y);
        for (int i = 0; i < depth; ++i) s -= row[i] * coef[i];
        coef[depth] = s / piv;
        cv[depth + 1] = cv[depth] - coef[depth] * coef[depth];
        chosen[depth] = y;
        mind[depth + 1] = std::min(mind[depth], std::abs(x - y));
        const double ratio = std::max(cv[depth + 1], 0.0) / std::pow(mind[depth + 1] * opt.step, rep.exponent);
        ++count;
        auto& mb = min_by_size[ti][depth + 1];
        if (ratio < mb) mb = ratio;
        if (worst[ti].size() < 4 || ratio < worst[ti].back().ratio) {
          worst[ti].push_back({ratio, x, std::vector<int>(chosen.begin(), chosen.begin() + depth + 1)});
          std::sort(worst[ti].begin(), worst[ti].end(),
                    [](const Hit& l, const Hit& r) { return l.ratio < r.ratio; });
          if (worst[ti].size() > 4) worst[ti].pop_back();
        }
        self(self, depth + 1, a + 1);
      }
    };
    dfs(dfs, 0, 0);
    counts[ti] = count;
  });
  for (int ti = 0; ti < half; ++ti) {
    rep.configurations += counts[ti];
    for (int k = 0; k <= nmax; ++k)
      rep.min_ratio_by_size[k] = std::min(rep.min_ratio_by_size[k], min_by_size[ti][k]);
  }
  double calib = INFINITY;
  for (int k = 0; k <= std::min(nmax, opt.calibration_points); ++k)
    calib = std::min(calib, rep.min_ratio_by_size[k]);
  rep.frozen_constant = opt.slack * calib;
  rep.min_ratio = *std::min_element(rep.min_ratio_by_size.begin(), rep.min_ratio_by_size.end());
  std::vector<Hit> all;
  for (auto& w : worst) all.insert(all.end(), w.begin(), w.end());
  std::sort(all.begin(), all.end(), [](const Hit& l, const Hit& r) { return l.ratio < r.ratio; });
  for (const auto& h : all) {
    if (h.ratio >= rep.frozen_constant) break;
    ++rep.violations;
    if (rep.offending.size() < 8) {
      std::ostringstream os;
      os << "x=" << h.target * opt.step << " y={";
      for (std::size_t i = 0; i < h.set.size(); ++i) os << (i ? "," : "") << h.set[i] * opt.step;
      os << "} ratio=" << h.ratio;
      rep.offending.push_back(os.str());
    }
  }
  // the per-target lists are truncated, so count violations exactly from the minima
  if (rep.min_ratio < rep.frozen_constant && rep.violations == 0) rep.violations = 1;
  rep.pass = rep.min_ratio >= rep.frozen_constant;
  return rep;
}

ExponentReport smoothness_check(const PathEnsemble& e, const ModelParams& p,
                                std::span<const double> lags, double tolerance) {
  const double b = p.raw_beta();
  if (!(b > 1.0)) {
    std::ostringstream os;
    os << "smoothness check needs 2H - (d - alpha)/2 > 1, got " << b;
    throw RegimeError(os.str());
  }
  const double step = uniform_step(e.grid);
  PathEnsemble D;
  D.units = e.units;
  const int n = e.n_grid() - 1;
  for (int i = 0; i < n; ++i) D.grid.push_back(e.grid.front() + (i + 0.5) * step);
  D.paths.resize(e.n_paths(), n);
  for (int j = 0; j < e.n_paths(); ++j)
    for (int i = 0; i < n; ++i) D.paths(j, i) = (e.paths(j, i + 1) - e.paths(j, i)) / step;
  return fit_exponent(empirical_variogram(D, lags), b - 1.0, tolerance);
}

double self_similarity_check(const ModelParams& p, double c, std::span<const double> grid,
                             const QuadratureSpec& q) {
  if (p.kernel != Kernel::Riesz) throw UnsupportedKernelError("self-similarity needs the Riesz kernel");
  if (!(c > 0.0)) throw DomainError("scale factor must be > 0");
  for (double g : grid)
    if (g < 0.0 || c * g > p.T) throw DomainError("c * grid must lie within [0, T]");
  const double f = std::pow(c, 2.0 * p.gamma());
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) pairs.emplace_back(grid[i], grid[j]);
  std::vector<double> dev(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [t, s] = pairs[k];
    const double norm = temporal_covariance(p, std::max(t, s), std::max(t, s), q);
    if (norm == 0.0) return;
    dev[k] = std::abs(temporal_covariance(p, c * t, c * s, q) - f * temporal_covariance(p, t, s, q)) / norm;
  });
  return dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
}

WhiteningReport whitening_test(const PathEnsemble& e, const CovMatrix& cov, double significance) {
  if (e.n_grid() != cov.size()) throw DomainError("ensemble and covariance sizes differ");
  const int k = static_cast<int>(cov.active.size());
  const int n = e.n_paths();
  if (k == 0) throw DomainError("covariance matrix has no active rows");
  Eigen::MatrixXd X(k, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < k; ++i) X(i, j) = e.paths(j, cov.active[i]);
  cov.factor.triangularView<Eigen::Lower>().solveInPlace(X);
  const Eigen::MatrixXd S = X * X.transpose() / n;
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw FactorizationError("whitened sample covariance is singular");
  double logdet = 0.0;
  for (int i = 0; i < k; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  WhiteningReport r;
  r.statistic = n * (S.trace() - logdet - k);
  r.dof = 0.5 * k * (k + 1);
  r.significance = significance;
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, std::max(0.0, r.statistic)));
  r.pass = r.p_value >= significance;
  return r;
}

SandwichReport sandwich_check(double H, std::span<const double> times,
                              std::span<const double> r_fit, std::span<const double> r_check,
                              double slack, const QuadratureSpec& q) {
  if (!(slack > 0.0 && slack <= 1.0)) throw DomainError("slack must lie in (0, 1]");
  auto env = [&](double r) { return std::pow(1.0 + r * r, -2.0 * H); };
  auto lower = [&](double t, double r) { return std::min(std::pow(t, 2.0 * H), 1.0) * env(r); };
  auto upper = [&](double t, double r) { return (std::pow(t, 2.0 * H) + 1.0) * env(r); };
  double lo = INFINITY, hi = 0.0;
  for (double t : times)
    for (double r : r_fit) {
      const double I = time_smoothing_integral(H, t, r * r, q);
      lo = std::min(lo, I / lower(t, r));
      hi = std::max(hi, I / upper(t, r));
    }
  SandwichReport rep;
  rep.c_lower = slack * lo;
  rep.c_upper = hi / slack;
  rep.min_lower_margin = INFINITY;
  rep.min_upper_margin = INFINITY;
  for (double t : times)
    for (double r : r_check) {
      const double I = time_smoothing_integral(H, t, r * r, q);
      rep.min_lower_margin = std::min(rep.min_lower_margin, I / (rep.c_lower * lower(t, r)));
      rep.min_upper_margin = std::min(rep.min_upper_margin, rep.c_upper * upper(t, r) / I);
    }
  rep.pass = rep.min_lower_margin >= 1.0 && rep.min_upper_margin >= 1.0;
  return rep;
}

RemainderBoundReport remainder_bound_check(const ModelParams& p, double a, double b,
                                           std::span<const double> gaps, double slack,
                                           const QuadratureSpec& q) {
  if (gaps.empty()) throw DomainError("no gaps");
  const double gmin = *std::min_element(gaps.begin(), gaps.end());
  const double gmax = *std::max_element(gaps.begin(), gaps.end());
  RemainderBoundReport rep;
  rep.slack = slack;
  rep.c_fit = y_derivative_variogram(p, a, a + gmin, q, a) / (gmin * gmin);
  std::vector<std::pair<double, double>> pts;
  for (double s = a; s + gmin <= b * (1.0 + 1e-12); s += gmax)
    for (double g : gaps)
      if (s + g <= b * (1.0 + 1e-12)) pts.emplace_back(s, g);
  std::vector<double> ratio(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) {
    const auto [s, g] = pts[k];
    ratio[k] = y_derivative_variogram(p, s, s + g, q, a) / (rep.c_fit * g * g);
  });
  rep.worst_ratio = *std::max_element(ratio.begin(), ratio.end());
  rep.pass = rep.worst_ratio <= 1.0 + slack;
  return rep;
}

}  // namespace heatfield
