#include "heatfield/cov_matrix.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "heatfield/errors.hpp"
#include "heatfield/parallel.hpp"

namespace heatfield {

std::string_view to_string(CovKind k) {
  switch (k) {
    case CovKind::TimeSlice: return "time_slice";
    case CovKind::SpaceSlice: return "space_slice";
    case CovKind::PinnedU: return "pinned_u";
    case CovKind::Bifbm: return "bifbm";
    case CovKind::FbmRef: return "fbm_ref";
  }
  return "?";
}

CovKind cov_kind_from_string(std::string_view s) {
  for (CovKind k : {CovKind::TimeSlice, CovKind::SpaceSlice, CovKind::PinnedU, CovKind::Bifbm,
                    CovKind::FbmRef})
    if (s == to_string(k)) return k;
  throw ParameterDomainError("unknown covariance kind '" + std::string(s) + "'");
}

bool CovMatrix::psd_ok() const {
  if (std::isnan(min_eigenvalue)) return true;
  const int n = size();
  return n == 0 || min_eigenvalue >= -1e-8 * trace() / n;
}

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw DomainError("grid contains a non-finite value");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw DomainError("grid must be strictly increasing (index " + std::to_string(i) + ")");
  }
}

// grid[i] == m[i] * step up to rounding, with integer m[i]
bool integer_lattice(std::span<const double> grid, double& step, std::vector<long>& m) {
  if (grid.size() < 2) return false;
  step = grid[1] - grid[0];
  for (std::size_t i = 2; i < grid.size(); ++i) step = std::min(step, grid[i] - grid[i - 1]);
  m.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid[i] / step;
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9 * std::max(1.0, std::abs(k))) return false;
    m[i] = static_cast<long>(r);
  }
  return true;
}

// Evaluates f at each distinct argument in parallel.
std::map<double, double> tabulate(const std::vector<double>& args,
                                  const std::function<double(double)>& f) {
  std::vector<double> keys(args);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<double> vals(keys.size());
  parallel_for(keys.size(), [&](std::size_t i) { vals[i] = f(keys[i]); });
  std::map<double, double> out;
  for (std::size_t i = 0; i < keys.size(); ++i) out.emplace(keys[i], vals[i]);
  return out;
}

void fill_time_slice(CovMatrix& m, const ModelParams& p, const QuadratureSpec& q) {
  const auto& g = m.grid;
  const int n = static_cast<int>(g.size());
  const double e = 2.0 * p.gamma();
  double step;
  std::vector<long> mult;
  if (integer_lattice(g, step, mult)) {
    // R(a d, b d) = (a d)^{2 gamma} R(1, b / a): one evaluation per coprime ratio
    struct Key {
      long a, b;
      bool operator==(const Key&) const = default;
    };
    struct KeyHash {
      std::size_t operator()(const Key& k) const noexcept {
        return std::hash<long>()(k.a * 1000003L + k.b);
      }
    };
    std::unordered_map<Key, std::size_t, KeyHash> index;
    std::vector<Key> keys;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i) {
        if (mult[i] == 0 || mult[j] == 0) continue;
        const long gg = std::gcd(mult[i], mult[j]);
        const Key k{mult[j] / gg, mult[i] / gg};
        if (index.emplace(k, keys.size()).second) keys.push_back(k);
      }
    std::vector<double> vals(keys.size());
    parallel_for(keys.size(), [&](std::size_t i) {
      vals[i] = temporal_covariance(p, 1.0, static_cast<double>(keys[i].b) / keys[i].a, q);
    });
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i) {
        double v = 0.0;
        if (mult[i] != 0 && mult[j] != 0) {
          const long gg = std::gcd(mult[i], mult[j]);
          v = std::pow(g[j], e) * vals[index.at(Key{mult[j] / gg, mult[i] / gg})];
        }
        m.values(i, j) = m.values(j, i) = v;
      }
    return;
  }
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    m.values(i, j) = m.values(j, i) = temporal_covariance(p, g[i], g[j], q);
  });
}

void fill_stationary(CovMatrix& m, const ModelParams& p, double t, const QuadratureSpec& q) {
  const int n = static_cast<int>(m.points.rows());
  std::vector<double> lags;
  Eigen::MatrixXd dist(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      dist(i, j) = (m.points.row(i) - m.points.row(j)).norm();
      lags.push_back(dist(i, j));
    }
  const double c0 = spatial_covariance(p, t, 0.0, q);
  auto tab = tabulate(lags, [&](double h) { return h == 0.0 ? 0.0 : spatial_variogram(p, t, h, q); });
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) m.values(i, j) = m.values(j, i) = c0 - 0.5 * tab.at(dist(i, j));
}

void fill_pinned(CovMatrix& m, const ModelParams& p, const QuadratureSpec& q) {
  const auto& g = m.grid;
  const int n = static_cast<int>(g.size());
  double step;
  std::vector<long> mult;
  const bool lattice = integer_lattice(g, step, mult);
  auto arg = [&](int i, int j) {
    // |t_i - t_j| exactly representable as a lattice multiple when possible
    if (lattice) return std::abs(mult[i] - mult[j]) * step;
    return std::abs(g[i] - g[j]);
  };
  auto pos = [&](int i) { return lattice ? std::abs(mult[i]) * step : std::abs(g[i]); };
  std::vector<double> args;
  for (int i = 0; i < n; ++i) args.push_back(pos(i));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) args.push_back(arg(i, j));
  auto v = tabulate(args, [&](double h) { return pinned_variogram(p, h, q); });
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i)
      m.values(i, j) = m.values(j, i) =
          i == j ? v.at(pos(i)) : 0.5 * (v.at(pos(i)) + v.at(pos(j)) - v.at(arg(i, j)));
}

}  // namespace

void finalize_cov_matrix(CovMatrix& m, const CovBuildOptions& opt) {
  const int n = m.size();
  if (n <= opt.eigen_check_max) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.values, Eigen::EigenvaluesOnly);
    m.min_eigenvalue = es.eigenvalues().minCoeff();
  }
  m.active.clear();
  for (int i = 0; i < n; ++i)
    if (m.values(i, i) != 0.0) m.active.push_back(i);
  const int k = static_cast<int>(m.active.size());
  Eigen::MatrixXd sub(k, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) sub(i, j) = m.values(m.active[i], m.active[j]);
  const double scale = k > 0 ? sub.trace() / k : 0.0;
  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd a = sub;
    a.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
      m.factor = llt.matrixL();
      m.jitter = jitter;
      return;
    }
    jitter = jitter == 0.0 ? 1e-12 * scale : 2.0 * jitter;
    if (jitter > opt.max_relative_jitter * scale)
      throw FactorizationError("Cholesky failed up to jitter " + std::to_string(jitter) + " (n=" +
                               std::to_string(k) + ")");
  }
}

CovMatrix build_cov_matrix(const CovSpec& spec, const ModelParams& p, std::span<const double> grid,
                           const QuadratureSpec& q, const CovBuildOptions& opt) {
  check_grid(grid);
  q.validate();
  CovMatrix m;
  m.spec = spec;
  m.grid.assign(grid.begin(), grid.end());
  const int n = static_cast<int>(grid.size());
  m.points = Eigen::Map<const Eigen::VectorXd>(grid.data(), n);
  m.values = Eigen::MatrixXd::Zero(n, n);
  auto require_time_grid = [&] {
    if (grid.front() < 0.0 || grid.back() > p.T)
      throw DomainError("time grid must lie within [0, T=" + std::to_string(p.T) + "]");
  };
  switch (spec.kind) {
    case CovKind::TimeSlice:
      require_time_grid();
      fill_time_slice(m, p, q);
      break;
    case CovKind::SpaceSlice:
      if (!(spec.t > 0.0)) throw DomainError("space slice needs t > 0");
      fill_stationary(m, p, spec.t, q);
      break;
    case CovKind::PinnedU:
      require_time_grid();
      fill_pinned(m, p, q);
      break;
    case CovKind::Bifbm:
      for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i)
          m.values(i, j) = m.values(j, i) = bifbm_covariance(spec.Hb, spec.K, grid[i], grid[j]);
      break;
    case CovKind::FbmRef:
      if (!(spec.gamma > 0.0 && spec.gamma < 1.0))
        throw ParameterDomainError("fBm index must lie in (0, 1)");
      for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i)
          m.values(i, j) = m.values(j, i) = fbm_covariance(spec.gamma, grid[i], grid[j]);
      break;
  }
  finalize_cov_matrix(m, opt);
  return m;
}

CovMatrix build_space_cov_matrix(const ModelParams& p, double t, const Eigen::MatrixXd& points,
                                 const QuadratureSpec& q, const CovBuildOptions& opt) {
  if (points.rows() == 0) throw DomainError("no points");
  if (points.cols() != p.d)
    throw DomainError("points have " + std::to_string(points.cols()) + " columns, model has d=" +
                      std::to_string(p.d));
  if (!(t > 0.0)) throw DomainError("space slice needs t > 0");
  q.validate();
  CovMatrix m;
  m.spec = CovSpec::space_slice(t);
  m.points = points;
  m.grid.resize(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) m.grid[i] = points(i, 0);
  m.values = Eigen::MatrixXd::Zero(points.rows(), points.rows());
  fill_stationary(m, p, t, q);
  finalize_cov_matrix(m, opt);
  return m;
}

void write_csv(const CovMatrix& m, std::ostream& os) {
  const auto old = os.precision(17);
  os << "i,j,arg_i,arg_j,value\n";
  for (int i = 0; i < m.size(); ++i)
    for (int j = i; j < m.size(); ++j)
      os << i << ',' << j << ',' << m.grid[i] << ',' << m.grid[j] << ',' << m.values(i, j) << '\n';
  os.precision(old);
}

void write_density_csv(const SpectralDensity& f, std::span<const double> args, std::ostream& os) {
  const auto old = os.precision(17);
  os << "arg,value\n";
  for (double a : args) os << a << ',' << f(a) << '\n';
  os.precision(old);
}

}  // namespace heatfield
