#pragma once

// Estimators that check scaling exponents, moduli of continuity, local
// nondeterminism and sampler laws against the model.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "heatfield/cov_matrix.hpp"
#include "heatfield/samplers.hpp"

namespace heatfield {

struct VariogramTable {
  std::vector<double> lags;
  std::vector<double> values;
  std::vector<double> stderrs;  ///< across-path standard error (0 for analytic tables)
  std::vector<long> n_pairs;    ///< pairs per path
};

/// Restricts increments to pairs with both points inside [lo, hi].
struct Window {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// Lags must be integer multiples of the (uniform) grid step.
VariogramTable empirical_variogram(const PathEnsemble& e, std::span<const double> lags,
                                   const Window& w = {});

struct ExponentReport {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double r_squared = 0.0;
  double prefactor = 0.0;  ///< fitted c in value ~ c lag^{2 estimate}
  std::vector<double> lags_used;
  double theory_value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Half the slope of a weighted log-log least-squares fit (weights
/// 1/se_log^2, or unit weights when a table has no error bars). Needs >= 5
/// lags spanning >= 3 octaves.
ExponentReport fit_exponent(const VariogramTable& table, double theory_value, double tolerance);

struct LogLogFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};
/// Unweighted least squares of log y on log x.
LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y);

enum class ModulusKind { UniformLog, LocalLogLog, ChungLogLog };
std::string_view to_string(ModulusKind k);
ModulusKind modulus_kind_from_string(std::string_view s);

struct ModulusReport {
  ModulusKind normalizer = ModulusKind::UniformLog;
  std::vector<double> epsilons;               ///< strictly decreasing
  std::vector<std::vector<double>> per_path;  ///< [eps][path]
  std::vector<double> medians;                ///< ensemble median per eps
  /// UniformLog only: the pairwise form, sup of |X(t)-X(s)| / (|t-s|^g sqrt(log 1/|t-s|)).
  std::vector<std::vector<double>> per_path_pairwise;
  std::vector<double> medians_pairwise;
  /// Coefficient of variation of the medians over the 4 smallest eps.
  double stability = 0.0;
  double stability_pairwise = 0.0;
  /// max / min of the medians over all eps.
  double spread = 0.0;
};

/// `index` is the Hoelder index (gamma in time, beta in space). For the local
/// kinds `anchor` must be a grid point. Every eps must span >= 8 grid steps.
ModulusReport modulus_statistic(const PathEnsemble& e, ModulusKind kind, double index,
                                std::span<const double> epsilons,
                                double anchor = std::numeric_limits<double>::quiet_NaN(),
                                const Window& w = {});

/// Var(X_target | X_cond) by a Schur complement of cov.values.
double slnd_conditional_variance(const CovMatrix& cov, int target, std::span<const int> cond);

struct SlndOptions {
  double t = 1.0;
  double step = 1.0 / 16.0;
  double half_width = 1.0;
  int max_points = 8;
  /// The constant is frozen from configurations with at most this many
  /// conditioning points, times `slack`.
  int calibration_points = 1;
  double slack = 0.5;
};

struct SlndReport {
  double exponent = 0.0;        ///< 4H + alpha - d
  double frozen_constant = 0.0;
  double min_ratio = 0.0;       ///< over all configurations
  std::vector<double> min_ratio_by_size;
  long configurations = 0;
  long violations = 0;
  std::vector<std::string> offending;  ///< first few violating configurations
  bool pass = false;
};

/// Exhaustive search over targets x > 0 and conditioning sets of up to
/// max_points lattice points in [-half_width, half_width]; the bound uses
/// min(|x|, |x - y_j|). Reflection symmetry removes targets x < 0.
SlndReport slnd_search(const ModelParams& p, const SlndOptions& opt = {},
                       const QuadratureSpec& q = {});

/// Variogram exponent of the forward-difference derivative field. Throws
/// RegimeError unless 2H - (d - alpha)/2 > 1.
ExponentReport smoothness_check(const PathEnsemble& e, const ModelParams& p,
                                std::span<const double> lags, double tolerance);

/// max over grid pairs of |R(ct, cs) - c^{2 gamma} R(t, s)| / R(t, t).
double self_similarity_check(const ModelParams& p, double c, std::span<const double> grid,
                             const QuadratureSpec& q = {});

struct WhiteningReport {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 0.0;
  double significance = 0.0;
  bool pass = false;
};

/// Whitens each path with the inverse Cholesky factor of cov and applies the
/// likelihood-ratio test of "sample covariance = identity".
WhiteningReport whitening_test(const PathEnsemble& e, const CovMatrix& cov,
                               double significance = 1e-3);

struct SandwichReport {
  double c_lower = 0.0, c_upper = 0.0;
  double min_lower_margin = 0.0;  ///< min of I / (c_lower * lower envelope) on the check grid
  double min_upper_margin = 0.0;  ///< min of (c_upper * upper envelope) / I
  bool pass = false;
};

/// c1 (t^{2H} ^ 1) (1 + r^2)^{-2H} <= I_t(r^2) <= c2 (t^{2H} + 1) (1 + r^2)^{-2H}:
/// constants fitted on (times, r_fit) with the given slack factor (< 1),
/// checked on (times, r_check).
SandwichReport sandwich_check(double H, std::span<const double> times,
                              std::span<const double> r_fit, std::span<const double> r_check,
                              double slack, const QuadratureSpec& q = {});

struct RemainderBoundReport {
  double c_fit = 0.0;
  double worst_ratio = 0.0;  ///< max of value / (c_fit gap^2)
  double slack = 0.0;
  bool pass = false;
};

/// E|Y'(t) - Y'(s)|^2 <= C |t - s|^2 on [a, b]: C fitted at s = a with the
/// smallest gap, checked at every s = a + k g_max and gap in `gaps`.
RemainderBoundReport remainder_bound_check(const ModelParams& p, double a, double b,
                                           std::span<const double> gaps, double slack,
                                           const QuadratureSpec& q = {});

}  // namespace heatfield
