#pragma once

// Covariance matrices of the processes in scope on finite grids, with the
// minimal diagonal jitter needed for a Cholesky factorization.

#include <Eigen/Dense>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "heatfield/covariance.hpp"

namespace heatfield {

enum class CovKind { TimeSlice, SpaceSlice, PinnedU, Bifbm, FbmRef };

std::string_view to_string(CovKind k);
CovKind cov_kind_from_string(std::string_view s);

/// Which process to assemble. Only the fields relevant to `kind` are read.
struct CovSpec {
  CovKind kind = CovKind::TimeSlice;
  double t = 1.0;      // SpaceSlice: time of the slice
  double Hb = 0.5;     // Bifbm
  double K = 1.0;      // Bifbm
  double gamma = 0.5;  // FbmRef

  static CovSpec time_slice() { return {CovKind::TimeSlice}; }
  static CovSpec space_slice(double t) { return {CovKind::SpaceSlice, t}; }
  static CovSpec pinned_u() { return {CovKind::PinnedU}; }
  static CovSpec bifbm(double Hb, double K) { return {CovKind::Bifbm, 1.0, Hb, K}; }
  static CovSpec fbm_ref(double g) { return {CovKind::FbmRef, 1.0, 0.5, 1.0, g}; }
};

struct CovMatrix {
  CovSpec spec;
  std::vector<double> grid;  ///< 1-D coordinates (first coordinate for d > 1)
  Eigen::MatrixXd points;    ///< n x dim coordinates
  Eigen::MatrixXd values;    ///< before jitter
  double jitter = 0.0;       ///< added to the diagonal of `active` rows before factoring
  double min_eigenvalue = std::numeric_limits<double>::quiet_NaN();  ///< NaN if not computed
  /// Rows with a nonzero diagonal. Rows with a zero diagonal are identically
  /// zero (e.g. t = 0 in the time slice) and are excluded from the factor.
  std::vector<int> active;
  Eigen::MatrixXd factor;  ///< lower Cholesky factor of values(active, active) + jitter I

  int size() const { return static_cast<int>(values.rows()); }
  double trace() const { return values.trace(); }
  /// min eigenvalue >= -1e-8 trace / n (true if not computed).
  bool psd_ok() const;
};

struct CovBuildOptions {
  /// Eigenvalue check is skipped above this size (cost O(n^3) with a large constant).
  int eigen_check_max = 1024;
  double max_relative_jitter = 1e-3;
};

/// Grid must be strictly increasing and nonempty.
CovMatrix build_cov_matrix(const CovSpec& spec, const ModelParams& p, std::span<const double> grid,
                           const QuadratureSpec& q = {}, const CovBuildOptions& opt = {});

/// Space slice on arbitrary points in R^d (rows of `points`, d columns).
CovMatrix build_space_cov_matrix(const ModelParams& p, double t, const Eigen::MatrixXd& points,
                                 const QuadratureSpec& q = {}, const CovBuildOptions& opt = {});

/// Fills min_eigenvalue, active, jitter and factor of an assembled matrix.
void finalize_cov_matrix(CovMatrix& m, const CovBuildOptions& opt = {});

/// CSV: i,j,arg_i,arg_j,value (upper triangle including the diagonal).
void write_csv(const CovMatrix& m, std::ostream& os);

/// CSV: arg,value.
void write_density_csv(const SpectralDensity& f, std::span<const double> args, std::ostream& os);

}  // namespace heatfield
