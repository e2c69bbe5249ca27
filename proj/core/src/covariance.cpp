#include "heatfield/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "heatfield/constants.hpp"
#include "heatfield/errors.hpp"

namespace heatfield {

namespace {

using constants::pi;

void require_riesz(const ModelParams& p, const char* what) {
  if (p.kernel != Kernel::Riesz)
    throw UnsupportedKernelError(std::string(what) + ": only the Riesz kernel has an exact backend");
}

void require_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError(std::string(what) + ": time must be finite and >= 0");
}

// (x^b - 1) / b, continuous at b = 0
double exprel_pow(double b, double y) { return b == 0.0 ? y : std::expm1(b * y) / b; }

// G(lo + diff) - G(lo) for G(s) = s^b / b (log s when b = 0)
double antideriv_gap(double b, double lo, double diff) {
  return std::pow(lo, b) * exprel_pow(b, std::log1p(diff / lo));
}

double temporal_integral_split(double H, double p_codim, double t, double s,
                               const QuadratureSpec& q) {
  const double a = 2.0 * H - 2.0;
  const double b = 1.0 - 0.5 * p_codim;
  const double delta = t - s;
  double total = 0.0;
  total += tanh_sinh(
               [&](double, double dl, double dr) {
                 return std::pow(delta + dr, a) * antideriv_gap(b, dr, 2.0 * dl);
               },
               -s, 0.0, q)
               .value;
  if (delta > 0.0) {
    total += tanh_sinh(
                 [&](double, double dl, double dr) {
                   return std::pow(dr, a) * antideriv_gap(b, dl, 2.0 * s);
                 },
                 0.0, delta, q)
                 .value;
  }
  total += tanh_sinh(
               [&](double, double dl, double dr) {
                 return std::pow(dl, a) * antideriv_gap(b, delta + dl, 2.0 * dr);
               },
               delta, t, q)
               .value;
  return 0.5 * total;
}

double temporal_integral_naive(double H, double p_codim, double t, double s,
                               const QuadratureSpec& q) {
  const double a = 2.0 * H - 2.0;
  const double b = 1.0 - 0.5 * p_codim;
  const double delta = t - s;
  auto G = [b](double x) { return b == 0.0 ? std::log(x) : std::pow(x, b) / b; };
  auto f = [&](double w, double, double) {
    const double hi = w <= delta ? 2.0 * s + w : 2.0 * t - w;
    return std::pow(std::abs(w - delta), a) * (G(hi) - G(std::abs(w)));
  };
  return 0.5 * tanh_sinh(f, -s, t, q).value;
}

// ---------------------------------------------------------------------------
// Radial transforms for the space slice.

double kernel_value(int d, double x) {
  if (d == 1) return std::cos(x);
  if (d == 2) return std::cyl_bessel_j(0.0, x);
  return x == 0.0 ? 1.0 : std::sin(x) / x;
}

double one_minus_kernel(int d, double x) {
  if (d == 1) {
    const double sh = std::sin(0.5 * x);
    return 2.0 * sh * sh;
  }
  const double x2 = x * x;
  if (d == 2) {
    if (x < 0.05) return 0.25 * x2 * (1.0 - x2 / 16.0 * (1.0 - x2 / 36.0 * (1.0 - x2 / 64.0)));
    return 1.0 - std::cyl_bessel_j(0.0, x);
  }
  if (x < 0.1)
    return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))));
  return 1.0 - std::sin(x) / x;
}

// k-th positive zero of the radial kernel (k >= 1), approximate for d = 2
double kernel_zero(int d, int k) {
  if (d == 1) return (k - 0.5) * pi;
  if (d == 3) return k * pi;
  const double beta = (k - 0.25) * pi;
  return beta + 1.0 / (8.0 * beta) - 31.0 / (384.0 * beta * beta * beta);
}

struct RadialTransform {
  int d;
  double r_scale;  // where the radial density changes character
  std::function<double(double)> g;
  QuadratureSpec q;

  double mass() const {
    const double r0 = r_scale;
    auto f = [&](double r, double, double) { return g(r); };
    return tanh_sinh(f, 0.0, r0, q).value +
           tanh_sinh_half_line([&](double r, double) { return g(r); }, r0, r0, q).value;
  }

  std::vector<double> head_breaks(double z, int& m) const {
    std::vector<double> br{0.0};
    const double x0 = std::max(4.0 * pi, 8.0 * z * std::max(r_scale, 1.0));
    std::vector<double> inner{z * std::min(r_scale, 1.0), z * std::max(r_scale, 1.0)};
    m = 1;
    while (kernel_zero(d, m) < x0) ++m;
    for (int k = 1; k <= m; ++k) br.push_back(kernel_zero(d, k));
    for (double x : inner)
      if (x > 0.0 && x < br.back()) br.push_back(x);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return br;
  }

  // (1/z) int_X^inf k(x) g(x/z) dx, X = zero m
  double oscillating_tail(double z, int m) const {
    auto f = [&](double x) { return kernel_value(d, x) * g(x / z); };
    auto bp = [&](int k) { return kernel_zero(d, m + k); };
    return oscillatory_tail(f, bp, q).value / z;
  }

  double covariance(double z) const {
    if (z == 0.0) return mass();
    int m = 0;
    const auto br = head_breaks(z, m);
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      head += tanh_sinh([&](double x, double, double) { return kernel_value(d, x) * g(x / z); },
                        br[i], br[i + 1], q)
                  .value;
    }
    return head / z + oscillating_tail(z, m);
  }

  double variogram(double z) const {
    if (z == 0.0) return 0.0;
    int m = 0;
    const auto br = head_breaks(z, m);
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      head += tanh_sinh(
                  [&](double x, double, double) { return one_minus_kernel(d, x) * g(x / z); },
                  br[i], br[i + 1], q)
                  .value;
    }
    const double r_tail = br.back() / z;
    const double plain =
        tanh_sinh_half_line([&](double r, double) { return g(r); }, r_tail, r_tail, q).value;
    return 2.0 * (head / z + plain - oscillating_tail(z, m));
  }
};

RadialTransform spatial_transform(const ModelParams& p, double t, const QuadratureSpec& q) {
  const double area = constants::sphere_area(p.d);
  RadialTransform rt{p.d, 1.0 / std::sqrt(t), {}, q};
  const double pref = area * constants::solution_prefactor(p);
  rt.g = [p, t, q, pref](double r) {
    const double w = p.kernel == Kernel::Riesz ? std::pow(r, p.d - 1 - p.alpha)
                                                : std::pow(r, p.d - 1) * spectral_weight(p, r);
    return pref * w * time_smoothing_integral(p.H, t, r * r, q);
  };
  return rt;
}

}  // namespace

// ---------------------------------------------------------------------------

double temporal_covariance(const ModelParams& p, double t, double s, const QuadratureSpec& q) {
  require_riesz(p, "temporal_covariance");
  require_time(t, "temporal_covariance");
  require_time(s, "temporal_covariance");
  if (t == 0.0 || s == 0.0) return 0.0;
  if (t < s) std::swap(t, s);
  const double J = q.singularity_split ? temporal_integral_split(p.H, p.codim(), t, s, q)
                                       : temporal_integral_naive(p.H, p.codim(), t, s, q);
  return constants::solution_prefactor(p) * constants::riesz_gaussian_moment(p) * J;
}

double temporal_variogram(const ModelParams& p, double t, double s, const QuadratureSpec& q) {
  if (t == s) return 0.0;
  const double v = temporal_covariance(p, t, t, q) + temporal_covariance(p, s, s, q) -
                   2.0 * temporal_covariance(p, t, s, q);
  return std::max(0.0, v);
}

// ---------------------------------------------------------------------------

namespace {

// tau^2 f_U(tau), finite for every tau > 0 representable in double
double pinned_density_tau2(const ModelParams& p, double at, const QuadratureSpec& q) {
  // r = sqrt(2 |tau|) rho maps |xi|^4 / 4 onto tau^2 rho^4
  const double sc = std::sqrt(2.0 * at);
  const bool riesz = p.kernel == Kernel::Riesz;
  auto f = [&](double rho) {
    const double w = riesz ? std::pow(rho, p.d - 1 - p.alpha)
                           : std::pow(rho, p.d - 1) * spectral_weight(p, sc * rho);
    return w / (1.0 + rho * rho * rho * rho);
  };
  const double radial =
      tanh_sinh([&](double rho, double, double) { return f(rho); }, 0.0, 1.0, q).value +
      tanh_sinh_half_line([&](double rho, double) { return f(rho); }, 1.0, 1.0, q).value;
  const double e = 1.0 - 2.0 * p.H + 0.5 * (riesz ? p.codim() : p.d);
  return constants::solution_prefactor(p) * constants::fractional_spectral_constant(p.H) *
         constants::sphere_area(p.d) * std::pow(2.0, 0.5 * (riesz ? p.codim() : p.d)) *
         std::pow(at, e) * radial;
}

}  // namespace

double pinned_spectral_density(const ModelParams& p, double tau, DensityBackend backend,
                               const QuadratureSpec& q) {
  if (tau == 0.0 || std::isnan(tau))
    throw DomainError("pinned_spectral_density: tau must be nonzero");
  const double at = std::abs(tau);
  if (backend == DensityBackend::ClosedFormRiesz) {
    require_riesz(p, "pinned_spectral_density");
    return constants::pinned_density_amplitude(p) * std::pow(at, -(1.0 + 2.0 * p.gamma()));
  }
  return pinned_density_tau2(p, at, q) / (at * at);
}

double pinned_variogram(const ModelParams& p, double h, const QuadratureSpec& q) {
  if (!std::isfinite(h)) throw DomainError("pinned_variogram: non-finite lag");
  h = std::abs(h);
  if (h == 0.0) return 0.0;
  const double ts = std::min(1.0, pi / h);
  auto dens = [&](double tau) { return pinned_spectral_density(p, tau, DensityBackend::Quadrature, q); };
  const double head = tanh_sinh(
                          [&](double tau, double, double) {
                            const double sh = std::sin(0.5 * h * tau) / tau;
                            return 4.0 * sh * sh * pinned_density_tau2(p, tau, q);
                          },
                          0.0, ts, q)
                          .value;
  double tail;
  if (p.kernel == Kernel::Riesz) {
    // beyond ts the density is exactly c tau^{-(1+2 gamma)}
    const double g2 = 2.0 * p.gamma();
    const double c = dens(ts) * std::pow(ts, 1.0 + g2);
    const double X = h * ts;
    const double L = tanh_sinh(
                         [&](double x, double, double) {
                           const double sh = std::sin(0.5 * x) / x;
                           return 2.0 * sh * sh * std::pow(x, 1.0 - g2);
                         },
                         0.0, X, q)
                         .value;
    tail = 2.0 * c * std::pow(h, g2) * (constants::one_minus_cos_moment(g2) - L);
  } else {
    const double plain =
        tanh_sinh_half_line([&](double tau, double) { return dens(tau); }, ts, ts, q).value;
    auto f = [&](double tau) { return std::cos(h * tau) * dens(tau); };
    // sign changes of cos(h tau) strictly after ts
    const double k0 = std::floor(h * ts / pi - 0.5) + 1.0;
    auto bp = [&](int k) { return k == 0 ? ts : (k0 + k - 0.5) * pi / h; };
    const double osc = oscillatory_tail(f, bp, q).value;
    tail = 2.0 * (plain - osc);
  }
  return 2.0 * (head + tail);
}

double c0_constant(const ModelParams& p, const QuadratureSpec& q, double lag) {
  require_riesz(p, "c0_constant");
  if (!(lag > 0.0)) throw DomainError("c0_constant: lag must be > 0");
  return std::sqrt(pinned_variogram(p, lag, q) / std::pow(lag, 2.0 * p.gamma()));
}

// ---------------------------------------------------------------------------

double time_smoothing_integral(double H, double t, double w, const QuadratureSpec& q) {
  require_time(t, "time_smoothing_integral");
  if (!(w >= 0.0)) throw DomainError("time_smoothing_integral: w must be >= 0");
  if (t == 0.0 || std::isinf(w)) return 0.0;
  if (w == 0.0) return std::pow(t, 2.0 * H) / constants::alpha_H(H);
  const double a = 2.0 * H - 2.0;
  const double Y = 0.5 * t * w;
  constexpr double kCut = 50.0;
  double I;
  if (Y <= kCut) {
    // y = Y s keeps the prefactor at t^{2H} for small w
    return std::pow(t, 2.0 * H) *
           tanh_sinh(
               [&](double s, double, double dr) {
                 return std::pow(s, a) * std::exp(-Y * s) * -std::expm1(-2.0 * Y * dr) / Y;
               },
               0.0, 1.0, q)
               .value;
  } else {
    I = tanh_sinh(
            [&](double y, double, double) {
              return std::pow(y, a) * std::exp(-y) * -std::expm1(-2.0 * (Y - y));
            },
            0.0, kCut, q)
            .value;
  }
  return std::pow(2.0 / w, 2.0 * H) * I;
}

double spatial_spectral_density(const ModelParams& p, double t, double r,
                                const QuadratureSpec& q) {
  require_time(t, "spatial_spectral_density");
  return constants::solution_prefactor(p) * spectral_weight(p, r) *
         time_smoothing_integral(p.H, t, r * r, q);
}

double spatial_covariance(const ModelParams& p, double t, double z, const QuadratureSpec& q) {
  require_time(t, "spatial_covariance");
  if (!std::isfinite(z)) throw DomainError("spatial_covariance: non-finite lag");
  if (t == 0.0) return 0.0;
  return spatial_transform(p, t, q).covariance(std::abs(z));
}

double spatial_covariance(const ModelParams& p, double t, std::span<const double> z,
                          const QuadratureSpec& q) {
  if (static_cast<int>(z.size()) != p.d)
    throw DomainError("spatial_covariance: point has dimension " + std::to_string(z.size()) +
                      ", model has d=" + std::to_string(p.d));
  double n2 = 0.0;
  for (double v : z) n2 += v * v;
  return spatial_covariance(p, t, std::sqrt(n2), q);
}

double spatial_variogram(const ModelParams& p, double t, double lag, const QuadratureSpec& q) {
  require_time(t, "spatial_variogram");
  if (!std::isfinite(lag)) throw DomainError("spatial_variogram: non-finite lag");
  if (t == 0.0) return 0.0;
  return std::max(0.0, spatial_transform(p, t, q).variogram(std::abs(lag)));
}

// ---------------------------------------------------------------------------

double y_derivative_variogram(const ModelParams& p, double s, double t, const QuadratureSpec& q,
                              double lower_cutoff) {
  if (t < s) std::swap(s, t);
  if (!(s >= lower_cutoff))
    throw DomainError("y_derivative_variogram: times must be >= " + std::to_string(lower_cutoff));
  if (t == s) return 0.0;
  const double H = p.H;
  const double tau_int =
      2.0 * (tanh_sinh(
                 [&](double x, double, double) {
                   return std::pow(x, 1.0 - 2.0 * H) / (x * x + 0.25);
                 },
                 0.0, 1.0, q)
                 .value +
             tanh_sinh_half_line(
                 [&](double x, double) { return std::pow(x, 1.0 - 2.0 * H) / (x * x + 0.25); },
                 1.0, 1.0, q)
                 .value);
  const double gap = t - s;
  auto g = [&](double r) {
    const double r2 = r * r;
    const double e = std::expm1(-0.5 * gap * r2);
    return std::pow(r, p.d + 3.0 - 4.0 * H) * spectral_weight(p, r) * std::exp(-s * r2) * e * e;
  };
  const double r1 = 1.0 / std::sqrt(s);
  const double radial =
      tanh_sinh([&](double r, double, double) { return g(r); }, 0.0, r1, q).value +
      tanh_sinh_half_line([&](double r, double) { return g(r); }, r1, r1, q).value;
  return constants::solution_prefactor(p) * constants::fractional_spectral_constant(H) *
         constants::sphere_area(p.d) * 0.25 * tau_int * radial;
}

// ---------------------------------------------------------------------------

double bifbm_covariance(double Hb, double K, double t, double s) {
  if (!(Hb > 0.0 && Hb <= 1.0) || !(K > 0.0 && K <= 1.0))
    throw ParameterDomainError("bifbm_covariance: need 0 < Hb <= 1, 0 < K <= 1");
  require_time(t, "bifbm_covariance");
  require_time(s, "bifbm_covariance");
  const double h2 = 2.0 * Hb;
  return std::pow(2.0, -K) *
         (std::pow(std::pow(t, h2) + std::pow(s, h2), K) - std::pow(std::abs(t - s), h2 * K));
}

double white_noise_solution_covariance(double t, double s) {
  require_time(t, "white_noise_solution_covariance");
  require_time(s, "white_noise_solution_covariance");
  return (std::sqrt(t + s) - std::sqrt(std::abs(t - s))) / std::sqrt(2.0 * pi);
}

double fbm_covariance(double g, double t, double s) {
  const double e = 2.0 * g;
  return 0.5 * (std::pow(std::abs(t), e) + std::pow(std::abs(s), e) - std::pow(std::abs(t - s), e));
}

// ---------------------------------------------------------------------------

SpectralDensity SpectralDensity::pinned(const ModelParams& p, DensityBackend backend,
                                        QuadratureSpec q) {
  if (backend == DensityBackend::ClosedFormRiesz) require_riesz(p, "SpectralDensity::pinned");
  return SpectralDensity(p, Kind::PinnedTime, backend, 0.0, q);
}

SpectralDensity SpectralDensity::spatial(const ModelParams& p, double t, QuadratureSpec q) {
  require_time(t, "SpectralDensity::spatial");
  return SpectralDensity(p, Kind::SpatialSlice, DensityBackend::Quadrature, t, q);
}

double SpectralDensity::operator()(double arg) const {
  if (kind_ == Kind::PinnedTime) return pinned_spectral_density(params_, arg, backend_, q_);
  return spatial_spectral_density(params_, t_, std::abs(arg), q_);
}

double SpectralDensity::normalization() const { return constants::solution_prefactor(params_); }

}  // namespace heatfield
