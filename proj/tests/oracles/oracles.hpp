#pragma once

// Independent reference values built on Boost.Math only: no shared code with
// the library's quadrature.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>
#include <numbers>

#include "heatfield/model.hpp"

namespace oracle {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::tanh_sinh;

inline double sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

inline double prefactor(const heatfield::ModelParams& p) {
  return p.H * (2.0 * p.H - 1.0) * std::pow(2.0 * std::numbers::pi, -p.d);
}

inline double weight(const heatfield::ModelParams& p, double r) {
  return p.kernel == heatfield::Kernel::Riesz ? std::pow(r, -p.alpha)
                                              : std::pow(1.0 + r * r, -0.5 * p.alpha);
}

// int_{z0}^{z1} g(z) dz with z recovered from the endpoint distance, so that
// z^a stays accurate next to z = 0
template <class G>
double integrate_from(G g, double z0, double z1, double tol) {
  if (!(z1 > z0)) return 0.0;
  tanh_sinh<double> ts;
  return ts.integrate(
      [&](double, double xc) {
        const double z = xc <= 0.0 ? z0 - xc : z1 - xc;
        return z == 0.0 ? 0.0 : g(z);
      },
      z0, z1, tol);
}

// int z^a exp(-c (z + shift)) dz over [z0, z1]
inline double power_exp(double a, double c, double z0, double z1, double shift, double tol) {
  return integrate_from([&](double z) { return std::pow(z, a) * std::exp(-c * (z + shift)); }, z0, z1,
                        tol);
}

// int_0^t int_0^s |u - v|^{2H-2} exp(-c ((t - u) + (s - v))) du dv
inline double time_block(double H, double t, double s, double c, double tol) {
  const double a = 2.0 * H - 2.0;
  const double delta = t - s;
  // x = t - u, y = s - v, |u - v| = |y - (x - delta)|
  auto inner = [&](double x) {
    const double ys = x - delta;
    double v = 0.0;
    if (ys <= 0.0) {
      // z = y - ys in [-ys, s - ys]
      v = power_exp(a, c, -ys, s - ys, ys, tol);
    } else if (ys >= s) {
      // z = ys - y in [ys - s, ys], y = ys - z
      v = integrate_from([&](double z) { return std::pow(z, a) * std::exp(-c * (ys - z)); }, ys - s,
                         ys, tol);
    } else {
      v = integrate_from([&](double z) { return std::pow(z, a) * std::exp(-c * (ys - z)); }, 0.0, ys,
                         tol) +
          power_exp(a, c, 0.0, s - ys, ys, tol);
    }
    return v * std::exp(-c * x);
  };
  std::vector<double> br{0.0};
  for (double k : {delta, delta + s})
    if (k > 0.0 && k < t) br.push_back(k);
  br.push_back(t);
  std::sort(br.begin(), br.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) total += integrate_from(inner, br[i], br[i + 1], tol);
  return total;
}

/// E[u(t,x) u(s,x)] by three nested quadratures: radial |xi| outside, the
/// two time integrals inside, no analytic reduction.
inline double nested_temporal_covariance(const heatfield::ModelParams& p, double t, double s,
                                         double tol = 1e-5) {
  if (t == 0.0 || s == 0.0) return 0.0;
  if (t < s) std::swap(t, s);
  auto radial = [&](double r) {
    return std::pow(r, p.d - 1) * weight(p, r) * time_block(p.H, t, s, 0.5 * r * r, tol);
  };
  // r = e^x on [1, r_max]; the integrand decays like r^{-(4H - d + alpha + 1)} beyond
  constexpr double r_max = 1e4;
  const double head = integrate_from(radial, 0.0, 1.0, tol);
  const double body = integrate_from([&](double x) { return std::exp(x) * radial(std::exp(x)); }, 0.0,
                                     std::log(r_max), tol);
  return prefactor(p) * sphere_area(p.d) * (head + body);
}

/// R(t, t) for the Riesz kernel through the incomplete Beta function
/// (valid for d - alpha < 2).
inline double riesz_variance(const heatfield::ModelParams& p, double t) {
  const double a = 2.0 * p.H - 2.0;
  const double b = 0.5 * (p.d - p.alpha);
  const double g2 = a - b + 2.0;
  const double K = sphere_area(p.d) * std::pow(2.0, b - 1.0) * std::tgamma(b);
  const double inc = boost::math::beta(a + 1.0, 1.0 - b, 0.5);
  return prefactor(p) * K * std::pow(t, g2) * 2.0 / g2 * std::pow(2.0, a - b + 1.0) * inc;
}

/// f_U(tau) by radial quadrature of mu(d xi) / (tau^2 + |xi|^4 / 4).
inline double pinned_density(const heatfield::ModelParams& p, double tau, double tol = 1e-11) {
  const double H = p.H;
  const double AH = std::pow(2.0, 2.0 * H - 2.0) * std::tgamma(H - 0.5) /
                    (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - H));
  auto f = [&](double r) {
    const double w = p.kernel == heatfield::Kernel::Riesz ? std::pow(r, p.d - 1 - p.alpha)
                                                          : std::pow(r, p.d - 1) * weight(p, r);
    return w / (tau * tau + 0.25 * r * r * r * r);
  };
  const double r0 = std::sqrt(2.0 * std::abs(tau));
  exp_sinh<double> es;
  const double I = integrate_from(f, 0.0, r0, tol) +
                   es.integrate(f, r0, std::numeric_limits<double>::infinity(), tol);
  return prefactor(p) * AH * std::pow(std::abs(tau), 1.0 - 2.0 * H) * sphere_area(p.d) * I;
}

/// I_t(w) as a plain double integral over the square, split on the diagonal.
inline double time_smoothing(double H, double t, double w, double tol = 1e-10) {
  const double a = 2.0 * H - 2.0;
  auto inner = [&](double u) {
    // v < u, z = u - v
    return integrate_from([&](double z) { return std::pow(z, a) * std::exp(-(2.0 * u - z) * w / 2.0); },
                          0.0, u, tol);
  };
  return 2.0 * integrate_from(inner, 0.0, t, tol);
}

}  // namespace oracle
