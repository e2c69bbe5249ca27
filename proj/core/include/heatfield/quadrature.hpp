#pragma once

// Double-exponential (tanh-sinh) quadrature for integrands with algebraic
// endpoint singularities, a half-line variant, fixed Gauss-Legendre panels,
// and an accelerated integrator for oscillatory tails.
//
// Finite-interval integrands receive (x, x - a, b - x) with both distances
// computed without cancellation, so singular factors such as |x - a|^{-0.6}
// can be evaluated accurately right next to the endpoints.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "heatfield/errors.hpp"

namespace heatfield {

struct QuadratureSpec {
  double rel_tol = 1e-11;
  double abs_tol = 1e-300;
  int max_refinements = 9;
  /// Split double integrals along their singular diagonal / kink points.
  bool singularity_split = true;

  /// Throws ParameterDomainError when a field is out of range.
  void validate() const;
  bool operator==(const QuadratureSpec&) const = default;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  ///< |I_h - I_{2h}| at the last level
  double l1 = 0.0;     ///< sum of |w f|, the condition scale
  int levels = 0;
  int evals = 0;
};

namespace detail {

/// Precomputed tanh-sinh abscissae on [-1, 1]: node k of level m sits at
/// t = k h_m with h_m = 2^{-m}; level 0 holds k = 0, +-1, ..., level m > 0
/// holds the odd multiples only. `comp` is 1 - |x| computed directly.
struct TanhSinhTable {
  struct Node {
    double x;     // abscissa in [0, 1)
    double comp;  // 1 - x
    double w;     // weight (already multiplied by h of its level)
    double t;
  };
  std::vector<std::vector<Node>> levels;  // positive t only; t = 0 in level 0
  double t_max = 0.0;
  static const TanhSinhTable& instance();
};

}  // namespace detail

/// Integrates f over [a, b] (a < b). `f(x, x - a, b - x)`.
/// Throws QuadratureError with the level trace if the tolerance is not met.
template <class F>
QuadResult tanh_sinh(F&& f, double a, double b, const QuadratureSpec& q) {
  QuadResult res;
  if (!(b > a)) return res;
  const auto& tab = detail::TanhSinhTable::instance();
  const double half = 0.5 * (b - a);
  const int max_level =
      std::min<int>(static_cast<int>(tab.levels.size()) - 1, q.max_refinements);

  // Nodes beyond t_cut[side] contribute below roundoff and are skipped once
  // the first two levels have located the decay.
  double t_cut[2] = {tab.t_max + 1.0, tab.t_max + 1.0};
  double sum = 0.0, l1 = 0.0;
  double last_big[2] = {0.0, 0.0};

  auto side_eval = [&](const detail::TanhSinhTable::Node& n, int side) {
    // side 0: node near b (positive t), side 1: node near a (negative t)
    const double d_near = half * n.comp;
    const double d_far = half * (1.0 + n.x);
    if (!(d_near > 0.0)) return;
    double x, dl, dr;
    if (side == 0) {
      dl = d_far;
      dr = d_near;
      x = b - dr;
    } else {
      dl = d_near;
      dr = d_far;
      x = a + dl;
    }
    const double v = f(x, dl, dr) * n.w;
    sum += v;
    l1 += std::abs(v);
    ++res.evals;
    if (std::abs(v) > 1e-20 * l1) last_big[side] = std::max(last_big[side], n.t);
  };

  const auto& lvl0 = tab.levels[0];
  {
    const auto& c = lvl0[0];
    const double v = f(a + half, half, half) * c.w;
    sum += v;
    l1 += std::abs(v);
    ++res.evals;
  }
  for (std::size_t i = 1; i < lvl0.size(); ++i) {
    side_eval(lvl0[i], 0);
    side_eval(lvl0[i], 1);
  }
  double estimate = sum * half;
  std::vector<double> trace{estimate};
  for (int m = 1; m <= max_level; ++m) {
    sum *= 0.5;
    l1 *= 0.5;
    for (const auto& n : tab.levels[m]) {
      if (n.t <= t_cut[0]) side_eval(n, 0);
      if (n.t <= t_cut[1]) side_eval(n, 1);
    }
    if (m == 1) {
      t_cut[0] = last_big[0] + 1.0;
      t_cut[1] = last_big[1] + 1.0;
    }
    const double next = sum * half;
    const double err = std::abs(next - estimate);
    estimate = next;
    trace.push_back(estimate);
    const double scale = l1 * half;
    if (m >= 2 && err <= std::max(q.abs_tol, q.rel_tol * scale)) {
      res.value = estimate;
      res.error = err;
      res.l1 = scale;
      res.levels = m;
      return res;
    }
  }
  const double err = std::abs(trace.back() - trace[trace.size() - 2]);
  // Stagnation at roundoff level relative to the integral is accepted.
  if (err <= std::max(q.abs_tol, 64.0 * q.rel_tol * l1 * half)) {
    res.value = estimate;
    res.error = err;
    res.l1 = l1 * half;
    res.levels = max_level;
    return res;
  }
  throw QuadratureError("tanh_sinh: tolerance not reached on [" + std::to_string(a) +
                            ", " + std::to_string(b) + "]",
                        std::move(trace));
}

/// Integrates f over [a, inf) via x = a + scale * u / (1 - u), u in [0, 1].
/// `f(x, x - a)`. The integrand must decay faster than 1/x.
template <class F>
QuadResult tanh_sinh_half_line(F&& f, double a, double scale, const QuadratureSpec& q) {
  auto g = [&](double /*u*/, double du, double dr) {
    // u = du, 1 - u = dr
    const double dist = scale * du / dr;
    if (!(dist < 1e250)) return 0.0;
    const double v = f(a + dist, dist);
    return v == 0.0 ? 0.0 : v * (scale / dr) / dr;
  };
  return tanh_sinh(g, 0.0, 1.0, q);
}

/// Gauss-Legendre rule on [-1, 1] with n nodes (cached per n).
struct GaussLegendre {
  std::vector<double> x, w;
  static const GaussLegendre& get(int n);
};

/// Fixed n-point Gauss-Legendre on [a, b].
template <class F>
double gauss_legendre(F&& f, double a, double b, int n = 20) {
  const auto& gl = GaussLegendre::get(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < gl.x.size(); ++i) s += gl.w[i] * f(mid + half * gl.x[i]);
  return s * half;
}

/// Wynn epsilon acceleration of a sequence of partial sums; returns the
/// best estimate and an error proxy.
struct Accelerated {
  double value;
  double error;
};
Accelerated wynn_epsilon(std::span<const double> partial_sums);

/// Integrates f over [start, inf) where f oscillates with known sign-change
/// points: `breakpoint(k)` returns the k-th point (k = 0, 1, ...) with
/// breakpoint(0) == start. Segments are integrated with tanh-sinh and the
/// partial sums are accelerated. On failure, throws QuadratureError
/// carrying the partial sums.
QuadResult oscillatory_tail(const std::function<double(double)>& f,
                            const std::function<double(int)>& breakpoint,
                            const QuadratureSpec& q, int max_segments = 400);

}  // namespace heatfield
