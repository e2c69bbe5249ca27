#include "heatfield/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace heatfield {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_refinements < 1) {
    std::ostringstream os;
    os << "invalid quadrature spec: rel_tol=" << rel_tol << " abs_tol=" << abs_tol
       << " max_refinements=" << max_refinements;
    throw ParameterDomainError(os.str());
  }
}

namespace detail {

const TanhSinhTable& TanhSinhTable::instance() {
  static const TanhSinhTable table = [] {
    constexpr int kLevels = 13;
    constexpr double kTMax = 6.0;
    constexpr double half_pi = std::numbers::pi / 2.0;
    TanhSinhTable tab;
    tab.t_max = kTMax;
    tab.levels.resize(kLevels);
    for (int m = 0; m < kLevels; ++m) {
      const double h = std::ldexp(1.0, -m);
      const int kmax = static_cast<int>(kTMax / h);
      for (int k = 0; k <= kmax; ++k) {
        if (m > 0 && k % 2 == 0) continue;
        const double t = k * h;
        const double y = half_pi * std::sinh(t);
        Node n;
        n.t = t;
        n.x = std::tanh(y);
        n.comp = 2.0 / (std::exp(2.0 * y) + 1.0);
        // 1/cosh^2(y) = comp (2 - comp)
        n.w = h * half_pi * std::cosh(t) * n.comp * (2.0 - n.comp);
        tab.levels[m].push_back(n);
      }
    }
    return tab;
  }();
  return table;
}

}  // namespace detail

const GaussLegendre& GaussLegendre::get(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    auto gl = std::make_unique<GaussLegendre>();
    gl->x.resize(n);
    gl->w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      gl->x[i] = -z;
      gl->x[n - 1 - i] = z;
      gl->w[i] = gl->w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    slot = std::move(gl);
  }
  return *slot;
}

Accelerated wynn_epsilon(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n == 0) return {0.0, 0.0};
  if (n < 3) return {s.back(), n > 1 ? std::abs(s[n - 1] - s[n - 2]) : std::abs(s[0])};
  // e[k] holds column k of the epsilon table along the current antidiagonal.
  std::vector<std::vector<double>> cols(n + 1);
  cols[0].assign(n + 1, 0.0);           // eps_{-1}
  cols[1].assign(s.begin(), s.end());   // eps_0
  for (std::size_t k = 2; k <= n; ++k) {
    const auto& prev = cols[k - 1];
    const auto& prev2 = cols[k - 2];
    const std::size_t len = prev.size() - 1;
    cols[k].resize(len);
    bool ok = true;
    for (std::size_t j = 0; j < len; ++j) {
      const double diff = prev[j + 1] - prev[j];
      if (diff == 0.0 || !std::isfinite(diff)) {
        ok = false;
        break;
      }
      cols[k][j] = prev2[j + 1] + 1.0 / diff;
    }
    if (!ok) {
      cols.resize(k);
      break;
    }
  }
  // Even columns (eps_0, eps_2, ...) are estimates; take the two deepest.
  double best = s.back(), prev_best = s[n - 2];
  for (std::size_t k = 1; k < cols.size(); k += 2) {
    if (cols[k].empty()) break;
    prev_best = cols[k].size() > 1 ? cols[k][cols[k].size() - 2] : best;
    best = cols[k].back();
  }
  return {best, std::abs(best - prev_best)};
}

QuadResult oscillatory_tail(const std::function<double(double)>& f,
                            const std::function<double(int)>& breakpoint,
                            const QuadratureSpec& q, int max_segments) {
  QuadResult res;
  std::vector<double> partial;
  partial.reserve(max_segments);
  double acc = 0.0, l1 = 0.0;
  double prev_est = 0.0;
  int agree = 0;
  double lo = breakpoint(0);
  QuadratureSpec seg_q = q;
  seg_q.rel_tol = std::max(q.rel_tol, 1e-14);
  for (int k = 0; k < max_segments; ++k) {
    const double hi = breakpoint(k + 1);
    auto r = tanh_sinh([&](double x, double, double) { return f(x); }, lo, hi, seg_q);
    const double seg = r.value;
    res.evals += r.evals;
    acc += seg;
    l1 += std::abs(seg);
    partial.push_back(acc);
    lo = hi;
    if (std::abs(seg) <= q.abs_tol && k > 2) {
      res.value = acc;
      res.error = std::abs(seg);
      res.l1 = l1;
      return res;
    }
    if (partial.size() >= 6) {
      // accelerate over the most recent window to keep the table small
      const std::size_t win = std::min<std::size_t>(partial.size(), 24);
      auto est = wynn_epsilon(std::span<const double>(partial).last(win));
      const double tol = std::max(q.abs_tol, q.rel_tol * std::max(std::abs(est.value), l1 * 1e-3));
      if (std::abs(est.value - prev_est) <= tol && est.error <= 10.0 * tol) {
        if (++agree >= 2) {
          res.value = est.value;
          res.error = std::abs(est.value - prev_est);
          res.l1 = l1;
          return res;
        }
      } else {
        agree = 0;
      }
      prev_est = est.value;
    }
  }
  throw QuadratureError("oscillatory_tail: no convergence after " +
                            std::to_string(max_segments) + " segments",
                        std::move(partial));
}

}  // namespace heatfield
