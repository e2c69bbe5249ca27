#include "battery.hpp"

#include <algorithm>
#include <cmath>

#include "heatfield/constants.hpp"
#include "heatfield/cov_matrix.hpp"
#include "heatfield/covariance.hpp"

namespace heatfield::app {

namespace {

std::vector<double> dyadic(int k_lo, int k_hi) {
  std::vector<double> v;
  for (int k = k_lo; k <= k_hi; ++k) v.push_back(std::ldexp(1.0, -k));
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, double(i) / (n - 1));
  return v;
}

CheckResult skipped(std::string name, std::string reference, std::string why) {
  CheckResult r{std::move(name), "check", std::move(reference)};
  r.skipped = true;
  r.pass = true;
  r.detail["skip_reason"] = std::move(why);
  return r;
}

CheckResult band_result(std::string name, std::string reference, const std::vector<double>& lags,
                        const std::vector<double>& ratios, double limit) {
  const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
  CheckResult r{std::move(name), "check", std::move(reference), limit};
  r.detail["lags"] = lags;
  r.detail["ratios"] = ratios;
  r.detail["band_lower"] = *mn;
  r.detail["band_upper"] = *mx;
  r.detail["max_over_min"] = *mx / *mn;
  r.pass = *mn > 0.0 && *mx / *mn <= limit;
  return r;
}

}  // namespace

void run_battery(const RunConfig& c, ReportDocument& doc) {
  const ModelParams& p = c.model;
  const QuadratureSpec& q = c.quadrature;
  const double shift = c.verify.theory_shift;
  const bool riesz = p.kernel == Kernel::Riesz;
  const double T = p.T;
  const char* riesz_only = "needs the Riesz kernel";

  // time-slice variogram band
  if (riesz) {
    std::vector<double> lags, ratios;
    for (double h : dyadic(2, 10)) {
      const double s = 0.5 * T - 0.5 * h * T, t = s + h * T;
      lags.push_back(h * T);
      ratios.push_back(temporal_variogram(p, t, s, q) / std::pow(h * T, 2.0 * p.gamma()));
    }
    doc.add(band_result("temporal_variogram_band", "variogram / |t-s|^(2H-(d-alpha)/2) two-sided band",
                        lags, ratios, 3.0));
  } else {
    doc.add(skipped("temporal_variogram_band", "time-slice variogram band", riesz_only));
  }

  // pinned spectral slope
  {
    const auto tau = logspace(1.0, 1e3, 13);
    std::vector<double> f;
    for (double x : tau) f.push_back(pinned_spectral_density(p, x, DensityBackend::Quadrature, q));
    const auto fit = loglog_fit(tau, f);
    const double theory = -(2.0 * p.gamma() + 1.0) + shift;
    CheckResult r{"spectral_slope", "exponent",
                  "pinned density slope -(2H-(d-alpha)/2+1) on [1, 1e3]", 1e-3};
    if (!riesz) r.tolerance = 0.05;
    r.detail = {{"estimate", fit.slope}, {"theory_value", theory}, {"r_squared", fit.r_squared}};
    r.pass = std::abs(fit.slope - theory) <= r.tolerance;
    doc.add(r);
  }

  // fBm reduction of the pinned string
  if (riesz) {
    std::vector<double> g;
    for (int i = 1; i <= 16; ++i) g.push_back(T * i / 16.0);
    const auto cu = build_cov_matrix(CovSpec::pinned_u(), p, g, q);
    const double c02 = std::pow(c0_constant(p, q), 2);
    double worst = 0.0;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        const double ref = c02 * fbm_covariance(p.gamma(), g[i], g[j]);
        worst = std::max(worst, std::abs(cu.values(i, j) - ref) / std::abs(ref));
      }
    CheckResult r{"fbm_reduction", "check", "pinned covariance = C0^2 fBm(H-(d-alpha)/4)", 1e-3};
    r.detail = {{"c0_squared", c02}, {"max_relative_error", worst}, {"grid_points", 16}};
    r.pass = worst <= r.tolerance;
    doc.add(r);
  } else {
    doc.add(skipped("fbm_reduction", "pinned covariance = C0^2 fBm", riesz_only));
  }

  // self-similarity
  if (riesz) {
    const std::vector<double> g{T / 16, T / 8, 3 * T / 16, T / 4};
    CheckResult r{"self_similarity", "check", "R(ct, cs) = c^(2H-(d-alpha)/2) R(t, s)", 1e-3};
    double worst = 0.0;
    for (double cc : {2.0, 4.0}) {
      const double dev = self_similarity_check(p, cc, g, q);
      r.detail["deviation_c" + std::to_string(int(cc))] = dev;
      worst = std::max(worst, dev);
    }
    r.pass = worst <= r.tolerance;
    doc.add(r);
  } else {
    doc.add(skipped("self_similarity", "time-slice self-similarity", riesz_only));
  }

  // space-slice variogram band
  {
    const double t = c.task.slice_time;
    const double b = p.raw_beta();
    std::vector<double> lags = dyadic(3, 10), ratios;
    std::string ref;
    for (double h : lags) {
      const double v = spatial_variogram(p, t, h, q);
      if (b < 1.0 - 1e-12)
        ratios.push_back(v / std::pow(h, 2.0 * b));
      else if (b <= 1.0 + 1e-12)
        ratios.push_back(v / (h * h * std::log(1.0 / h)));
      else
        ratios.push_back(v / (h * h));
    }
    if (b < 1.0 - 1e-12)
      ref = "space variogram / |x-y|^(2 beta) two-sided band";
    else if (b <= 1.0 + 1e-12)
      ref = "space variogram / (|x-y|^2 log(1/|x-y|)) two-sided band";
    else
      ref = "space variogram / |x-y|^2 two-sided band";
    doc.add(band_result("spatial_variogram_band", ref, lags, ratios, 3.0));
  }

  // sandwich bound on the time-smoothing integral
  {
    const std::vector<double> times{0.5, 1.0, 2.0};
    const auto r_fit = logspace(0.1, 100.0, 13);
    const auto r_check = logspace(0.1, 100.0, 41);
    const auto s = sandwich_check(p.H, times, r_fit, r_check, 0.9, q);
    CheckResult r{"sandwich_bound", "check",
                  "c1 (t^(2H) ^ 1)(1+r^2)^(-2H) <= I_t(r^2) <= c2 (t^(2H)+1)(1+r^2)^(-2H)", 0.9};
    r.detail = to_json(s);
    r.pass = s.pass;
    doc.add(r);
  }

  // smooth remainder
  {
    const auto gaps = dyadic(1, 6);
    const auto rb = remainder_bound_check(p, 0.5, 2.0, gaps, 0.2, q);
    CheckResult r{"remainder_bound", "check", "E|Y'(t)-Y'(s)|^2 <= C |t-s|^2 on [0.5, 2]", 0.2};
    r.detail = to_json(rb);
    r.pass = rb.pass;
    doc.add(r);
  }

  // strong local nondeterminism
  if (p.d == 1) {
    SlndOptions o;
    o.max_points = c.verify.slnd_points;
    const auto s = slnd_search(p, o, q);
    CheckResult r{"slnd", "check",
                  "Var(u(x) | u(y_1..y_n)) >= c min(|x|, |x-y_j|)^(4H+alpha-d)", o.slack};
    r.detail = to_json(s);
    r.pass = s.pass;
    doc.add(r);
  } else {
    doc.add(skipped("slnd", "strong local nondeterminism", "lattice search runs for d = 1"));
  }

  // reference identities
  {
    double worst = 0.0, rmin = INFINITY, rmax = 0.0;
    for (double t : {0.25, 0.5, 1.0})
      for (double s : {0.25, 0.5, 1.0}) {
        const double b = bifbm_covariance(0.5, 0.5, t, s);
        const double ref = std::pow(2.0, -0.5) * (std::sqrt(t + s) - std::sqrt(std::abs(t - s)));
        worst = std::max(worst, std::abs(b - ref) / std::abs(ref));
        const double w = white_noise_solution_covariance(t, s);
        const double ratio = w / b;
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
      }
    CheckResult r{"reference_identities", "check",
                  "bifbm(1/2, 1/2) closed form; white-noise / bifbm ratio constant", 1e-12};
    r.detail = {{"max_relative_error", worst}, {"ratio_spread", rmax / rmin - 1.0},
                {"ratio", rmin}};
    r.pass = worst <= 1e-12 && rmax / rmin - 1.0 <= 1e-12;
    doc.add(r);
  }

  // empirical time exponent and moduli
  const int n = c.grid.n_points;
  if (riesz) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = T * (i + 1) / n;
    const auto e = sample_time_slice(p, g, c.mc.n_paths, c.mc.seed);
    std::vector<double> lags;
    for (int k = 1; k <= std::max(16, n / 8) && k < n; k *= 2) lags.push_back(k * T / n);
    const auto rep = fit_exponent(empirical_variogram(e, lags), p.gamma() + shift, 0.03);
    CheckResult r{"time_exponent", "exponent", "Hoelder index H-(d-alpha)/4 of t -> u(t, x)", 0.03};
    r.detail = to_json(rep);
    r.pass = rep.pass;
    doc.add(r);

    if (n >= 2048) {
      std::vector<double> eps;
      for (int k = 2; std::ldexp(1.0, -k) * n >= 8.0; ++k) eps.push_back(std::ldexp(1.0, -k) * T);
      for (auto kind : {ModulusKind::UniformLog, ModulusKind::LocalLogLog, ModulusKind::ChungLogLog}) {
        ModulusReport m;
        if (kind == ModulusKind::UniformLog)
          m = modulus_statistic(e, kind, p.gamma(), eps, NAN, Window{0.25 * T, T});
        else
          m = modulus_statistic(e, kind, p.gamma(), std::span(eps).subspan(1), e.grid[n / 2 - 1]);
        CheckResult mr{"time_modulus_" + std::string(to_string(kind)), "modulus",
                       "ensemble medians stabilize across the 4 smallest dyadic eps", 0.15};
        mr.detail = to_json(m);
        mr.pass = m.stability <= 0.15;
        doc.add(mr);
      }
    } else {
      doc.add(skipped("time_modulus", "modulus stabilization", "needs grid.n_points >= 2048"));
    }
  } else {
    doc.add(skipped("time_exponent", "time-slice Hoelder index", riesz_only));
  }

  // empirical space variogram against the analytic one
  {
    const double t = c.task.slice_time;
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = double(i) / n;
    const auto method = p.d == 1 ? sampler_method_from_string(c.mc.method) : SamplerMethod::Cholesky;
    const auto e = sample_space_slice(p, t, g, c.mc.n_paths, c.mc.seed + 1, method);
    std::vector<double> lags;
    for (int k = 1; k <= std::max(16, n / 8) && k < n; k *= 2) lags.push_back(double(k) / n);
    const auto tab = empirical_variogram(e, lags);
    double worst = 0.0;
    std::vector<double> z;
    for (std::size_t i = 0; i < lags.size(); ++i) {
      const double ref = spatial_variogram(p, t, lags[i], q);
      const double sc = (tab.values[i] - ref) / (tab.stderrs[i] + 2.0 * e.series_bias + 1e-300);
      z.push_back(sc);
      worst = std::max(worst, std::abs(sc));
    }
    CheckResult r{"space_variogram_empirical", "check",
                  "sampled space-slice variogram matches the analytic one", 4.0};
    r.detail = {{"table", to_json(tab)}, {"z_scores", z}, {"method", std::string(to_string(method))},
                {"warnings", e.warnings}};
    r.pass = worst <= 4.0;
    doc.add(r);
    if (p.raw_beta() > 1.0 && p.d == 1) {
      std::vector<double> sl;
      for (int k = 8; k <= n / 8; k *= 2) sl.push_back(double(k) / n);
      if (sl.size() >= 5) {
        const auto rep = smoothness_check(e, p, sl, 0.07);
        CheckResult sr{"smoothness_exponent", "exponent",
                       "derivative field index 2H-(d-alpha)/2-1", 0.07};
        ExponentReport shifted = rep;
        shifted.theory_value += shift;
        shifted.pass = std::abs(shifted.estimate - shifted.theory_value) <= 0.07;
        sr.detail = to_json(shifted);
        sr.pass = shifted.pass;
        doc.add(sr);
      } else {
        doc.add(skipped("smoothness_exponent", "derivative field index",
                        "needs grid.n_points >= 512"));
      }
    }
  }

  // whitening of every applicable sampler on 16-point grids
  {
    const int np = c.verify.whitening_paths;
    std::vector<double> tg, sg;
    for (int i = 1; i <= 16; ++i) tg.push_back(T * i / 16.0);
    for (int i = 0; i < 16; ++i) sg.push_back(i / 16.0);
    struct Case {
      std::string name;
      CovMatrix cov;
      std::function<PathEnsemble()> draw;
    };
    std::vector<Case> cases;
    const auto seed = c.mc.seed + 2;
    if (riesz)
      cases.push_back({"time_slice.cholesky", build_cov_matrix(CovSpec::time_slice(), p, tg, q),
                       [&] { return sample_time_slice(p, tg, np, seed); }});
    const auto cu = build_cov_matrix(CovSpec::pinned_u(), p, tg, q);
    for (auto m : {SamplerMethod::Cholesky, SamplerMethod::CirculantEmbedding})
      cases.push_back({"pinned_u." + std::string(to_string(m)), cu,
                       [&, m] { return sample_pinned_U(p, tg, np, seed, m); }});
    const auto cs = build_cov_matrix(CovSpec::space_slice(c.task.slice_time), p, sg, q);
    for (auto m : {SamplerMethod::Cholesky, SamplerMethod::CirculantEmbedding, SamplerMethod::SpectralSeries})
      if (p.d == 1 || m == SamplerMethod::Cholesky)
        cases.push_back({"space_slice." + std::string(to_string(m)), cs,
                         [&, m] { return sample_space_slice(p, c.task.slice_time, sg, np, seed, m); }});
    const auto cf = build_cov_matrix(CovSpec::fbm_ref(p.gamma()), p, tg, q);
    for (auto m : {SamplerMethod::Cholesky, SamplerMethod::CirculantEmbedding})
      cases.push_back({"fbm." + std::string(to_string(m)), cf,
                       [&, m] { return sample_fbm(p.gamma(), tg, np, seed, m); }});
    for (auto& cs_ : cases) {
      const auto w = whitening_test(cs_.draw(), cs_.cov, 1e-3);
      CheckResult r{"whitening." + cs_.name, "check",
                    "whitened samples are i.i.d. standard normal", 1e-3};
      r.detail = to_json(w);
      r.detail["min_eigenvalue"] = cs_.cov.min_eigenvalue;
      r.detail["psd_ok"] = cs_.cov.psd_ok();
      r.pass = w.pass && cs_.cov.psd_ok();
      doc.add(r);
    }
  }
}

}  // namespace heatfield::app
