#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "battery.hpp"
#include "heatfield/cov_matrix.hpp"
#include "heatfield/covariance.hpp"
#include "heatfield/ensemble_io.hpp"

namespace fs = std::filesystem;

namespace heatfield::app {

namespace {

fs::path out_path(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.output.directory);
  return fs::path(c.output.directory) / name;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + p.string() + "'");
  f << s;
}

std::vector<double> dyadic_steps(int n, double step) {
  std::vector<double> lags;
  for (int k = 1; k <= n / 8; k *= 2) lags.push_back(k * step);
  return lags;
}

}  // namespace

ReportDocument run_covariance(const RunConfig& c) {
  ReportDocument doc(c);
  const auto& p = c.model;
  const auto g = c.grid.points();
  const std::string& qn = c.task.quantity;
  CheckResult r{"covariance." + qn, "check", "symmetric positive semidefinite Gram matrix", 1e-8};
  if (qn == "pinned_density" || qn == "spatial_density") {
    const auto f = qn == "pinned_density"
                       ? SpectralDensity::pinned(p, DensityBackend::Quadrature, c.quadrature)
                       : SpectralDensity::spatial(p, c.task.slice_time, c.quadrature);
    std::ostringstream os;
    write_density_csv(f, g, os);
    if (c.output.has("csv")) write_text(out_path(c, "density.csv"), os.str());
    r.reference = "density values are positive";
    r.pass = true;
    for (double x : g)
      if (x != 0.0 && !(f(x) > 0.0)) r.pass = false;
    r.detail = {{"points", g.size()}};
  } else {
    CovSpec spec;
    const CovKind kind = cov_kind_from_string(qn);
    if (kind == CovKind::TimeSlice) spec = CovSpec::time_slice();
    if (kind == CovKind::SpaceSlice) spec = CovSpec::space_slice(c.task.slice_time);
    if (kind == CovKind::PinnedU) spec = CovSpec::pinned_u();
    if (kind == CovKind::Bifbm) spec = CovSpec::bifbm(c.task.bifbm_H, c.task.bifbm_K);
    if (kind == CovKind::FbmRef) spec = CovSpec::fbm_ref(c.task.fbm_gamma);
    const auto m = build_cov_matrix(spec, p, g, c.quadrature);
    if (c.output.has("csv")) {
      std::ostringstream os;
      write_csv(m, os);
      write_text(out_path(c, "covariance.csv"), os.str());
    }
    r.pass = m.psd_ok();
    r.detail = {{"size", m.size()}, {"trace", m.trace()}, {"jitter", m.jitter},
                {"min_eigenvalue", std::isfinite(m.min_eigenvalue) ? Json(m.min_eigenvalue) : Json()}};
  }
  doc.add(r);
  return doc;
}

ReportDocument run_sample(const RunConfig& c) {
  ReportDocument doc(c);
  const auto& p = c.model;
  const auto g = c.grid.points();
  const auto method = sampler_method_from_string(c.mc.method);
  const std::string& qn = c.task.quantity;
  PathEnsemble e;
  if (qn == "time_slice")
    e = sample_time_slice(p, g, c.mc.n_paths, c.mc.seed);
  else if (qn == "space_slice")
    e = sample_space_slice(p, c.task.slice_time, g, c.mc.n_paths, c.mc.seed, method);
  else if (qn == "pinned_u")
    e = sample_pinned_U(p, g, c.mc.n_paths, c.mc.seed, method);
  else if (qn == "fbm")
    e = sample_fbm(c.task.fbm_gamma, g, c.mc.n_paths, c.mc.seed, method);
  else
    throw ConfigError("task.quantity '" + qn + "' cannot be sampled");
  if (c.output.has("binary")) save_ensemble(e, out_path(c, "ensemble.bin").string());
  if (c.output.has("csv")) save_ensemble(e, out_path(c, "ensemble.csv").string());
  CheckResult r{"sample." + qn, "check", "ensemble written", 0.0};
  r.pass = true;
  r.detail = {{"method", std::string(to_string(e.method))}, {"n_paths", e.n_paths()},
              {"n_grid", e.n_grid()}, {"fingerprint", e.fingerprint}, {"series_bias", e.series_bias},
              {"warnings", e.warnings}};
  doc.add(r);
  return doc;
}

ReportDocument run_estimate(const RunConfig& c) {
  ReportDocument doc(c);
  if (c.task.input.empty()) throw ConfigError("estimate needs task.input");
  const auto e = load_ensemble(c.task.input);
  const auto& p = c.model;
  const bool space = e.units == "space";
  const double step = (e.grid.back() - e.grid.front()) / (e.n_grid() - 1);
  const double theory = (space ? p.beta() : p.gamma()) + c.verify.theory_shift;
  const auto lags = dyadic_steps(e.n_grid(), step);
  const auto tab = empirical_variogram(e, lags);
  const auto rep = fit_exponent(tab, theory, space ? 0.05 : 0.03);
  CheckResult r{space ? "space_exponent" : "time_exponent", "exponent",
                space ? "min(1, 2H-(d-alpha)/2)" : "H-(d-alpha)/4", rep.tolerance};
  r.detail = to_json(rep);
  r.detail["variogram"] = to_json(tab);
  r.pass = rep.pass;
  doc.add(r);
  std::string csv = "lag,value,stderr,n_pairs\n";
  for (std::size_t i = 0; i < tab.lags.size(); ++i) {
    std::ostringstream os;
    os.precision(17);
    os << tab.lags[i] << ',' << tab.values[i] << ',' << tab.stderrs[i] << ',' << tab.n_pairs[i] << '\n';
    csv += os.str();
  }
  std::vector<double> eps;
  const double span = e.grid.back() - e.grid.front();
  for (int k = 2; std::ldexp(span, -k) >= 8.0 * step; ++k) eps.push_back(std::ldexp(span, -k));
  std::string mcsv = "kind,eps,median\n";
  if (eps.size() >= 4) {
    const double idx = space ? p.beta() : p.gamma();
    const double anchor = e.grid[e.n_grid() / 2];
    for (auto kind : {ModulusKind::UniformLog, ModulusKind::LocalLogLog, ModulusKind::ChungLogLog}) {
      std::vector<double> ek;
      for (double x : eps)
        if (kind == ModulusKind::UniformLog || (x < std::exp(-1.0) && x < 0.5 * span)) ek.push_back(x);
      if (ek.size() < 4) continue;
      const auto m = kind == ModulusKind::UniformLog ? modulus_statistic(e, kind, idx, ek)
                                                     : modulus_statistic(e, kind, idx, ek, anchor);
      CheckResult mr{"modulus_" + std::string(to_string(kind)), "modulus",
                     "ensemble medians stabilize across the 4 smallest dyadic eps", 0.15};
      mr.detail = to_json(m);
      mr.pass = m.stability <= 0.15;
      doc.add(mr);
      for (std::size_t i = 0; i < ek.size(); ++i) {
        std::ostringstream os;
        os.precision(17);
        os << to_string(kind) << ',' << ek[i] << ',' << m.medians[i] << '\n';
        mcsv += os.str();
      }
    }
  }
  if (c.output.has("csv")) {
    write_text(out_path(c, "variogram.csv"), csv);
    write_text(out_path(c, "moduli.csv"), mcsv);
  }
  return doc;
}

ReportDocument run_verify(const RunConfig& c) {
  ReportDocument doc(c);
  try {
    run_battery(c, doc);
  } catch (const Error& e) {
    doc.mark_incomplete(e.what());
  }
  return doc;
}

ReportDocument run_report(const RunConfig& c) {
  ReportDocument doc(c);
  if (c.task.inputs.empty()) throw ConfigError("report needs task.inputs");
  Json sources = Json::array();
  for (const auto& path : c.task.inputs) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open report '" + path + "'");
    Json in;
    try {
      in = Json::parse(f);
    } catch (const Json::exception& ex) {
      throw FormatError("'" + path + "' is not a JSON report: " + ex.what());
    }
    if (in.value("schema_version", 0) != kReportSchemaVersion)
      throw FormatError("'" + path + "' has an unsupported schema_version");
    sources.push_back({{"path", path}, {"complete", in.value("complete", false)},
                       {"verdict", in["verdict"]}});
    for (const auto& r : in["results"]) {
      CheckResult cr{fs::path(path).stem().string() + "/" + r.value("name", ""), r.value("kind", ""),
                     r.value("reference", ""), r["tolerance"].is_number() ? r["tolerance"].get<double>() : NAN,
                     r.value("pass", false), r.value("skipped", false)};
      doc.add(cr);
    }
    if (!in.value("complete", false)) doc.mark_incomplete("input '" + path + "' is incomplete");
  }
  doc.json()["sources"] = sources;
  return doc;
}

ReportDocument run_task(const RunConfig& c) {
  switch (c.task.name) {
    case Task::Covariance: return run_covariance(c);
    case Task::Sample: return run_sample(c);
    case Task::Estimate: return run_estimate(c);
    case Task::Verify: return run_verify(c);
    case Task::Report: return run_report(c);
  }
  throw ConfigError("unknown task");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"heatfield: covariances, samplers and estimators for the fractional-colored heat equation"};
  app.require_subcommand(1);
  std::string config_path;
  bool emit_only = false;
  std::map<std::string, std::string> flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "configuration file");
    sub->add_flag("--print-config", emit_only, "print the resolved configuration and exit");
    for (const auto& l : leaves()) {
      if (l.key == "task.name") continue;
      sub->add_option_function<std::string>(
          "--" + l.key, [&flags, key = l.key](const std::string& v) { flags[key] = v; }, l.help);
    }
  };
  std::map<CLI::App*, Task> tasks;
  for (auto t : {Task::Covariance, Task::Sample, Task::Estimate, Task::Verify, Task::Report}) {
    static const std::map<Task, std::string> about{
        {Task::Covariance, "tabulate covariance matrices and spectral densities"},
        {Task::Sample, "draw an ensemble and store it"},
        {Task::Estimate, "exponent and modulus reports from a stored ensemble"},
        {Task::Verify, "run the verification battery"},
        {Task::Report, "merge JSON reports"}};
    auto* sub = app.add_subcommand(std::string(to_string(t)), about.at(t));
    add_common(sub);
    tasks[sub] = t;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }
  Task task = Task::Verify;
  for (auto* s : app.get_subcommands()) task = tasks.at(s);

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot open config file '" + config_path + "'");
      std::stringstream ss;
      ss << f.rdbuf();
      apply_tree(cfg, parse_tree(ss.str(), config_path), config_path);
    }
    RawTree ft;
    for (const auto& [k, v] : flags) ft[k] = {flag_literal(k, v), 0};
    apply_tree(cfg, ft, "flag");
    cfg.task.name = task;
    cfg.validate();
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  }
  if (emit_only) {
    out << emit_config(cfg);
    return kPass;
  }

  std::optional<ReportDocument> doc;
  int code = kPass;
  try {
    doc = run_task(cfg);
    if (!doc->complete()) code = kNumericalFailure;
    else if (!doc->all_pass()) code = kVerificationFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ParameterDomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const fs::filesystem_error& e) {
    err << "output error: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    if (cfg.output.has("json")) write_text(out_path(cfg, "report.json"), doc->dump());
    if (cfg.output.has("csv")) write_text(out_path(cfg, "summary.csv"), doc->summary_csv());
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kUsageError;
  }
  for (const auto& r : doc->json()["results"]) {
    const char* tag = r.value("skipped", false) ? "SKIP" : r.value("pass", false) ? "PASS" : "FAIL";
    out << tag << "  " << r.value("name", "") << "\n";
  }
  if (!doc->complete()) err << "incomplete: " << doc->json().value("error", "") << "\n";
  out << (code == kPass ? "all checks passed" : "verdict: fail") << "\n";
  return code;
}

}  // namespace heatfield::app
