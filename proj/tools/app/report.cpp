#include "report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

namespace heatfield::app {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

Json config_json(const RunConfig& c) {
  Json j = Json::object();
  for (const auto& l : leaves()) {
    const auto dot = l.key.find('.');
    const std::string sec = l.key.substr(0, dot), name = l.key.substr(dot + 1);
    const std::string lit = l.emit(c);
    Json v;
    if (lit.front() == '"' || lit.front() == '[') {
      v = Json::parse(lit);
    } else if (lit == "true" || lit == "false") {
      v = lit == "true";
    } else if (lit.find_first_of(".eEn") == std::string::npos) {
      v = std::stoll(lit);
    } else {
      v = std::stod(lit);
    }
    j[sec][name] = v;
  }
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string build_identifier() {
  std::string s = "heatfield " HEATFIELD_VERSION;
#if defined(__clang__)
  s += " clang " __clang_version__;
#elif defined(__GNUC__)
  s += " gcc " __VERSION__;
#endif
#ifdef NDEBUG
  s += " release";
#else
  s += " debug";
#endif
  return s;
}

ReportDocument::ReportDocument(const RunConfig& c) {
  doc_["schema_version"] = kReportSchemaVersion;
  doc_["environment"] = {{"tool", "heatfield"},
                         {"version", HEATFIELD_VERSION},
                         {"build", build_identifier()},
                         {"timestamp", utc_timestamp()}};
  doc_["config"] = config_json(c);
  doc_["config_text"] = emit_config(c);
  doc_["complete"] = true;
  doc_["results"] = Json::array();
  refresh_verdict();
}

void ReportDocument::add(const CheckResult& r) {
  Json j;
  j["name"] = r.name;
  j["kind"] = r.kind;
  j["reference"] = r.reference;
  j["tolerance"] = number(r.tolerance);
  j["pass"] = r.pass;
  j["skipped"] = r.skipped;
  for (auto it = r.detail.begin(); it != r.detail.end(); ++it) j[it.key()] = it.value();
  doc_["results"].push_back(std::move(j));
  refresh_verdict();
}

void ReportDocument::mark_incomplete(const std::string& error) {
  doc_["complete"] = false;
  doc_["error"] = error;
  refresh_verdict();
}

void ReportDocument::set_timestamp(const std::string& ts) { doc_["environment"]["timestamp"] = ts; }

bool ReportDocument::all_pass() const { return doc_["verdict"]["pass"].get<bool>(); }

void ReportDocument::refresh_verdict() {
  int np = 0, nf = 0, ns = 0;
  for (const auto& r : doc_["results"]) {
    if (r.value("skipped", false))
      ++ns;
    else if (r.value("pass", false))
      ++np;
    else
      ++nf;
  }
  doc_["verdict"] = {{"pass", nf == 0 && doc_.value("complete", false)},
                     {"n_pass", np},
                     {"n_fail", nf},
                     {"n_skipped", ns}};
}

std::string ReportDocument::dump() const { return doc_.dump(2) + "\n"; }

std::string ReportDocument::summary_csv() const {
  std::string out = "name,kind,pass,skipped,tolerance,reference\n";
  for (const auto& r : doc_["results"]) {
    out += r.value("name", "") + "," + r.value("kind", "") + "," +
           (r.value("pass", false) ? "1" : "0") + "," + (r.value("skipped", false) ? "1" : "0") +
           "," + r["tolerance"].dump() + ",\"" + r.value("reference", "") + "\"\n";
  }
  return out;
}

Json to_json(const VariogramTable& t) {
  Json j;
  j["lags"] = numbers(t.lags);
  j["values"] = numbers(t.values);
  j["stderrs"] = numbers(t.stderrs);
  j["n_pairs"] = t.n_pairs;
  return j;
}

Json to_json(const ExponentReport& r) {
  return {{"estimate", number(r.estimate)}, {"stderr", number(r.stderr_)},
          {"r_squared", number(r.r_squared)}, {"prefactor", number(r.prefactor)},
          {"lags_used", numbers(r.lags_used)}, {"theory_value", number(r.theory_value)},
          {"verdict", r.pass ? "pass" : "fail"}};
}

Json to_json(const ModulusReport& r) {
  Json j = {{"normalizer", std::string(to_string(r.normalizer))},
            {"epsilons", numbers(r.epsilons)},
            {"medians", numbers(r.medians)},
            {"stability", number(r.stability)},
            {"spread", number(r.spread)}};
  if (!r.medians_pairwise.empty()) {
    j["medians_pairwise"] = numbers(r.medians_pairwise);
    j["stability_pairwise"] = number(r.stability_pairwise);
  }
  return j;
}

Json to_json(const SlndReport& r) {
  return {{"exponent", number(r.exponent)}, {"frozen_constant", number(r.frozen_constant)},
          {"min_ratio", number(r.min_ratio)}, {"min_ratio_by_size", numbers(r.min_ratio_by_size)},
          {"configurations", r.configurations}, {"violations", r.violations},
          {"offending", r.offending}};
}

Json to_json(const WhiteningReport& r) {
  return {{"statistic", number(r.statistic)}, {"dof", number(r.dof)},
          {"p_value", number(r.p_value)}, {"significance", number(r.significance)}};
}

Json to_json(const SandwichReport& r) {
  return {{"c_lower", number(r.c_lower)}, {"c_upper", number(r.c_upper)},
          {"min_lower_margin", number(r.min_lower_margin)},
          {"min_upper_margin", number(r.min_upper_margin)}};
}

Json to_json(const RemainderBoundReport& r) {
  return {{"c_fit", number(r.c_fit)}, {"worst_ratio", number(r.worst_ratio)},
          {"slack", number(r.slack)}};
}

}  // namespace heatfield::app
