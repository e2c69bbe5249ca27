#pragma once

// JSON report document. Layout:
//
//   { "schema_version": 1,
//     "environment": { "tool", "version", "build", "timestamp" },
//     "config": { <section>: { <leaf>: value } },
//     "config_text": "<config file reproducing the run>",
//     "complete": bool, "error": string (only when incomplete),
//     "results": [ { "name", "kind", "reference", "tolerance", "pass", "skipped", ... } ],
//     "verdict": { "pass", "n_pass", "n_fail", "n_skipped" } }

#include <string>

#include <json.hpp>

#include "config.hpp"
#include "heatfield/estimators.hpp"

namespace heatfield::app {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

struct CheckResult {
  std::string name;
  std::string kind;  ///< exponent, modulus, check
  std::string reference;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  Json detail = Json::object();
};

class ReportDocument {
 public:
  explicit ReportDocument(const RunConfig& c);
  ReportDocument(Json doc) : doc_(std::move(doc)) {}

  void add(const CheckResult& r);
  void mark_incomplete(const std::string& error);
  void set_timestamp(const std::string& ts);

  bool complete() const { return doc_.value("complete", false); }
  bool all_pass() const;
  const Json& json() const { return doc_; }
  Json& json() { return doc_; }
  std::string dump() const;
  /// "name,kind,pass,skipped,tolerance,reference"
  std::string summary_csv() const;

 private:
  void refresh_verdict();
  Json doc_;
};

Json config_json(const RunConfig& c);
std::string utc_timestamp();
std::string build_identifier();

Json to_json(const VariogramTable& t);
Json to_json(const ExponentReport& r);
Json to_json(const ModulusReport& r);
Json to_json(const SlndReport& r);
Json to_json(const WhiteningReport& r);
Json to_json(const SandwichReport& r);
Json to_json(const RemainderBoundReport& r);

}  // namespace heatfield::app
