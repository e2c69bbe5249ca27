#pragma once

// Run configuration and its text format.
//
// The file is a small TOML subset: `[section]` headers, `key = value` lines,
// `#` comments. Values are numbers, true/false, "quoted strings" or
// ["lists", "of", "strings"]. Every leaf `section.key` is also a command-line
// flag `--section.key`.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "heatfield/model.hpp"
#include "heatfield/quadrature.hpp"

namespace heatfield::app {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Task { Covariance, Sample, Estimate, Verify, Report };
std::string_view to_string(Task t);
Task task_from_string(std::string_view s);

struct GridSpec {
  std::string kind = "time";  ///< "time" or "space"
  double start = 0.0;
  double end = 1.0;
  int n_points = 256;
  std::vector<double> points() const;
  bool operator==(const GridSpec&) const = default;
};

struct McSpec {
  int n_paths = 200;
  std::uint64_t seed = 1;
  std::string method = "cholesky";
  bool operator==(const McSpec&) const = default;
};

struct OutputSpec {
  std::string directory = "heatfield_out";
  std::vector<std::string> formats{"json"};
  bool has(std::string_view f) const;
  bool operator==(const OutputSpec&) const = default;
};

struct TaskSpec {
  Task name = Task::Verify;
  /// covariance: time_slice, space_slice, pinned_u, bifbm, fbm_ref,
  /// pinned_density, spatial_density. sample: time_slice, space_slice,
  /// pinned_u, fbm.
  std::string quantity = "time_slice";
  double slice_time = 1.0;
  std::string input;                ///< estimate: ensemble file
  std::vector<std::string> inputs;  ///< report: JSON reports to merge
  double bifbm_H = 0.5;
  double bifbm_K = 1.0;
  double fbm_gamma = 0.5;
  bool operator==(const TaskSpec&) const = default;
};

struct VerifySpec {
  /// Added to every theory value before comparison.
  double theory_shift = 0.0;
  int whitening_paths = 2000;
  int slnd_points = 4;
  bool operator==(const VerifySpec&) const = default;
};

struct RunConfig {
  ModelParams model;
  TaskSpec task;
  GridSpec grid;
  McSpec mc;
  QuadratureSpec quadrature;
  OutputSpec output;
  VerifySpec verify;

  /// Enforces every invariant; throws ConfigError or ParameterDomainError.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// One leaf of the configuration tree.
struct Leaf {
  std::string key;  ///< "section.name"
  std::string help;
  std::function<std::string(const RunConfig&)> emit;  ///< literal in file syntax
  std::function<void(RunConfig&, const std::string& literal)> assign;
};
const std::vector<Leaf>& leaves();

/// Raw `section.key -> literal` pairs, with the line each came from.
struct RawEntry {
  std::string literal;
  int line = 0;
};
using RawTree = std::map<std::string, RawEntry>;

RawTree parse_tree(const std::string& text, const std::string& origin = "config");

/// Applies raw entries on top of `base`. Unknown keys and malformed values
/// raise ConfigError naming the origin and line (or the flag).
void apply_tree(RunConfig& base, const RawTree& tree, const std::string& origin = "config");

RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::string& path);
std::string emit_config(const RunConfig& c);

/// Normalizes a command-line value to a literal: bare words become strings,
/// comma-separated bare words become lists.
std::string flag_literal(const std::string& key, const std::string& raw);

}  // namespace heatfield::app
