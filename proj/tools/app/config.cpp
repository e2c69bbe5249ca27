#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "heatfield/cov_matrix.hpp"
#include "heatfield/samplers.hpp"

namespace heatfield::app {

std::string_view to_string(Task t) {
  switch (t) {
    case Task::Covariance: return "covariance";
    case Task::Sample: return "sample";
    case Task::Estimate: return "estimate";
    case Task::Verify: return "verify";
    case Task::Report: return "report";
  }
  return "?";
}

Task task_from_string(std::string_view s) {
  for (auto t : {Task::Covariance, Task::Sample, Task::Estimate, Task::Verify, Task::Report})
    if (s == to_string(t)) return t;
  throw ConfigError("unknown task '" + std::string(s) + "'");
}

std::vector<double> GridSpec::points() const {
  std::vector<double> g(n_points);
  for (int i = 0; i < n_points; ++i)
    g[i] = i + 1 == n_points ? end : start + (end - start) * i / (n_points - 1);
  return g;
}

bool OutputSpec::has(std::string_view f) const {
  for (const auto& x : formats)
    if (x == f) return true;
  return false;
}

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string num(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

// Reads a quoted string starting at s[i] == '"'; advances i past the close.
std::string read_quoted(const std::string& s, std::size_t& i) {
  std::string out;
  for (++i; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      out += s[++i];
    } else if (s[i] == '"') {
      ++i;
      return out;
    } else {
      out += s[i];
    }
  }
  throw ConfigError("unterminated string");
}

std::string as_string(const std::string& lit) {
  std::size_t i = 0;
  if (lit.empty() || lit[0] != '"') throw ConfigError("expected a quoted string, got " + lit);
  auto s = read_quoted(lit, i);
  if (!trim(std::string_view(lit).substr(i)).empty())
    throw ConfigError("trailing characters after string " + lit);
  return s;
}

std::vector<std::string> as_list(const std::string& lit) {
  if (lit.size() < 2 || lit.front() != '[' || lit.back() != ']')
    throw ConfigError("expected a list [\"a\", ...], got " + lit);
  std::vector<std::string> out;
  const std::string body = lit.substr(1, lit.size() - 2);
  std::size_t i = 0;
  bool want_item = true;
  while (i < body.size()) {
    const char c = body[i];
    if (c == ' ' || c == '\t') {
      ++i;
    } else if (c == '"' && want_item) {
      out.push_back(read_quoted(body, i));
      want_item = false;
    } else if (c == ',' && !want_item) {
      want_item = true;
      ++i;
    } else {
      throw ConfigError("malformed list " + lit);
    }
  }
  if (want_item && !out.empty()) throw ConfigError("trailing comma in list " + lit);
  return out;
}

double as_double(const std::string& lit) {
  double v = 0.0;
  const char* b = lit.data();
  const char* e = b + lit.size();
  if (!lit.empty() && *b == '+') ++b;
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) throw ConfigError("expected a number, got " + lit);
  return v;
}

long long as_int(const std::string& lit) {
  long long v = 0;
  auto r = std::from_chars(lit.data(), lit.data() + lit.size(), v);
  if (r.ec != std::errc() || r.ptr != lit.data() + lit.size())
    throw ConfigError("expected an integer, got " + lit);
  return v;
}

std::uint64_t as_u64(const std::string& lit) {
  std::uint64_t v = 0;
  auto r = std::from_chars(lit.data(), lit.data() + lit.size(), v);
  if (r.ec != std::errc() || r.ptr != lit.data() + lit.size())
    throw ConfigError("expected a nonnegative integer, got " + lit);
  return v;
}

int as_int32(const std::string& lit) {
  const long long v = as_int(lit);
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError("integer out of range: " + lit);
  return static_cast<int>(v);
}

bool as_bool(const std::string& lit) {
  if (lit == "true") return true;
  if (lit == "false") return false;
  throw ConfigError("expected true or false, got " + lit);
}

std::string list(const std::vector<std::string>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + quote(v[i]);
  return s + "]";
}

template <class Get, class Set>
Leaf make_leaf(std::string key, std::string help, Get get, Set set) {
  return Leaf{std::move(key), std::move(help), get, set};
}

std::vector<Leaf> build_leaves() {
  std::vector<Leaf> L;
  auto dbl = [&](std::string k, std::string h, auto ref) {
    L.push_back(make_leaf(
        k, h, [ref](const RunConfig& c) { return num(ref(const_cast<RunConfig&>(c))); },
        [ref](RunConfig& c, const std::string& s) { ref(c) = as_double(s); }));
  };
  auto i32 = [&](std::string k, std::string h, auto ref) {
    L.push_back(make_leaf(
        k, h, [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
        [ref](RunConfig& c, const std::string& s) { ref(c) = as_int32(s); }));
  };
  auto str = [&](std::string k, std::string h, auto ref) {
    L.push_back(make_leaf(
        k, h, [ref](const RunConfig& c) { return quote(ref(const_cast<RunConfig&>(c))); },
        [ref](RunConfig& c, const std::string& s) { ref(c) = as_string(s); }));
  };
  auto lst = [&](std::string k, std::string h, auto ref) {
    L.push_back(make_leaf(
        k, h, [ref](const RunConfig& c) { return list(ref(const_cast<RunConfig&>(c))); },
        [ref](RunConfig& c, const std::string& s) { ref(c) = as_list(s); }));
  };

  dbl("model.H", "Hurst index in (1/2, 1)", [](RunConfig& c) -> double& { return c.model.H; });
  dbl("model.alpha", "spectral exponent in (0, d)", [](RunConfig& c) -> double& { return c.model.alpha; });
  i32("model.d", "spatial dimension (1, 2 or 3)", [](RunConfig& c) -> int& { return c.model.d; });
  L.push_back(make_leaf(
      "model.kernel", "riesz or bessel",
      [](const RunConfig& c) { return quote(std::string(to_string(c.model.kernel))); },
      [](RunConfig& c, const std::string& s) {
        try {
          c.model.kernel = kernel_from_string(as_string(s));
        } catch (const ParameterDomainError& e) {
          throw ConfigError(e.what());
        }
      }));
  dbl("model.T", "time horizon", [](RunConfig& c) -> double& { return c.model.T; });

  L.push_back(make_leaf(
      "task.name", "covariance, sample, estimate, verify or report",
      [](const RunConfig& c) { return quote(std::string(to_string(c.task.name))); },
      [](RunConfig& c, const std::string& s) { c.task.name = task_from_string(as_string(s)); }));
  str("task.quantity", "what to tabulate or sample", [](RunConfig& c) -> std::string& { return c.task.quantity; });
  dbl("task.slice_time", "time of the space slice", [](RunConfig& c) -> double& { return c.task.slice_time; });
  str("task.input", "ensemble file for estimate", [](RunConfig& c) -> std::string& { return c.task.input; });
  lst("task.inputs", "report files to merge", [](RunConfig& c) -> std::vector<std::string>& { return c.task.inputs; });
  dbl("task.bifbm_H", "bifractional index H", [](RunConfig& c) -> double& { return c.task.bifbm_H; });
  dbl("task.bifbm_K", "bifractional index K", [](RunConfig& c) -> double& { return c.task.bifbm_K; });
  dbl("task.fbm_gamma", "fBm index", [](RunConfig& c) -> double& { return c.task.fbm_gamma; });

  str("grid.kind", "time or space", [](RunConfig& c) -> std::string& { return c.grid.kind; });
  dbl("grid.start", "first grid point", [](RunConfig& c) -> double& { return c.grid.start; });
  dbl("grid.end", "last grid point", [](RunConfig& c) -> double& { return c.grid.end; });
  i32("grid.n_points", "number of grid points (>= 2)", [](RunConfig& c) -> int& { return c.grid.n_points; });

  i32("mc.n_paths", "number of sample paths", [](RunConfig& c) -> int& { return c.mc.n_paths; });
  L.push_back(make_leaf(
      "mc.seed", "master seed",
      [](const RunConfig& c) { return std::to_string(c.mc.seed); },
      [](RunConfig& c, const std::string& s) { c.mc.seed = as_u64(s); }));
  str("mc.method", "cholesky, circulant_embedding or spectral_series",
      [](RunConfig& c) -> std::string& { return c.mc.method; });

  dbl("quadrature.rel_tol", "relative tolerance", [](RunConfig& c) -> double& { return c.quadrature.rel_tol; });
  dbl("quadrature.abs_tol", "absolute tolerance", [](RunConfig& c) -> double& { return c.quadrature.abs_tol; });
  i32("quadrature.max_refinements", "maximal refinement levels",
      [](RunConfig& c) -> int& { return c.quadrature.max_refinements; });
  L.push_back(make_leaf(
      "quadrature.singularity_split", "split along singular lines",
      [](const RunConfig& c) { return std::string(c.quadrature.singularity_split ? "true" : "false"); },
      [](RunConfig& c, const std::string& s) { c.quadrature.singularity_split = as_bool(s); }));

  str("output.directory", "output directory", [](RunConfig& c) -> std::string& { return c.output.directory; });
  lst("output.formats", "subset of csv, json, binary",
      [](RunConfig& c) -> std::vector<std::string>& { return c.output.formats; });

  dbl("verify.theory_shift", "added to every theory value",
      [](RunConfig& c) -> double& { return c.verify.theory_shift; });
  i32("verify.whitening_paths", "paths per whitening test",
      [](RunConfig& c) -> int& { return c.verify.whitening_paths; });
  i32("verify.slnd_points", "largest conditioning set in the SLND search",
      [](RunConfig& c) -> int& { return c.verify.slnd_points; });
  return L;
}

}  // namespace

const std::vector<Leaf>& leaves() {
  static const std::vector<Leaf> L = build_leaves();
  return L;
}

void RunConfig::validate() const {
  ModelParams::make(model.H, model.alpha, model.d, model.kernel, model.T);
  quadrature.validate();
  std::ostringstream os;
  if (grid.kind != "time" && grid.kind != "space")
    os << "grid.kind must be time or space, got '" << grid.kind << "'";
  else if (grid.n_points < 2)
    os << "grid.n_points must be >= 2, got " << grid.n_points;
  else if (!(grid.end > grid.start))
    os << "grid.end (" << grid.end << ") must exceed grid.start (" << grid.start << ")";
  else if (grid.kind == "time" && (grid.start < 0.0 || grid.end > model.T))
    os << "time grid [" << grid.start << ", " << grid.end << "] must lie in [0, T=" << model.T << "]";
  else if (mc.n_paths < 1)
    os << "mc.n_paths must be >= 1, got " << mc.n_paths;
  else if (!(task.slice_time > 0.0))
    os << "task.slice_time must be > 0";
  else if (output.directory.empty())
    os << "output.directory is empty";
  else if (verify.whitening_paths < 2 || verify.slnd_points < 1)
    os << "verify.whitening_paths must be >= 2 and verify.slnd_points >= 1";
  for (const auto& f : output.formats)
    if (os.str().empty() && f != "csv" && f != "json" && f != "binary")
      os << "unknown output format '" << f << "'";
  if (os.str().empty()) {
    try {
      sampler_method_from_string(mc.method);
    } catch (const Error& e) {
      os << e.what();
    }
  }
  if (!os.str().empty()) throw ConfigError(os.str());
}

RawTree parse_tree(const std::string& text, const std::string& origin) {
  RawTree tree;
  std::istringstream is(text);
  std::string line, section;
  int ln = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(ln) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++ln;
    // strip comments outside strings
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '\\' && in_str) {
        ++i;
      } else if (line[i] == '"') {
        in_str = !in_str;
      } else if (line[i] == '#' && !in_str) {
        line.resize(i);
        break;
      }
    }
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail("unterminated section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (section.empty() || section.find_first_of(" .=") != std::string::npos)
        fail("bad section name '" + section + "'");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string val = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) fail("missing key");
    if (val.empty()) fail("missing value for '" + key + "'");
    if (section.empty()) fail("key '" + key + "' outside any [section]");
    const std::string full = section + "." + key;
    if (tree.count(full)) fail("duplicate key '" + full + "'");
    tree[full] = {val, ln};
  }
  return tree;
}

void apply_tree(RunConfig& base, const RawTree& tree, const std::string& origin) {
  for (const auto& [key, entry] : tree) {
    const Leaf* leaf = nullptr;
    for (const auto& l : leaves())
      if (l.key == key) leaf = &l;
    const std::string where =
        entry.line > 0 ? origin + ":" + std::to_string(entry.line) : origin + " --" + key;
    if (!leaf) throw ConfigError(where + ": unknown key '" + key + "'");
    try {
      leaf->assign(base, entry.literal);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + key + ": " + e.what());
    }
  }
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig c;
  apply_tree(c, parse_tree(text, origin), origin);
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

std::string emit_config(const RunConfig& c) {
  std::string out, section;
  for (const auto& l : leaves()) {
    const auto dot = l.key.find('.');
    const std::string sec = l.key.substr(0, dot);
    if (sec != section) {
      out += (section.empty() ? "[" : "\n[") + sec + "]\n";
      section = sec;
    }
    out += l.key.substr(dot + 1) + " = " + l.emit(c) + "\n";
  }
  return out;
}

std::string flag_literal(const std::string& key, const std::string& raw) {
  const std::string t = trim(raw);
  if (t.empty()) return "\"\"";
  if (t.front() == '"' || t.front() == '[') return t;
  if (key == "task.inputs" || key == "output.formats") {
    std::vector<std::string> items;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
    return list(items);
  }
  for (const auto& l : leaves())
    if (l.key == key && l.emit(RunConfig{}).front() == '"') return quote(t);
  return t;
}

}  // namespace heatfield::app
