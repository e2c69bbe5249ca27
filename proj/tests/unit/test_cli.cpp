#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "app/commands.hpp"

using namespace heatfield::app;
namespace fs = std::filesystem;

namespace {
struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "heatfield");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("heatfield_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string read(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kSmallVerify = R"([model]
H = 0.7
alpha = 0.5
d = 1

[grid]
n_points = 32

[verify]
whitening_paths = 300
slnd_points = 2
)";
}  // namespace

TEST_CASE("existence violation is a usage error naming the values") {
  const auto r = cli({"verify", "--model.H", "0.6", "--model.alpha", "0.2", "--model.d", "3"});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("d=3") != std::string::npos);
  CHECK(r.err.find("4H+alpha=2.6") != std::string::npos);
}

TEST_CASE("flags override the file and are echoed") {
  const auto d = scratch_dir("flags");
  std::ofstream(d / "c.toml") << "[model]\nH = 0.8\nalpha = 0.5\n";
  const auto r = cli({"sample", "-c", (d / "c.toml").string(), "--model.H", "0.75", "--print-config"});
  CHECK(r.code == kPass);
  CHECK(r.out.find("H = 0.75") != std::string::npos);
  CHECK(r.out.find("[mc]") != std::string::npos);
  CHECK(r.out.find("n_paths = 200") != std::string::npos);
  const auto back = parse_config(r.out);
  CHECK(back.model.H == 0.75);
  CHECK(back.task.name == Task::Sample);
}

TEST_CASE("configuration errors point at the line") {
  const auto d = scratch_dir("bad");
  std::ofstream(d / "c.toml") << "[model]\nH = 0.7\ncolour = 3\n";
  const auto r = cli({"verify", "-c", (d / "c.toml").string()});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find(":3:") != std::string::npos);
  CHECK(cli({"verify", "--model.H", "abc"}).code == kUsageError);
  CHECK(cli({"verify", "--no-such-flag", "1"}).code == kUsageError);
  CHECK(cli({"frobnicate"}).code == kUsageError);
  CHECK(cli({"verify", "-c", (d / "missing.toml").string()}).code == kUsageError);
}

TEST_CASE("verify passes, fails under a theory shift, and is reproducible") {
  const auto d = scratch_dir("verify");
  std::ofstream(d / "c.toml") << kSmallVerify;
  const std::string cfg = (d / "c.toml").string();
  const auto a = cli({"verify", "-c", cfg, "--output.directory", (d / "a").string()});
  INFO(a.out, a.err);
  CHECK(a.code == kPass);
  CHECK(a.out.find("all checks passed") != std::string::npos);
  const auto b = cli({"verify", "-c", cfg, "--output.directory", (d / "b").string()});
  CHECK(b.code == kPass);

  auto ja = Json::parse(read(d / "a" / "report.json"));
  auto jb = Json::parse(read(d / "b" / "report.json"));
  CHECK(ja["schema_version"] == kReportSchemaVersion);
  CHECK(ja["verdict"]["pass"] == true);
  for (auto* j : {&ja, &jb}) {
    (*j)["environment"].erase("timestamp");
    (*j)["config"]["output"].erase("directory");
    (*j).erase("config_text");
  }
  CHECK(ja == jb);

  const auto echoed = parse_config(Json::parse(read(d / "a" / "report.json"))["config_text"].get<std::string>());
  CHECK(echoed.grid.n_points == 32);

  const auto s = cli({"verify", "-c", cfg, "--verify.theory_shift", "0.5", "--output.directory",
                      (d / "s").string()});
  CHECK(s.code == kVerificationFailure);
  CHECK(s.out.find("FAIL") != std::string::npos);
}

TEST_CASE("report merges JSON documents") {
  const auto d = scratch_dir("merge");
  std::ofstream(d / "c.toml") << kSmallVerify;
  const std::string cfg = (d / "c.toml").string();
  cli({"verify", "-c", cfg, "--output.directory", (d / "a").string()});
  cli({"verify", "-c", cfg, "--verify.theory_shift", "0.5", "--output.directory", (d / "b").string()});
  const auto r = cli({"report", "--task.inputs", (d / "a" / "report.json").string() + "," +
                                                     (d / "b" / "report.json").string(),
                      "--output.directory", (d / "m").string(), "--output.formats", "json,csv"});
  CHECK(r.code == kVerificationFailure);
  const auto j = Json::parse(read(d / "m" / "report.json"));
  const auto ja = Json::parse(read(d / "a" / "report.json"));
  CHECK(j["results"].size() == 2 * ja["results"].size());
  CHECK(read(d / "m" / "summary.csv").rfind("name,kind,pass,skipped,tolerance,reference", 0) == 0);

  std::ofstream(d / "junk.json") << "{not json";
  CHECK(cli({"report", "--task.inputs", (d / "junk.json").string(), "--output.directory",
             (d / "j").string()})
            .code == kUsageError);
}

TEST_CASE("sample then estimate") {
  const auto d = scratch_dir("pipeline");
  const auto s = cli({"sample", "--task.quantity", "fbm", "--task.fbm_gamma", "0.5", "--grid.n_points",
                      "1025", "--mc.n_paths", "100", "--mc.method", "circulant_embedding",
                      "--output.formats", "binary", "--output.directory", d.string()});
  INFO(s.err);
  REQUIRE(s.code == kPass);
  REQUIRE(fs::exists(d / "ensemble.bin"));
  const auto e = cli({"estimate", "--task.input", (d / "ensemble.bin").string(), "--output.directory",
                      (d / "est").string(), "--output.formats", "json,csv"});
  INFO(e.err);
  CHECK(e.code != kUsageError);
  CHECK(e.code != kNumericalFailure);
  CHECK(fs::exists(d / "est" / "report.json"));
  CHECK(fs::exists(d / "est" / "variogram.csv"));

  std::ofstream(d / "bad.bin") << "garbage";
  CHECK(cli({"estimate", "--task.input", (d / "bad.bin").string(), "--output.directory",
             (d / "x").string()})
            .code == kUsageError);
}

TEST_CASE("covariance tables") {
  const auto d = scratch_dir("cov");
  const auto r = cli({"covariance", "--task.quantity", "fbm_ref", "--grid.start", "0.25", "--grid.n_points",
                      "4", "--output.formats", "csv", "--output.directory", d.string()});
  CHECK(r.code == kPass);
  CHECK(read(d / "covariance.csv").rfind("i,j,arg_i,arg_j,value", 0) == 0);
}

TEST_CASE("executable exit codes") {
  const char* exe = std::getenv("HEATFIELD_CLI");
  if (!exe) return;
  const auto d = scratch_dir("exe");
  const std::string quiet = " > " + (d / "o").string() + " 2>&1";
  auto status = [&](const std::string& args) {
    const int s = std::system((std::string(exe) + " " + args + quiet).c_str());
    return WEXITSTATUS(s);
  };
  CHECK(status("--help") == 0);
  CHECK(status("verify --model.d 3 --model.H 0.6 --model.alpha 0.2") == 2);
  CHECK(status("sample --print-config") == 0);
}
