#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace lightcone::cli;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lightcone");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lightcone_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("verify passes on the catalog surfaces") {
  for (const char* surface : {"round-sphere", "cylinder", "paraboloid"}) {
    CAPTURE(surface);
    const auto manifest = scratch(std::string("verify_") + surface + ".json");
    const Outcome o = invoke({"verify", surface, "--grid", "6x8", "--out", manifest.string()});
    CHECK(o.code == kOk);
    const auto j = read_json(manifest);
    CHECK(j["exit_code"] == 0);
    CHECK(j["passed"] == true);
    for (const auto& c : j["checks"]) CHECK(c["status"] != "FAIL");
  }
}

TEST_CASE("verify on a perturbed sphere and a boosted round sphere") {
  const auto spec = scratch("spec.json");
  write_file(spec, "[[2, 0, 0.05], [3, 1, -0.03]]");
  CHECK(invoke({"verify", "perturbed", "--spec", spec.string(), "--grid", "6x8"}).code == kOk);
  CHECK(invoke({"verify", "round-sphere", "--r", "2", "--u", "-1.25", "0.75", "0", "0", "--grid", "6x8"}).code == kOk);
}

TEST_CASE("tolerance overrides can force failures") {
  const Outcome o = invoke({"verify", "round-sphere", "--grid", "4x6", "--tol", "relation=1e-300"});
  CHECK(o.code == kCheckFailed);
  CHECK(invoke({"verify", "round-sphere", "--tol", "nonsense=1"}).code == kUsage);
  CHECK(invoke({"verify", "round-sphere", "--tol", "relation"}).code == kUsage);
}

TEST_CASE("input errors") {
  CHECK(invoke({"verify", "torus"}).code == kUsage);
  CHECK(invoke({}).code == kUsage);
  CHECK(invoke({"verify", "round-sphere", "--r", "-1"}).code == kInvalidInput);
  CHECK(invoke({"verify", "round-sphere", "--u", "1", "0", "0", "0"}).code == kInvalidInput);
  CHECK(invoke({"verify", "perturbed"}).code != kOk);
  const auto bad_spec = scratch("bad_spec.json");
  write_file(bad_spec, "[[7, 0, 0.1]]");
  CHECK(invoke({"verify", "perturbed", "--spec", bad_spec.string()}).code == kInvalidInput);
  CHECK(invoke({"global", "cylinder", "--grid", "8x16"}).code == kInvalidInput);
}

TEST_CASE("global on a round sphere") {
  const auto manifest = scratch("global.json");
  const Outcome o = invoke({"global", "round-sphere", "--r", "2", "--grid", "24x48", "--out", manifest.string()});
  CHECK(o.code == kOk);
  const auto j = read_json(manifest);
  CHECK(j["command"] == "global");
  CHECK(j["report"]["ii_eta_area"].get<double>() == doctest::Approx(6.283185307179586));
}

TEST_CASE("export writes one row per node") {
  const Outcome o = invoke({"export", "round-sphere", "--grid", "3x5"});
  CHECK(o.code == kOk);
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta,phi,K,Keta,d,gap_low,gap_high,psi0");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 15);
  CHECK(invoke({"export", "round-sphere", "--out", "/nonexistent/dir/x.csv"}).code == kInvalidInput);
}

TEST_CASE("search config errors carry positions") {
  const auto cfg = scratch("bad_config.json");
  write_file(cfg, "{\n  \"l_max\": 2,\n  \"starts\": }\n");
  const Outcome o = invoke({"search", cfg.string()});
  CHECK(o.code == kBadConfig);
  CHECK(o.err.find(":3:") != std::string::npos);

  write_file(cfg, R"({"unknown_key": 1})");
  CHECK(invoke({"search", cfg.string()}).code == kBadConfig);
  CHECK(invoke({"search", scratch("missing.json").string()}).code == kBadConfig);
}

TEST_CASE("search writes manifest, report and trace") {
  const auto cfg = scratch("search.json");
  write_file(cfg, R"({"l_max": 2, "n_theta": 8, "n_phi": 16, "starts": 1, "max_evaluations": 40, "restarts": 0})");
  const auto manifest = scratch("run.json");
  const Outcome o = invoke({"search", cfg.string(), "--seed", "3", "--out", manifest.string()});
  CHECK(o.code == kOk);
  const auto j = read_json(manifest);
  CHECK(j["seed"] == 3);
  CHECK(fs::exists(scratch("run.report.json")));
  CHECK(fs::exists(scratch("run.trace.csv")));
  CHECK(invoke({"search", cfg.string(), "--out", "/nonexistent/dir/run.json"}).code == kInvalidInput);
}
