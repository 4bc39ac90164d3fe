#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "dlw-cli-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path work_dir() {
  static const TempDir dir;
  return dir.path;
}

Result dlw(const std::string& args) {
  const std::string cmd = "cd '" + work_dir().string() + "' && '" DLW_BINARY "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = work_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kScenarios = DLW_SCENARIO_DIR;

}  // namespace

TEST_CASE("derive is exact and reproducible") {
  const Result a = dlw("derive");
  const Result b = dlw("derive --output derive.json");
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("(l,m,n,p,q,r) = (1,0,0,1,1,0)") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(work_dir() / "derive.json"));
  CHECK(j.is_object());
}

TEST_CASE("run writes the configured outputs") {
  const Result r = dlw("run '" + kScenarios + "/solitary_kernel.json' --output extra.csv");
  CHECK(r.code == 0);
  const std::string csv = slurp(work_dir() / "solitary_kernel.csv");
  CHECK(csv.rfind("x,y,t,phi,u,h,res1,res2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2206);
  CHECK(slurp(work_dir() / "extra.csv") == csv);
  const auto rep = nlohmann::json::parse(slurp(work_dir() / "solitary_kernel_report.json"));
  CHECK(rep["passed"] == true);
}

TEST_CASE("verification failures exit 1") {
  CHECK(dlw("run '" + kScenarios + "/solitary_kernel.json' --threshold 1e-9").code == 1);
  const std::string bad = write_file("perturbed.json", R"({
    "seed": { "kind": "kernels", "kernels": [{ "a": "1", "b": "y" }] },
    "grid": { "x": [-1, 1, 3], "y": [0, 0, 1], "t": [0, 0, 1] },
    "debug": { "perturbH": 0.01 }
  })");
  CHECK(dlw("run '" + bad + "'").code == 1);
  CHECK(dlw("reduce 1 0 --threshold 1e-12").code == 1);
}

TEST_CASE("input errors exit 2") {
  CHECK(dlw("run /nonexistent.json").code == 2);
  CHECK(dlw("frobnicate").code == 2);
  CHECK(dlw("").code == 2);
  CHECK(dlw("run '" + kScenarios + "/solitary_kernel.json' --branch sideways").code == 2);
  CHECK(dlw("run '" + kScenarios + "/solitary_kernel.json' --step -1").code == 2);
  const std::string typo = write_file("typo.json", R"json({
    "seed": { "kind": "kernels", "kernels": [{ "a": "tanj(y)", "b": "y" }] },
    "grid": { "x": [-1, 1, 3], "y": [0, 0, 1], "t": [0, 0, 1] }
  })json");
  CHECK(dlw("run '" + typo + "'").code == 2);
  CHECK(dlw("sweep '" + kScenarios + "/solitary_kernel.json'").code == 2);
  CHECK(dlw("reduce 1").code == 2);
  CHECK(dlw("reduce 1 0 --z 1 0 5").code == 2);
}

TEST_CASE("other subcommands succeed") {
  CHECK(dlw("sweep '" + kScenarios + "/sweep_amplitude.json'").code == 0);
  CHECK(dlw("run '" + kScenarios + "/two_kernel.json'").code == 0);
  CHECK(dlw("run '" + kScenarios + "/heat_polynomial.json'").code == 0);
  const Result r = dlw("reduce 0.5 1 --branch minus --output reduced.csv");
  CHECK(r.code == 0);
  CHECK(slurp(work_dir() / "reduced.csv").rfind("z,t,u,h,res1,res2\n", 0) == 0);
  CHECK(dlw("--help").code == 0);
}
