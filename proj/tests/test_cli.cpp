#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "ctl/commands.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run_ctl(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + CTL_BINARY + std::string(" ") + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::ordered_json without_timings(const std::string& text) {
  auto j = nlohmann::ordered_json::parse(text);
  j.erase("timings");
  return j;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("ctl_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("usage and parameter errors exit with 2") {
  CHECK(run_ctl("").code == 2);
  CHECK(run_ctl("frobnicate").code == 2);
  CHECK(run_ctl("orbit-stats --no-such-flag").code == 2);
  CHECK(run_ctl("orbit-stats --depth x").code == 2);
  CHECK(run_ctl("orbit-stats --system nope").code == 2);
  CHECK(run_ctl("orbit-stats --word-len 21").code == 2);
  CHECK(run_ctl("separation --delta 1/10").code == 2);
  CHECK(run_ctl("separation --delta 0.1").code == 2);
  CHECK(run_ctl("separation --theta 1/100").code == 2);
  CHECK(run_ctl("arclike --eps 1/2").code == 2);
  CHECK(run_ctl("proof-paths --trials 0").code == 2);
  CHECK(run_ctl("orbit-stats --help").code == 0);
}

TEST_CASE("node budget overrun exits with 3 and a partial report") {
  Run r = run_ctl("separation", "CTL_MAX_NODES=1000");
  CHECK(r.code == 3);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "separation");
  CHECK(j.contains("error"));
  CHECK(j["config"]["max_nodes"] == 1000);
}

TEST_CASE("pass and fail verdicts map to 0 and 1") {
  Run pass = run_ctl("orbit-stats --orbit-len 100000");
  CHECK(pass.code == 0);
  CHECK(nlohmann::json::parse(pass.out)["pass"] == true);
  Run fail = run_ctl("orbit-stats --orbit-len 10");
  CHECK(fail.code == 1);
  CHECK(nlohmann::json::parse(fail.out)["verdicts"][0]["verdict"] == "FAIL");
  CHECK(run_ctl("orbit-stats --system odometer2").code == 0);
  CHECK(run_ctl("mixing-test --system odometer2 --orbit-len 100000").code == 0);
  CHECK(run_ctl("mixing-test --system fullshift2 --orbit-len 100000 --word-len 3").code == 0);
}

TEST_CASE("out directory receives the report and side files") {
  fs::path dir = scratch("out");
  Run r = run_ctl("orbit-stats --orbit-len 100000 --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "orbit-stats.json"));
  CHECK(fs::exists(dir / "coverage_forward.csv"));
  CHECK(fs::exists(dir / "coverage_backward.csv"));
  std::ifstream in(dir / "orbit-stats.json");
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(without_timings(buf.str()) == without_timings(r.out));
  std::ifstream csv(dir / "coverage_forward.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "steps,fraction");
  fs::remove_all(dir);
}

TEST_CASE("reports are deterministic apart from timings") {
  for (const std::string args :
       {"orbit-stats --orbit-len 200000", "mixing-test --orbit-len 200000 --seed 3",
        "separation --depth 4 --levels 8", "proof-paths --trials 300 --seed 5"}) {
    CAPTURE(args);
    Run a = run_ctl(args + " --workers 1");
    Run b = run_ctl(args + " --workers 4");
    Run c = run_ctl(args + " --workers 4");
    REQUIRE(a.code == 0);
    CHECK(without_timings(a.out) == without_timings(b.out));
    CHECK(without_timings(b.out) == without_timings(c.out));
  }
}

TEST_CASE("config validation in the library") {
  ctl::RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.levels = 0;
  CHECK_THROWS(c.validate());
  c = ctl::RunConfig{};
  c.word_len = 0;
  CHECK_THROWS(c.validate());
  c = ctl::RunConfig{};
  c.eta = ctl::Rational(-1, 20);
  CHECK_THROWS(c.validate());
}

TEST_CASE("budget from the environment") {
  setenv("CTL_MAX_NODES", "12345", 1);
  CHECK(ctl::node_budget_from_env(7) == 12345);
  setenv("CTL_MAX_NODES", "junk", 1);
  CHECK(ctl::node_budget_from_env(7) == 7);
  unsetenv("CTL_MAX_NODES");
  CHECK(ctl::node_budget_from_env(7) == 7);
}
