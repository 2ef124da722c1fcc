#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + OSC3_CLI_PATH + "' " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string config(const std::string& name) { return std::string(OSC3_CONFIG_DIR) + "/" + name; }

fs::path scratch() {
  const auto d = fs::temp_directory_path() / ("osc3_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = R"({"name": "small", "schedule": {"k0": {"kind": "quench", "initial": 4, "final": 6},
  "j12": 1, "j13": 3, "j23": 8}, "t_end": 2, "samples": 64})";

}  // namespace

TEST(Cli, CheckPassesOnShippedConfigs) {
  for (const char* name : {"decoupled.json", "equal_couplings.json", "tabulated.json"}) {
    const auto r = run("check --config " + config(name));
    EXPECT_EQ(r.status, 0) << name << "\n" << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
  }
}

TEST(Cli, SweepWritesCsvToStdout) {
  const auto dir = scratch();
  const auto cfg = write_file(dir / "small.json", kSmall);
  const auto r = run("sweep --config " + cfg + " --out -");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("t,b1,bplus,bminus,purity_C,purity_BC,xi_C,xi1,xi2,S_von_C,S_von_BC,", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 65);
}

TEST(Cli, SweepIsDeterministicAcrossThreadCounts) {
  const auto dir = scratch();
  const auto cfg = write_file(dir / "small.json", kSmall);
  const auto a = run("sweep --config " + cfg + " --out " + (dir / "a.csv").string(), "OSC3_THREADS=1");
  const auto b = run("sweep --config " + cfg + " --out " + (dir / "b.csv").string(), "OSC3_THREADS=4");
  ASSERT_EQ(a.status, 0);
  ASSERT_EQ(b.status, 0);
  const auto ta = read_file(dir / "a.csv");
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, read_file(dir / "b.csv"));
}

TEST(Cli, ScenarioWritesCsvAndPlot) {
  const auto dir = scratch();
  const auto csv = (dir / "fig3.csv").string();
  const auto gp = (dir / "fig3.gp").string();
  const auto r = run("scenario fig3 --out " + csv + " --plot " + gp);
  ASSERT_EQ(r.status, 0);
  const auto text = read_file(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 502);
  EXPECT_NE(read_file(gp).find(csv), std::string::npos);
}

TEST(Cli, ConfigErrorsExitWithTwo) {
  const auto dir = scratch();
  EXPECT_EQ(run("check --config /nonexistent.json").status, 2);
  EXPECT_EQ(run("sweep --config " + write_file(dir / "bad.json", "{\"t_end\": 1}")).status, 2);
  EXPECT_EQ(run("sweep --config " + write_file(dir / "key.json", R"({"schedule": {"k0": 1, "j12": 1, "j13": 2,
      "j23": 3}, "t_end": 1, "extra": true})")).status, 2);
  EXPECT_EQ(run("scenario fig9").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("sweep").status, 2);
}

TEST(Cli, InvariantFailureExitsWithOne) {
  const auto dir = scratch();
  const auto cfg = write_file(dir / "inverted.json",
                              R"({"schedule": {"k0": -1, "j12": 0.5, "j13": 0.5, "j23": 0.7}, "t_end": 1})");
  const auto r = run("check --config " + cfg);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, HelpExitsCleanly) { EXPECT_EQ(run("--help").status, 0); }
