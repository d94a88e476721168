#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / ("maizx_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  CmdResult run(const std::string& args, const std::string& env = "env -u MAIZX_CONFIG") const {
    const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = env + " '" + std::string(MAIZX_CLI_PATH) + "' " + args + " >'" + out.string() + "' 2>'" +
                            err.string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  static std::string inputs() {
    return std::string("--config '") + MAIZX_DATA_DIR + "/cluster.json' --ci-dir '" + MAIZX_DATA_DIR + "/traces'";
  }

  // Three zone files of `hours` hours; `skip_de` drops one DE hour.
  fs::path write_traces(std::size_t hours, int skip_de = -1) const {
    const auto ci = dir / "ci";
    fs::create_directories(ci);
    for (const char* zone : {"ES", "NL", "DE"}) {
      std::ofstream out(ci / (std::string(zone) + ".csv"));
      out << "timestamp,zone,carbon_intensity_gco2_per_kwh\n";
      for (std::size_t h = 0; h < hours; ++h) {
        if (std::string(zone) == "DE" && static_cast<int>(h) == skip_de) continue;
        out << maizx::format_timestamp(maizx::testing::t2022() + maizx::kHour * static_cast<long>(h)) << ',' << zone
            << ',' << 100 + 7 * h << '\n';
      }
    }
    return ci;
  }

  fs::path dir;
};

TEST_F(CliTest, SimulateWritesReportAndCsvs) {
  const auto r = run("simulate " + inputs() + " --horizon 48 --out '" + (dir / "out/r.json").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"r.json", "hourly_cf.csv", "hourly_cf_by_scenario.csv", "summary.csv"})
    EXPECT_TRUE(fs::exists(dir / "out" / name)) << name;
  const auto report = nlohmann::json::parse(slurp(dir / "out/r.json"));
  EXPECT_EQ(report["scenarios"].size(), 4u);
  EXPECT_EQ(report["metadata"]["horizon_hours"], 48);
  EXPECT_NE(r.out.find("c,TOTAL,"), std::string::npos);
}

TEST_F(CliTest, OutputsAreDeterministic) {
  const auto a = run("simulate " + inputs() + " --horizon 72 --out '" + (dir / "a/r.json").string() + "'");
  const auto b = run("simulate " + inputs() + " --horizon 72 --out '" + (dir / "b/r.json").string() + "'");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(dir / "a/r.json"), slurp(dir / "b/r.json"));
  EXPECT_EQ(slurp(dir / "a/hourly_cf.csv"), slurp(dir / "b/hourly_cf.csv"));
}

TEST_F(CliTest, FlagsChangeDigest) {
  ASSERT_EQ(run("simulate " + inputs() + " --horizon 24 --out '" + (dir / "a/r.json").string() + "'").code, 0);
  ASSERT_EQ(run("simulate " + inputs() + " --horizon 24 --weights 1,0,0,0 --out '" + (dir / "b/r.json").string() + "'")
                .code,
            0);
  const auto a = nlohmann::json::parse(slurp(dir / "a/r.json"));
  const auto b = nlohmann::json::parse(slurp(dir / "b/r.json"));
  EXPECT_NE(a["metadata"]["config_digest"], b["metadata"]["config_digest"]);
}

TEST_F(CliTest, MissingConfigIsUsageError) {
  const auto r = run(std::string("simulate --ci-dir '") + MAIZX_DATA_DIR + "/traces' --out x.json");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--config"), std::string::npos) << r.err;
}

TEST_F(CliTest, ConfigFromEnvironment) {
  const auto r = run(std::string("validate --ci-dir '") + MAIZX_DATA_DIR + "/traces'",
                     std::string("env MAIZX_CONFIG='") + MAIZX_DATA_DIR + "/cluster.json'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("nodes,3"), std::string::npos);
  EXPECT_NE(r.out.find("horizon_hours,8760"), std::string::npos);
}

TEST_F(CliTest, GapInTraceNamesFileZoneAndHour) {
  const auto ci = write_traces(48, 5);
  const auto r = run(std::string("simulate --config '") + MAIZX_DATA_DIR + "/cluster.json' --ci-dir '" + ci.string() +
                     "' --horizon 48 --out '" + (dir / "r.json").string() + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("GapError"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("DE.csv"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("DE"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("2022-01-01T05:00:00Z"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  EXPECT_FALSE(fs::exists(dir / "r.json"));

  const auto filled = run(std::string("simulate --config '") + MAIZX_DATA_DIR + "/cluster.json' --ci-dir '" +
                          ci.string() + "' --horizon 48 --gap-fill linear --out '" + (dir / "r.json").string() + "'");
  EXPECT_EQ(filled.code, 0) << filled.err;
}

TEST_F(CliTest, ShortTraceIsHorizonMismatch) {
  const auto ci = write_traces(24);
  const auto r = run(std::string("validate --config '") + MAIZX_DATA_DIR + "/cluster.json' --ci-dir '" + ci.string() +
                     "' --horizon 48");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("HorizonMismatch"), std::string::npos) << r.err;
}

TEST_F(CliTest, RankAndForecast) {
  const auto rank = run("rank " + inputs() + " --horizon 48 --hour 30 --power-dir '" + MAIZX_DATA_DIR + "/power'");
  EXPECT_NE(rank.code, 0);  // the bundled power traces only cover two hours
  EXPECT_NE(rank.err.find("HorizonMismatch"), std::string::npos) << rank.err;

  const auto measured = run("rank " + inputs() + " --horizon 48 --hour 1 --power-dir '" + MAIZX_DATA_DIR + "/power'");
  ASSERT_EQ(measured.code, 0) << measured.err;
  EXPECT_EQ(std::count(measured.out.begin(), measured.out.end(), '\n'), 4);

  const auto plain = run("rank " + inputs() + " --horizon 48");
  ASSERT_EQ(plain.code, 0) << plain.err;
  EXPECT_EQ(plain.out.rfind("rank,node_id,", 0), 0u);

  const auto fc = run("forecast " + inputs() + " --zone ES --hour 47 --forecast-horizon 6");
  ASSERT_EQ(fc.code, 0) << fc.err;
  EXPECT_EQ(std::count(fc.out.begin(), fc.out.end(), '\n'), 7);
  EXPECT_NE(fc.out.find("2022-01-03T00:00:00Z,ES,"), std::string::npos) << fc.out;
}

TEST_F(CliTest, ReportProjection) {
  ASSERT_EQ(run("simulate " + inputs() + " --horizon 48 --out '" + (dir / "r.json").string() + "'").code, 0);
  const auto r = run("report --report '" + (dir / "r.json").string() +
                     "' --annual-per-unit-kg 713.5 --eur-per-kg climate=0.116");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["projection"]["units_required"], 27686054u);
  EXPECT_EQ(j["projection"]["units_required_over_years"], 2768605u);
}

TEST_F(CliTest, HelpListsFlags) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> expected{
      {"validate", {"--config", "--ci-dir", "--power-dir"}},
      {"rank", {"--weights", "--at", "--forecast-method"}},
      {"forecast", {"--zone", "--forecast-horizon"}},
      {"simulate", {"--scenario", "--out", "--epoch-hours", "--cfp-window"}},
      {"report", {"--report", "--target-kg", "--eur-per-kg"}},
  };
  for (const auto& [cmd, flags] : expected) {
    const auto r = run(cmd + " --help");
    EXPECT_EQ(r.code, 0) << cmd;
    for (const auto& flag : flags) EXPECT_NE(r.out.find(flag), std::string::npos) << cmd << ' ' << flag;
  }
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("simulate --bogus").code, 2);
}

}  // namespace
