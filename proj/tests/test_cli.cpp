#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "json_schema.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("prepot_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(PREPOT_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static std::string data(const std::string& rel) { return std::string(PREPOT_DATA_DIR) + "/" + rel; }

  fs::path dir_;
};

std::string without_runtime(const std::string& json) {
  return std::regex_replace(json, std::regex("\"runtime_seconds\": [^\\n]*"), "");
}

TEST_F(Cli, ExitZeroAndSchemaValid) {
  const fs::path report = dir_ / "report.json";
  const Result r = run("verify " + data("catalog/maxwell_sol.scn") + " --count 32 --out " + report.string());
  EXPECT_EQ(r.code, 0) << r.err;
  std::ifstream schema_in(data("report.schema.json"));
  const nlohmann::json schema = nlohmann::json::parse(schema_in);
  const nlohmann::json doc = nlohmann::json::parse(slurp(report));
  const auto errors = prepot::testing::validate_schema(schema, doc);
  EXPECT_TRUE(errors.empty()) << (errors.empty() ? "" : errors.front());
  EXPECT_EQ(doc["count"], 32);
}

TEST_F(Cli, ExitOneNamesFailingCheck) {
  const Result r = run("verify " + data("negative/nonharmonic.scn"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("dalembert:u2"), std::string::npos) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["overall_pass"], false);
}

TEST_F(Cli, ExitTwoOnConfigurationErrors) {
  EXPECT_EQ(run("verify " + data("catalog/missing.scn")).code, 2);
  const fs::path bad = dir_ / "bad.scn";
  std::ofstream(bad) << "[scenario]\nname = bad\n[pairs]\np = u1, u9\n";
  const Result semantic = run("verify " + bad.string());
  EXPECT_EQ(semantic.code, 2);
  EXPECT_NE(semantic.err.find("u1"), std::string::npos) << semantic.err;
  const fs::path empty = dir_ / "empty.scn";
  std::ofstream(empty) << "";
  EXPECT_EQ(run("verify " + empty.string()).code, 2);
  EXPECT_EQ(run("verify " + data("catalog/maxwell_sol.scn") + " --format xml").code, 2);
  EXPECT_EQ(run("verify " + data("catalog/maxwell_sol.scn") + " --count 0").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("run-catalog no_such_scenario").code, 2);
}

TEST_F(Cli, ExitTwoOnUnwritableDestination) {
  const std::string dest = (dir_ / "no" / "such" / "dir" / "r.json").string();
  EXPECT_EQ(run("verify " + data("catalog/maxwell_sol.scn") + " --count 4 --out " + dest).code, 2);
}

TEST_F(Cli, ExitThreeOnAnomaly) {
  const Result r = run("verify " + data("negative/anomaly.scn") + " --count 8");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(nlohmann::json::parse(r.out)["anomaly"], true);
}

TEST_F(Cli, SeedDeterminismByteForByte) {
  const std::string args = "verify " + data("catalog/einstein_cylindrical.scn") + " --count 48 --seed 7";
  const Result a = run(args);
  const Result b = run(args + " --threads 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(without_runtime(a.out), without_runtime(b.out));
  EXPECT_NE(a.out.find("\"seed\": 7"), std::string::npos);
  const Result c = run("verify " + data("catalog/einstein_cylindrical.scn") + " --count 48 --seed 8");
  EXPECT_NE(without_runtime(a.out), without_runtime(c.out));
  const Result csv1 = run(args + " --format csv");
  const Result csv2 = run(args + " --format csv");
  EXPECT_EQ(csv1.out, csv2.out);
}

TEST_F(Cli, CatalogCommands) {
  const Result list = run("list-catalog");
  EXPECT_EQ(list.code, 0);
  for (const char* n : {"maxwell_sol", "rs_sol", "einstein_cartesian", "einstein_cartesian_alpha",
                        "einstein_cylindrical", "einstein_lightlike", "einstein_lightlike_cyl"}) {
    EXPECT_NE(list.out.find(n), std::string::npos) << n;
  }
  const Result one = run("run-catalog maxwell_sol --count 16 --out " + (dir_ / "reports").string());
  EXPECT_EQ(one.code, 0) << one.out << one.err;
  EXPECT_TRUE(fs::exists(dir_ / "reports" / "maxwell_sol.json"));
}

TEST_F(Cli, OracleCommand) {
  const Result r = run("oracle " + data("catalog/einstein_lightlike_cyl.scn") + " --points 3");
  EXPECT_EQ(r.code, 0) << r.err;
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["overall_pass"], true);
  EXPECT_EQ(doc["prepotentials"].size(), 4u);
}

}  // namespace
