#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef TARIFFSCHED_CLI_PATH
#define TARIFFSCHED_CLI_PATH "./tariffsched"
#endif

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& stdin_data = "") {
  std::string cmd = std::string(TARIFFSCHED_CLI_PATH) + " " + args + " 2>/dev/null";
  if (!stdin_data.empty()) {
    const std::string tmp = ::testing::TempDir() + "cli_stdin.json";
    std::ofstream(tmp) << stdin_data;
    cmd = "cat " + tmp + " | " + cmd;
  }
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_tmp(const std::string& name, const std::string& contents) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << contents;
  return path;
}

const char* kSmallInstance =
    R"({"machines":1,"jobs":[{"id":1,"p":1,"w":"1"},{"id":2,"p":1,"w":"1"}],)"
    R"("tariff":[{"start":0,"end":2,"cost":"5"},{"start":2,"end":4,"cost":"0"}]})";

}  // namespace

TEST(Cli, SolveExactSumcj) {
  const auto path = write_tmp("inst1.json", kSmallInstance);
  const auto r = run_cli("solve --objective sumcj --method exact --input " + path);
  EXPECT_EQ(r.exit_code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["total_cost"], "7");
  EXPECT_EQ(doc["objective"], "sumcj");
}

TEST(Cli, SolveReadsStdin) {
  const auto r = run_cli("solve --objective sumcj --method exact --input -", kSmallInstance);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["total_cost"], "7");
}

TEST(Cli, PtasWithoutEpsilonIsUsageError) {
  const auto path = write_tmp("inst2.json", kSmallInstance);
  const auto r = run_cli("solve --objective wsumcj --method ptas --input " + path);
  EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, SeqDpHonorsSequence) {
  const auto path = write_tmp("inst3.json", kSmallInstance);
  const auto r =
      run_cli("solve --objective wsumcj --method seq-dp --sequence 2,1 --input " + path);
  EXPECT_EQ(r.exit_code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  // Order (2,1): job 2 completes first.
  EXPECT_EQ(doc["completion_times"]["2"], "3");
  EXPECT_EQ(doc["completion_times"]["1"], "4");
}

TEST(Cli, UnknownCombinationRejected) {
  const auto path = write_tmp("inst4.json", kSmallInstance);
  const auto r = run_cli("solve --objective sumcj --method ptas --epsilon 0.5 --input " + path);
  EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, InfeasibleInstanceExitsTwo) {
  const auto path = write_tmp(
      "inst5.json",
      R"({"machines":1,"jobs":[{"id":1,"p":9,"w":1}],"tariff":[{"start":0,"end":2,"cost":0}]})");
  const auto r = run_cli("solve --objective sumcj --method exact --input " + path);
  EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, MalformedJsonExitsOne) {
  const auto path = write_tmp("inst6.json", "{not json");
  const auto r = run_cli("solve --objective sumcj --method exact --input " + path);
  EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, OracleReportsExactRatioOne) {
  const auto path = write_tmp("inst7.json", kSmallInstance);
  const auto r = run_cli("oracle --objective sumcj --method exact --input " + path);
  EXPECT_EQ(r.exit_code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["objective_value"], "7");
  EXPECT_EQ(doc["oracle_value"], "7");
  EXPECT_EQ(doc["ratio"], "1");
  EXPECT_TRUE(doc.contains("instance_digest"));
  EXPECT_TRUE(doc.contains("wall_time_ms"));
}

TEST(Cli, OraclePtasRatioWithinBound) {
  const auto path = write_tmp("inst8.json", kSmallInstance);
  const auto r =
      run_cli("oracle --objective wsumcj --method ptas --epsilon 0.2 --input " + path);
  EXPECT_EQ(r.exit_code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  auto parse_ratio = [](const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  };
  const double ratio = parse_ratio(doc["ratio"].get<std::string>());
  EXPECT_GE(ratio, 1.0);
  EXPECT_LE(ratio, 2.0);  // 1 + 5 * 0.2
}

TEST(Cli, OracleBudgetExceededExitsThree) {
  const auto path = write_tmp("inst9.json", kSmallInstance);
  const auto r =
      run_cli("oracle --objective sumcj --method exact --budget 2 --input " + path);
  EXPECT_EQ(r.exit_code, 3);
}

TEST(Cli, BudgetEnvVariableOverrides) {
  const auto path = write_tmp("inst10.json", kSmallInstance);
  std::string cmd = std::string("TARIFFSCHED_BUDGET=2 ") + TARIFFSCHED_CLI_PATH +
                    " oracle --objective sumcj --method exact --input " + path +
                    " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::array<char, 256> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) {
  }
  EXPECT_EQ(WEXITSTATUS(pclose(pipe)), 3);
}

TEST(Cli, OracleReportAppendsJsonLines) {
  const auto path = write_tmp("inst11.json", kSmallInstance);
  const std::string report = ::testing::TempDir() + "report.jsonl";
  std::remove(report.c_str());
  for (int i = 0; i < 2; ++i) {
    const auto r = run_cli("oracle --objective sumcj --method exact --input " + path +
                           " --report " + report);
    EXPECT_EQ(r.exit_code, 0);
  }
  std::ifstream in(report);
  std::string line;
  int lines = 0;
  while (std::getline(in, line))
    if (!line.empty()) {
      EXPECT_NO_THROW(nlohmann::json::parse(line));
      ++lines;
    }
  EXPECT_EQ(lines, 2);
}

TEST(Cli, GenIsDeterministic) {
  const auto a = run_cli("gen --n 4 --k 3 --seed 7 --weighted 1");
  const auto b = run_cli("gen --n 4 --k 3 --seed 7 --weighted 1");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto c = run_cli("gen --n 4 --k 3 --seed 8 --weighted 1");
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, GenShapeMatchesFlags) {
  const auto r = run_cli("gen --n 4 --k 3 --seed 1");
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["jobs"].size(), 4u);
  EXPECT_EQ(doc["tariff"].size(), 3u);
}

TEST(Cli, GenOutputValidatesAndSolves) {
  const auto gen = run_cli("gen --n 3 --k 2 --seed 11 --weighted 1");
  const auto path = write_tmp("gen1.json", gen.out);
  const auto r = run_cli("solve --objective makespan --method exact --input " + path);
  EXPECT_EQ(r.exit_code, 0);
}

TEST(Cli, GenContradictoryBoundsRejected) {
  const auto r = run_cli("gen --n 2 --k 5 --dmax 3 --seed 1");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, SolveIsDeterministic) {
  const auto path = write_tmp("inst12.json", kSmallInstance);
  const auto a = run_cli("solve --objective wsumcj --method ptas --epsilon 0.5 --input " + path);
  const auto b = run_cli("solve --objective wsumcj --method ptas --epsilon 0.5 --input " + path);
  EXPECT_EQ(a.out, b.out);
}
