#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output.
RunResult run(const std::string& args) {
  const std::string cmd = std::string(AUCTAG_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    r.code = -1;
    return r;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("auctag_cli_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

void expect_error_line(const RunResult& r, const std::string& kind) {
  EXPECT_NE(r.code, 0);
  std::istringstream lines(r.out);
  std::string first;
  std::getline(lines, first);
  const auto j = nlohmann::json::parse(first);
  EXPECT_EQ(j.at("error"), kind);
  EXPECT_TRUE(j.at("message").is_string());
  std::string rest;
  EXPECT_FALSE(std::getline(lines, rest)) << "error output must be one line";
}

}  // namespace

TEST_F(Cli, NoSubcommandIsUsageError) { expect_error_line(run(""), "usage"); }

TEST_F(Cli, HelpExitsZero) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep-lowres"), std::string::npos);
}

TEST_F(Cli, SynthTrainEvaluate) {
  const auto corpus = path("c.jsonl");
  ASSERT_EQ(run("synth --sessions 8 --sentences 30 --classes 4 --seed 3 --out " + corpus +
                " --labels-out " + path("labels.json"))
                .code,
            0);
  const auto model = path("m.json");
  const auto tr = run("train --data " + corpus + " --labels " + path("labels.json") +
                      " --method comauc --dim 256 --hidden 8 --epochs 3 --out " + model);
  ASSERT_EQ(tr.code, 0) << tr.out;
  EXPECT_TRUE(fs::exists(model + ".history.json"));
  const auto history = nlohmann::json::parse(slurp(model + ".history.json"));
  ASSERT_EQ(history.size(), 3u);
  EXPECT_EQ(history[0].at("regime"), "CE");
  EXPECT_EQ(history[1].at("regime"), "AUC");

  const auto ev = run("evaluate --model " + model + " --data " + corpus + " --out " +
                      path("eval.json"));
  ASSERT_EQ(ev.code, 0) << ev.out;
  const auto report = nlohmann::json::parse(slurp(path("eval.json")));
  EXPECT_EQ(report.at("labels").size(), 4u);
  EXPECT_EQ(report.at("confusion").size(), 4u);
}

TEST_F(Cli, SynthIsDeterministic) {
  ASSERT_EQ(run("synth --sessions 3 --sentences 10 --seed 9 --out " + path("a.jsonl")).code, 0);
  ASSERT_EQ(run("synth --sessions 3 --sentences 10 --seed 9 --out " + path("b.jsonl")).code, 0);
  EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("b.jsonl")));
}

TEST_F(Cli, SweepAndReport) {
  std::ofstream(path("cfg.json")) << R"({
    "data": {"synth": {"n_sessions": 10, "sentences_per_session": 40, "num_classes": 3, "seed": 4}},
    "scenario": {"kind": "low_resource", "sizes": [20, 40], "partitions_per_condition": 2},
    "train": {"max_epochs": 2},
    "hidden_dim": 4,
    "features": {"dim": 256},
    "master_seed": 5,
    "output_dir": "run"
  })";
  const auto r = run("sweep-lowres --config " + path("cfg.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const fs::path out = dir_ / "run";
  for (const char* f : {"trials.csv", "summary.json", "plotdata.json", "sweep.json",
                        "config.resolved.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const std::string csv = slurp(out / "trials.csv");
  const auto again = run("report --sweep " + (out / "sweep.json").string() + " --out " +
                         path("rep"));
  ASSERT_EQ(again.code, 0) << again.out;
  EXPECT_EQ(slurp(dir_ / "rep" / "trials.csv"), csv);
  EXPECT_EQ(slurp(dir_ / "rep" / "summary.json"), slurp(out / "summary.json"));
}

TEST_F(Cli, WrongSweepKindIsRejected) {
  std::ofstream(path("cfg.json")) << R"({
    "data": {"synth": {"n_sessions": 4, "sentences_per_session": 10}},
    "scenario": {"kind": "low_resource"}
  })";
  expect_error_line(run("sweep-imbalance --config " + path("cfg.json")), "invalid_argument");
}

TEST_F(Cli, ErrorsAreSingleJsonLines) {
  expect_error_line(run("evaluate --model " + path("missing.json") + " --data x"), "io");
  expect_error_line(run("train --data x --out y --method bogus"), "usage");
  std::ofstream(path("bad.jsonl")) << "{not json}\n";
  expect_error_line(run("train --data " + path("bad.jsonl") + " --out " + path("m.json")),
                    "parse");
  std::ofstream(path("cfg.json")) << "[1, 2";
  expect_error_line(run("sweep-lowres --config " + path("cfg.json")), "parse");
}
