// Copyright 2026 The PSALM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace psalm::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class HelpSnapshot : public ::testing::TestWithParam<std::string> {};

TEST_P(HelpSnapshot, MatchesCommittedText) {
  const std::string sub = GetParam();
  std::vector<std::string> args;
  if (sub != "root") args.push_back(sub);
  args.push_back("--help");
  const auto r = invoke(args);
  EXPECT_EQ(r.code, kExitOk);
  const auto expected =
      read_file(std::filesystem::path(PSALM_SNAPSHOT_DIR) / ("help_" + sub + ".txt"));
  ASSERT_FALSE(expected.empty());
  EXPECT_EQ(r.out, expected);
}

INSTANTIATE_TEST_SUITE_P(Subcommands, HelpSnapshot,
                         ::testing::Values("root", "allocate", "select", "estimate", "experiment",
                                           "verify", "reproduce-cases", "list-subjects", "report"),
                         [](const auto& info) {
                           std::string name = info.param;
                           for (char& c : name) {
                             if (c == '-') c = '_';
                           }
                           return name;
                         });

TEST(CliTest, AllocateSineExample) {
  const auto r = invoke({"allocate", "--sizes", "90,90,180", "--n", "12", "--seed", "1"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "3,3,6\n");
}

TEST(CliTest, VerifyFirstProposition) {
  const auto r = invoke({"verify", "--prop", "1", "--instances", "10000", "--seed", "7"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "pass=10000 fail=0");
}

TEST(CliTest, ReproduceCases) {
  const auto r = invoke({"reproduce-cases", "--table", "prop4"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out,
            "case,p_st,p_mg,relation\n"
            "1,0.500,0.750,<\n"
            "2,1.000,1.000,=\n"
            "3,0.500,0.250,>\n");
  EXPECT_EQ(invoke({"verify", "--prop", "5"}).code, kExitOk);
}

TEST(CliTest, ListSubjects) {
  const auto r = invoke({"list-subjects"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("ges,3,6,4,5,"), std::string::npos);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({"allocate", "--sizes", "1,2", "--n", "3", "--seed", "1", "--bogus"}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"allocate", "--sizes", "1,2", "--n", "3"}).code, kExitUsage);
  EXPECT_EQ(invoke({"verify", "--prop", "1", "--instances", "5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"estimate", "--subject", "sin", "--strategy", "rs", "--level", "st", "--n",
                    "3", "--iterations", "5"})
                .code,
            kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
}

TEST(CliTest, DomainErrorsNameTheError) {
  const auto r = invoke({"allocate", "--sizes", "1,2", "--n", "1", "--seed", "1"});
  EXPECT_EQ(r.code, kExitDomainError);
  EXPECT_EQ(r.err.rfind("error: InsufficientBudgetError: ", 0), 0u);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  const auto unknown = invoke({"estimate", "--subject", "sin", "--mutant", "none", "--strategy",
                               "rs", "--level", "st", "--n", "3", "--iterations", "5", "--seed",
                               "1"});
  EXPECT_EQ(unknown.code, kExitDomainError);
  EXPECT_NE(unknown.err.find("UnknownMutantError"), std::string::npos);
}

TEST(CliTest, RandomizedCommandsAreDeterministic) {
  const std::vector<std::vector<std::string>> commands = {
      {"select", "--subject", "mor", "--strategy", "art", "--level", "st", "--n", "15", "--seed", "4"},
      {"select", "--subject", "sin", "--strategy", "mt-art", "--level", "mg", "--n", "9", "--seed", "4"},
      {"estimate", "--subject", "int", "--mutant", "top-rate", "--strategy", "psalm", "--level",
       "mg", "--n", "15", "--iterations", "200", "--seed", "9"},
      {"verify", "--prop", "3", "--instances", "50", "--seed", "2", "--jobs", "2"},
  };
  for (const auto& c : commands) {
    const auto a = invoke(c);
    const auto b = invoke(c);
    EXPECT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
}

TEST(CliTest, ExperimentAndReportAgree) {
  const auto dir = std::filesystem::temp_directory_path() / "psalm_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto config = dir / "config.json";
  std::ofstream(config) << R"({"master_seed": 1, "trials": 3, "iterations": 10,
      "subjects": [{"id": "sin", "scheme": "default"}]})";
  const auto run1 = invoke({"experiment", "--config", config.string(), "--seed", "5", "--out",
                            (dir / "a").string()});
  ASSERT_EQ(run1.code, kExitOk) << run1.err;
  const auto run2 = invoke({"experiment", "--config", config.string(), "--seed", "5", "--jobs",
                            "3", "--out", (dir / "b").string()});
  ASSERT_EQ(run2.code, kExitOk) << run2.err;
  for (const char* f : {"raw.csv", "summary.csv", "design.csv"}) {
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
  }
  const auto report = invoke({"report", "--raw", (dir / "a" / "raw.csv").string()});
  ASSERT_EQ(report.code, kExitOk) << report.err;
  EXPECT_EQ(report.out, read_file(dir / "a" / "summary.csv"));
  EXPECT_EQ(invoke({"report", "--raw", (dir / "missing.csv").string()}).code, kExitDomainError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace psalm::cli
