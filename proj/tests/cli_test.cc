// Copyright 2026 The pipedebug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.h"
#include "pipedebug/fixtures.h"
#include "pipedebug/json_io.h"
#include "pipedebug/provenance.h"
#include "testing/testing.h"

namespace pipedebug {
namespace {

using nlohmann::json;

const std::string kChild = FIXTURE_PIPELINE;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pipedebug");
  std::ostringstream out, err;
  const int code = cli::Main(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(Cli({"fixture", "classifier", "--universe-out", universe().string(),
                   "--provenance-out", seeds().string()})
                  .code,
              0);
  }
  std::filesystem::path universe() const { return dir / "universe.json"; }
  std::filesystem::path seeds() const { return dir / "seeds.jsonl"; }
  std::filesystem::path Copy(const std::string& name) const {
    std::filesystem::copy_file(seeds(), dir / name);
    return dir / name;
  }

  testing::TempDir dir;
};

TEST_F(CliTest, HelpDocumentsTheChildProtocol) {
  const Result r = Cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Child process protocol"), std::string::npos);
  EXPECT_EQ(Cli({}).code, cli::kExitMalformedInput);
}

TEST_F(CliTest, FixtureWritesUniverseAndSeeds) {
  const Universe u = ReadUniverseFile(universe());
  EXPECT_EQ(u, ClassifierFixture().universe);
  const LoadedProvenance loaded = LoadProvenance(seeds(), &u);
  EXPECT_EQ(loaded.store->size(), 3u);
}

TEST_F(CliTest, DebugWithTheBuiltInFixture) {
  const auto log = Copy("log.jsonl");
  const auto report = dir / "report.json";
  const Result r = Cli({"debug", "--universe", universe().string(), "--provenance",
                        log.string(), "--fixture", "classifier", "--mode", "find-one",
                        "--threshold", "0.6", "--out", report.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = ReadJsonFile(report);
  EXPECT_EQ(j["status"], "causes_found");
  EXPECT_EQ(j["explanation"],
            json::parse(R"([[{"property":"Library Version","comparator":"=","value":2.0}]])"));
  EXPECT_EQ(j["explanation_status"][0], "definitive_exhaustive");
  EXPECT_LE(j["runs_used"].get<int>(), 9);
  const Universe u = ReadUniverseFile(universe());
  EXPECT_EQ(LoadProvenance(log, &u).store->size(), 3u + j["runs_used"].get<std::size_t>());
}

TEST_F(CliTest, DebugWithAChildProcess) {
  const auto log = Copy("log.jsonl");
  const Result r = Cli({"debug", "--provenance", log.string(), "--cmd",
                        "'" + kChild + "' classifier", "--threshold", "0.6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["summary"], "Library Version = 2");
  EXPECT_EQ(j["refuted"][0][0]["value"], "Gradient Boosting");
}

TEST_F(CliTest, IdenticalInputsGiveIdenticalReports) {
  std::vector<std::string> reports;
  for (const char* name : {"a.jsonl", "b.jsonl"}) {
    const auto log = Copy(name);
    const Result r = Cli({"debug", "--universe", universe().string(), "--provenance",
                          log.string(), "--cmd", "'" + kChild + "' classifier",
                          "--threshold", "0.6", "--mode", "find-all", "--seed", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
    reports.push_back(r.out);
  }
  EXPECT_EQ(reports[0], reports[1]);
}

TEST_F(CliTest, ReplayNeverExecutes) {
  const Universe u = ClassifierFixture().universe;
  const auto table2 = dir / "table2.jsonl";
  {
    ProvenanceStore store(u);
    store.AttachLog(table2);
    store.Append(testing::Table2(u));
  }
  const Result partial = Cli({"replay", "--provenance", table2.string()});
  EXPECT_EQ(partial.code, 2) << partial.err;
  const json pj = json::parse(partial.out);
  EXPECT_EQ(pj["status"], "budget_exhausted");
  EXPECT_TRUE(pj["causes"].empty());
  EXPECT_EQ(pj["runs_used"], 0);
  EXPECT_TRUE(pj["probes"].empty());

  const auto full = Copy("full.jsonl");
  ASSERT_EQ(Cli({"debug", "--provenance", full.string(), "--fixture", "classifier"}).code, 0);
  const Result replay = Cli({"replay", "--provenance", full.string()});
  EXPECT_EQ(replay.code, 0) << replay.err;
  EXPECT_EQ(json::parse(replay.out)["summary"], "Library Version = 2");
  EXPECT_EQ(Cli({"replay", "--provenance", (dir / "nope.jsonl").string()}).code,
            cli::kExitMalformedInput);
}

TEST_F(CliTest, SimplifyFivePropertyPaths) {
  const Universe u = testing::FiveProperty(true);
  WriteTextFile(dir / "u5.json", UniverseToJson(u).dump());
  WriteTextFile(dir / "paths.json", ExplanationToJson(u, testing::FivePropertyPaths(u)).dump());
  const Result r = Cli({"simplify", "--in", (dir / "paths.json").string(), "--universe",
                        (dir / "u5.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  Explanation expected = testing::FivePropertyExpected(u);
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(ExplanationFromJson(u, json::parse(r.out)), expected);
}

TEST_F(CliTest, BenchAndMetrics) {
  const auto suite = dir / "suite.json";
  const Result bench = Cli({"bench", "--generate", "4", "--write-suite", suite.string(),
                            "--budgets", "5,unlimited", "--mode", "find-one"});
  ASSERT_EQ(bench.code, 0) << bench.err;
  EXPECT_EQ(bench.out.substr(0, bench.out.find('\n')), "budget,mode,precision,recall,f");
  EXPECT_NE(bench.out.find("unlimited,find-one,1.000000,1.000000,1.000000"),
            std::string::npos);

  WriteTextFile(dir / "answers.json", "[[],[],[],[]]");
  const Result metrics = Cli({"metrics", "--suite", suite.string(), "--answers",
                              (dir / "answers.json").string()});
  ASSERT_EQ(metrics.code, 0) << metrics.err;
  const json m = json::parse(metrics.out);
  EXPECT_EQ(m["precision"], 1.0);
  EXPECT_EQ(m["precision_by_convention"], true);
  EXPECT_EQ(m["recall_findone"], 0.0);

  WriteTextFile(dir / "short.json", "[[]]");
  EXPECT_EQ(Cli({"metrics", "--suite", suite.string(), "--answers",
                 (dir / "short.json").string()})
                .code,
            cli::kExitMalformedInput);
}

TEST_F(CliTest, ExitCodes) {
  WriteTextFile(dir / "bad.json", "{\"properties\": 3}");
  EXPECT_EQ(Cli({"debug", "--universe", (dir / "bad.json").string(), "--fixture",
                 "classifier"})
                .code,
            cli::kExitMalformedInput);
  EXPECT_EQ(Cli({"debug", "--universe", universe().string(), "--cmd",
                 "/nonexistent/pipeline", "--threshold", "0.5"})
                .code,
            cli::kExitExecutorUnavailable);
  EXPECT_EQ(Cli({"debug", "--universe", universe().string(), "--fixture", "classifier",
                 "--cmd", "true"})
                .code,
            cli::kExitMalformedInput);
  EXPECT_EQ(Cli({"debug", "--universe", universe().string(), "--fixture", "classifier",
                 "--mode", "all"})
                .code,
            cli::kExitMalformedInput);
  // A child that prints nothing fails every run.
  const Result silent = Cli({"debug", "--universe", universe().string(), "--cmd", "true",
                             "--threshold", "0.5"});
  EXPECT_EQ(silent.code, 0) << silent.err;
  EXPECT_EQ(json::parse(silent.out)["summary"], "TRUE");
  EXPECT_EQ(Cli({"debug", "--universe", universe().string(), "--fixture", "classifier",
                 "--threshold", "0"})
                .code,
            3);
  const auto log = Copy("budget.jsonl");
  EXPECT_EQ(Cli({"debug", "--provenance", log.string(), "--fixture", "classifier",
                 "--budget", "0"})
                .code,
            2);
}

}  // namespace
}  // namespace pipedebug
