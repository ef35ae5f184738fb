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


#include <stdlib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>

#include <gtest/gtest.h>

#include "pipedebug/executor.h"
#include "pipedebug/fixtures.h"
#include "testing/testing.h"

namespace pipedebug {
namespace {

using testing::Classifier;

const std::string kChild = FIXTURE_PIPELINE;

SubprocessExecutor Child(const Universe& u, const std::string& args,
                         std::size_t workers = 1,
                         std::chrono::milliseconds timeout = std::chrono::seconds(30),
                         std::vector<std::string> env = {}) {
  ExecutorConfig config;
  config.command = "'" + kChild + "' " + args;
  config.workers = workers;
  config.timeout = timeout;
  config.env_passthrough = std::move(env);
  return SubprocessExecutor(u, config, "score");
}

TEST(EvaluationTest, ThresholdAndDirection) {
  const EvaluationSpec ge{"score", 0.6, Direction::kGe};
  EXPECT_EQ(ge.Evaluate(0.9), Outcome::kSucceed);
  EXPECT_EQ(ge.Evaluate(0.6), Outcome::kSucceed);
  EXPECT_EQ(ge.Evaluate(0.2), Outcome::kFail);
  EXPECT_EQ(ge.Evaluate(std::nullopt), Outcome::kFail);
  const EvaluationSpec le{"loss", 0.5, Direction::kLe};
  EXPECT_EQ(le.Evaluate(0.4), Outcome::kSucceed);
  EXPECT_EQ(le.Evaluate(0.7), Outcome::kFail);
  EXPECT_EQ(ParseDirection("le"), Direction::kLe);
  EXPECT_ANY_THROW(ParseDirection("gt"));
}

TEST(ParseChildOutputTest, AcceptsOneObjectWithANumericMetric) {
  EXPECT_EQ(ParseChildOutput("{\"score\":0.9}\n", "score").score, 0.9);
  EXPECT_FALSE(ParseChildOutput("{\"score\":0.9}\n", "score").failure);
  EXPECT_EQ(ParseChildOutput("{\"acc\":1,\"loss\":2}", "loss").score, 2.0);
  for (const char* bad : {"", "score: 1", "[1]", "{\"score\":\"high\"}",
                          "{\"other\":1}", "{\"score\":1}{\"score\":2}"}) {
    const RunResult r = ParseChildOutput(bad, "score");
    EXPECT_EQ(r.failure, FailureKind::kBadOutput) << bad;
    EXPECT_FALSE(r.score) << bad;
  }
}

TEST(SubprocessExecutorTest, ScoresClassifierRows) {
  const Universe u = ClassifierFixture().universe;
  auto exec = Child(u, "classifier");
  const RunResult ok = exec.Run(Classifier(u, "Iris", "Logistic Regression", 1.0));
  EXPECT_EQ(ok.score, 0.9);
  const RunResult bad = exec.Run(Classifier(u, "Iris", "Gradient Boosting", 2.0));
  EXPECT_EQ(bad.score, 0.2);
  const EvaluationSpec eval{"score", 0.6, Direction::kGe};
  EXPECT_EQ(eval.Evaluate(ok.score), Outcome::kSucceed);
  EXPECT_EQ(eval.Evaluate(bad.score), Outcome::kFail);
}

TEST(SubprocessExecutorTest, CrashIsRecordedAsFail) {
  const Universe u = ClassifierFixture().universe;
  auto exec = Child(u, "crash");
  Budget budget;
  const std::vector<Configuration> configs = {Classifier(u, "Iris", "Decision Tree", 1.0)};
  const auto runs = RunBatch(exec, configs, {"score", 0.6, Direction::kGe}, budget);
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].failure, FailureKind::kCrash);
  EXPECT_FALSE(runs[0].score);
  EXPECT_EQ(runs[0].outcome, Outcome::kFail);
}

TEST(SubprocessExecutorTest, GarbageAndMissingMetricAreBadOutput) {
  const Universe u = ClassifierFixture().universe;
  const Configuration c = Classifier(u, "Iris", "Decision Tree", 1.0);
  EXPECT_EQ(Child(u, "garbage").Run(c).failure, FailureKind::kBadOutput);
  EXPECT_EQ(Child(u, "missing-metric").Run(c).failure, FailureKind::kBadOutput);
}

TEST(SubprocessExecutorTest, TimeoutKillsTheChild) {
  const Universe u = ClassifierFixture().universe;
  auto exec = Child(u, "sleep 30", 1, std::chrono::milliseconds(300));
  const auto start = std::chrono::steady_clock::now();
  const RunResult r = exec.Run(Classifier(u, "Iris", "Decision Tree", 1.0));
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(r.failure, FailureKind::kTimeout);
  EXPECT_FALSE(r.score);
  EXPECT_LT(elapsed, std::chrono::seconds(10));
}

TEST(SubprocessExecutorTest, UnavailableCommandAbortsTheBatch) {
  const Universe u = ClassifierFixture().universe;
  ExecutorConfig config;
  config.command = "/nonexistent/pipeline --flag";
  SubprocessExecutor exec(u, config, "score");
  Budget budget;
  const std::vector<Configuration> configs = {Classifier(u, "Iris", "Decision Tree", 1.0)};
  EXPECT_THROW(RunBatch(exec, configs, {}, budget), ExecutorError);
}

TEST(SubprocessExecutorTest, OnlyListedVariablesReachTheChild) {
  ::setenv("PIPEDEBUG_TEST_SECRET", "1", 1);
  const Universe u = ClassifierFixture().universe;
  const Configuration c = Classifier(u, "Iris", "Decision Tree", 1.0);
  EXPECT_EQ(Child(u, "env PIPEDEBUG_TEST_SECRET").Run(c).score, 0.0);
  EXPECT_EQ(Child(u, "env PIPEDEBUG_TEST_SECRET", 1, std::chrono::seconds(30),
                  {"PIPEDEBUG_TEST_SECRET"})
                .Run(c)
                .score,
            1.0);
  EXPECT_EQ(Child(u, "env PATH").Run(c).score, 1.0);
}

TEST(RunBatchTest, NeverMoreLiveChildrenThanWorkers) {
  const Universe u = ClassifierFixture().universe;
  testing::TempDir dir;
  auto exec = Child(u, "live '" + dir.path().string() + "'", 5);
  const auto all = testing::AllConfigurations(u);
  const std::vector<Configuration> configs(all.begin(), all.begin() + 7);
  Budget budget;
  budget.max_runs = 10;
  const auto runs = RunBatch(exec, configs, {"score", 0.5, Direction::kGe}, budget);
  EXPECT_EQ(budget.spent, 7u);
  ASSERT_EQ(runs.size(), 7u);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    EXPECT_EQ(runs[i].config, configs[i]);
    EXPECT_EQ(runs[i].outcome, Outcome::kSucceed);
  }
  std::ifstream counts(dir / "counts");
  std::size_t n = 0, max_live = 0, lines = 0;
  while (counts >> n) {
    max_live = std::max(max_live, n);
    ++lines;
  }
  EXPECT_EQ(lines, 7u);
  EXPECT_LE(max_live, 5u);
  EXPECT_GE(max_live, 2u);
}

TEST(RunBatchTest, ConcurrencyIsBoundedInProcess) {
  std::atomic<int> live{0}, peak{0}, calls{0};
  FunctionExecutor exec(
      [&](const Configuration&) {
        const int now = ++live;
        int seen = peak.load();
        while (now > seen && !peak.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        --live;
        ++calls;
        RunResult r;
        r.score = 1;
        return r;
      },
      5);
  const Universe u = ClassifierFixture().universe;
  const auto all = testing::AllConfigurations(u);
  Budget budget;
  const auto runs = RunBatch(exec, all, {}, budget);
  EXPECT_EQ(runs.size(), all.size());
  EXPECT_EQ(calls.load(), 12);
  EXPECT_EQ(budget.spent, 12u);
  EXPECT_LE(peak.load(), 5);
}

TEST(RunBatchTest, VersionProbesBothFail) {
  const Fixture f = ClassifierFixture();
  const Universe& u = f.universe;
  auto exec = Child(u, "classifier", 5);
  const std::vector<Configuration> configs = {
      Classifier(u, "Digits", "Logistic Regression", 2.0),
      Classifier(u, "Iris", "Decision Tree", 2.0)};
  Budget budget;
  const auto runs = RunBatch(exec, configs, f.eval, budget);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].outcome, Outcome::kFail);
  EXPECT_EQ(runs[0].score, 0.3);
  EXPECT_EQ(runs[1].outcome, Outcome::kFail);
  EXPECT_EQ(runs[1].score, 0.1);
}

TEST(RunBatchTest, EmptyBatchAndBudgetChecks) {
  FunctionExecutor exec([](const Configuration&) { return RunResult{1.0, {}, {}}; });
  Budget budget;
  budget.max_runs = 1;
  EXPECT_TRUE(RunBatch(exec, {}, {}, budget).empty());
  EXPECT_EQ(budget.spent, 0u);
  const Universe u = ClassifierFixture().universe;
  const auto all = testing::AllConfigurations(u);
  EXPECT_THROW(RunBatch(exec, std::span(all).first(2), {}, budget), std::logic_error);
  EXPECT_EQ(budget.spent, 0u);
  EXPECT_EQ(RunBatch(exec, std::span(all).first(1), {}, budget).size(), 1u);
  EXPECT_TRUE(budget.exhausted());
}

TEST(RunBatchTest, ExecutorErrorPropagates) {
  FunctionExecutor exec(
      [](const Configuration&) -> RunResult { throw ExecutorError("gone"); }, 3);
  const Universe u = ClassifierFixture().universe;
  const auto all = testing::AllConfigurations(u);
  Budget budget;
  EXPECT_THROW(RunBatch(exec, all, {}, budget), ExecutorError);
}

}  // namespace
}  // namespace pipedebug
