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


#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "pipedebug/box.h"
#include "pipedebug/fixtures.h"
#include "pipedebug/json_io.h"
#include "pipedebug/provenance.h"
#include "testing/testing.h"

namespace pipedebug {
namespace {

using testing::Classifier;
using testing::P;

class ProvenanceTest : public ::testing::Test {
 protected:
  Universe u = ClassifierFixture().universe;
};

TEST_F(ProvenanceTest, AppendCountsEveryRun) {
  ProvenanceStore store(u);
  store.Append(testing::Table1(u));
  EXPECT_EQ(store.size(), 3u);
  Instance dup = testing::Table1(u)[0];
  dup.run_id = "again";
  store.Append(dup);
  EXPECT_EQ(store.size(), 4u);
  EXPECT_EQ(store.Snapshot().size(), 3u);
}

TEST_F(ProvenanceTest, MissingScoreIsStoredAsFail) {
  ProvenanceStore store(u);
  Instance inst;
  inst.config = Classifier(u, "Iris", "Decision Tree", 1.0);
  inst.outcome = Outcome::kSucceed;
  inst.failure = FailureKind::kCrash;
  store.Append(inst);
  EXPECT_EQ(store.instances()[0].outcome, Outcome::kFail);
}

TEST_F(ProvenanceTest, RejectsConfigurationsOutsideTheUniverse) {
  ProvenanceStore store(u);
  Instance inst;
  inst.config = Configuration({0, 0});
  inst.score = 1;
  EXPECT_THROW(store.Append(inst), std::invalid_argument);
  inst.config = Configuration({0, 7, 0});
  EXPECT_THROW(store.Append(inst), std::invalid_argument);
  EXPECT_EQ(store.size(), 0u);
}

TEST_F(ProvenanceTest, QueryFiltersByConjunctionAndOutcome) {
  ProvenanceStore store(u);
  store.Append(testing::Table2(u));
  const auto gb_succeed = store.Query(
      Conjunction{P(u, "Estimator", "=", "Gradient Boosting")}, Outcome::kSucceed);
  ASSERT_EQ(gb_succeed.size(), 1u);
  EXPECT_EQ(gb_succeed[0].config, Classifier(u, "Digits", "Gradient Boosting", 1.0));
  EXPECT_EQ(gb_succeed[0].score, 0.7);

  ProvenanceStore table3(u);
  table3.Append(testing::Table3(u));
  EXPECT_TRUE(table3.Query(Conjunction{P(u, "Library Version", "=", 2.0)},
                           Outcome::kSucceed)
                  .empty());
  EXPECT_TRUE(table3.Query(Conjunction{P(u, "Dataset", "=", "Iris"),
                                       P(u, "Dataset", "=", "Digits")},
                           std::nullopt)
                  .empty());
}

TEST_F(ProvenanceTest, QueryOutcomesPartitionTheMatches) {
  ProvenanceStore store(u);
  store.Append(testing::Table3(u));
  for (const Conjunction& c :
       {Conjunction{}, Conjunction{P(u, "Dataset", "=", "Digits")},
        Conjunction{P(u, "Estimator", "!=", "Decision Tree")}}) {
    const auto all = store.Query(c, std::nullopt);
    const auto fail = store.Query(c, Outcome::kFail);
    const auto succeed = store.Query(c, Outcome::kSucceed);
    EXPECT_EQ(fail.size() + succeed.size(), all.size());
    std::set<std::string> ids;
    for (const auto& i : fail) ids.insert(i.run_id);
    for (const auto& i : succeed) ids.insert(i.run_id);
    EXPECT_EQ(ids.size(), all.size());
  }
}

TEST_F(ProvenanceTest, ObservedUniverseFromTables) {
  ProvenanceStore store(u);
  EXPECT_THROW(store.ObservedUniverse(), std::logic_error);
  store.Append(testing::Table1(u));
  const Universe observed = store.ObservedUniverse();
  EXPECT_EQ(observed, u);
  ProvenanceStore table3(u);
  table3.Append(testing::Table3(u));
  EXPECT_EQ(table3.ObservedUniverse(), observed);

  ProvenanceStore one(u);
  one.Append(testing::Table1(u)[0]);
  const Universe single = one.ObservedUniverse();
  for (PropertyIndex p = 0; p < single.size(); ++p) {
    EXPECT_EQ(single.value_count(p), 1u);
  }
}

TEST_F(ProvenanceTest, EvidenceKeepsFailForConflictingOutcomes) {
  std::vector<Instance> runs = testing::Table1(u);
  Instance flip = runs[0];
  flip.score = 0.1;
  flip.outcome = Outcome::kFail;
  runs.push_back(flip);
  const Evidence ev(runs);
  EXPECT_EQ(ev.size(), 3u);
  EXPECT_EQ(ev.OutcomeOf(runs[0].config), Outcome::kFail);
  ASSERT_EQ(ev.nondeterministic().size(), 1u);
  EXPECT_EQ(ev.nondeterministic()[0], runs[0].config);
}

TEST_F(ProvenanceTest, EvidenceDefinitiveness) {
  const Evidence t2(testing::Table2(u));
  EXPECT_FALSE(t2.IsDefinitive(
      Box(u, Conjunction{P(u, "Estimator", "=", "Gradient Boosting")})));
  const Evidence t3(testing::Table3(u));
  EXPECT_TRUE(t3.IsDefinitive(Box(u, Conjunction{P(u, "Library Version", "=", 2.0)})));
  EXPECT_FALSE(t3.IsDefinitive(Box(u)));
  EXPECT_EQ(t3.CountSatisfying(Box(u, Conjunction{P(u, "Library Version", "=", 2.0)})),
            4u);
}

TEST_F(ProvenanceTest, LogReplayReconstructsTheStore) {
  testing::TempDir dir;
  const auto log = dir / "runs.jsonl";
  ProvenanceStore store(u);
  store.AttachLog(log);
  store.Append(testing::Table3(u));
  Instance crash;
  crash.config = Classifier(u, "Iris", "Logistic Regression", 2.0);
  crash.failure = FailureKind::kTimeout;
  crash.run_id = "run-8";
  crash.origin = Origin::kProbe;
  store.Append(crash);

  const LoadedProvenance loaded = LoadProvenance(log, &u);
  EXPECT_TRUE(loaded.notes.empty());
  EXPECT_EQ(*loaded.store, store);
  EXPECT_EQ(loaded.store->Serialize(), store.Serialize());
  EXPECT_EQ(testing::ReadFile(log), store.Serialize());

  const LoadedProvenance inferred = LoadProvenance(log, nullptr);
  EXPECT_EQ(inferred.store->size(), 8u);
  EXPECT_EQ(inferred.store->universe(), u);
}

TEST_F(ProvenanceTest, LinesAreSelfContainedJson) {
  ProvenanceStore store(u);
  store.SetClock([] { return std::string("2026-01-01T00:00:00Z"); });
  store.Append(testing::Table1(u)[0]);
  const nlohmann::json line = nlohmann::json::parse(store.Serialize());
  EXPECT_EQ(line["run_id"], "row-1");
  EXPECT_EQ(line["score"], 0.9);
  EXPECT_EQ(line["outcome"], "succeed");
  EXPECT_EQ(line["origin"], "seed");
  EXPECT_EQ(line["ts"], "2026-01-01T00:00:00Z");
  EXPECT_EQ(line["config"]["Estimator"], "Logistic Regression");
  EXPECT_FALSE(line.contains("failure"));
}

TEST_F(ProvenanceTest, MalformedLineReportsItsNumber) {
  const std::string text =
      R"({"config":{"Dataset":"Iris","Estimator":"Logistic Regression","Library Version":1.0},"score":0.9,"outcome":"succeed"})"
      "\n\n{not json}\n";
  try {
    ParseProvenance(text, "log.jsonl", &u);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.file(), "log.jsonl");
  }
  EXPECT_THROW(ParseProvenance(R"({"config":{},"outcome":"maybe"})", "x", &u), FormatError);
  EXPECT_THROW(ParseProvenance("", "empty", nullptr), FormatError);
  EXPECT_NO_THROW(ParseProvenance("", "empty", &u));
}

TEST_F(ProvenanceTest, ValuesOutsideTheDeclaredUniverseAreMergedWithANote) {
  const std::string text =
      R"({"config":{"Dataset":"Wine","Estimator":"Logistic Regression","Library Version":1.0},"score":0.9,"outcome":"succeed"})";
  const LoadedProvenance loaded = ParseProvenance(text, "log", &u);
  ASSERT_EQ(loaded.notes.size(), 1u);
  EXPECT_NE(loaded.notes[0].find("Wine"), std::string::npos);
  EXPECT_EQ(loaded.store->universe().value_count(0), 3u);
}

TEST_F(ProvenanceTest, ConcurrentAppendsAreAllLogged) {
  testing::TempDir dir;
  const auto log = dir / "runs.jsonl";
  ProvenanceStore store(u);
  store.AttachLog(log);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 25; ++i) {
        Instance inst = testing::Table3(u)[static_cast<std::size_t>((t + i) % 7)];
        inst.run_id = std::to_string(t) + "-" + std::to_string(i);
        store.Append(inst);
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(store.size(), 100u);
  const LoadedProvenance loaded = LoadProvenance(log, &u);
  EXPECT_EQ(loaded.store->size(), 100u);
}

}  // namespace
}  // namespace pipedebug
