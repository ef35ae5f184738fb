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


#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "pipedebug/box.h"
#include "pipedebug/fixtures.h"
#include "pipedebug/probegen.h"
#include "pipedebug/provenance.h"
#include "testing/testing.h"

namespace pipedebug {
namespace {

using testing::Classifier;
using testing::P;

bool Covers(const std::vector<Configuration>& rows, PropertyIndex p, ValueIndex v,
            PropertyIndex q, ValueIndex w) {
  return std::any_of(rows.begin(), rows.end(),
                     [&](const Configuration& c) { return c[p] == v && c[q] == w; });
}

bool AllPairsCovered(const Universe& u, const std::vector<Configuration>& rows) {
  for (PropertyIndex p = 0; p < u.size(); ++p) {
    for (PropertyIndex q = p + 1; q < u.size(); ++q) {
      for (ValueIndex v = 0; v < u.value_count(p); ++v) {
        for (ValueIndex w = 0; w < u.value_count(q); ++w) {
          if (!Covers(rows, p, v, q, w)) return false;
        }
      }
    }
  }
  return true;
}

Universe RandomUniverse(std::mt19937_64& rng) {
  std::vector<PropertySpec> specs;
  const std::size_t n = 2 + rng() % 4;
  for (std::size_t i = 0; i < n; ++i) {
    PropertySpec spec{"P" + std::to_string(i), PropertyKind::kCategorical, {}};
    const std::size_t k = 2 + rng() % 5;
    for (std::size_t v = 0; v < k; ++v) spec.values.emplace_back(static_cast<int>(v));
    specs.push_back(std::move(spec));
  }
  return Universe(specs);
}

TEST(InitialDesignTest, FullProductWhenAskedForEverything) {
  const Universe u = ClassifierFixture().universe;
  const Design d = InitialDesign(u, 12, DesignStrategy::kCovering, 1);
  EXPECT_EQ(std::set<Configuration>(d.configs.begin(), d.configs.end()).size(), 12u);
  EXPECT_TRUE(d.warning.empty());
  const Design more = InitialDesign(u, 20, DesignStrategy::kCovering, 1);
  EXPECT_EQ(more.configs.size(), 12u);
  EXPECT_FALSE(more.warning.empty());
}

TEST(InitialDesignTest, SixRowsCoverEveryPropertyValue) {
  const Universe u = ClassifierFixture().universe;
  const Design d = InitialDesign(u, 6, DesignStrategy::kCovering, 1);
  ASSERT_EQ(d.configs.size(), 6u);
  std::size_t covered = 0;
  for (PropertyIndex p = 0; p < u.size(); ++p) {
    for (ValueIndex v = 0; v < u.value_count(p); ++v) {
      covered += std::any_of(d.configs.begin(), d.configs.end(),
                             [&](const Configuration& c) { return c[p] == v; });
    }
  }
  EXPECT_EQ(covered, 7u);
  EXPECT_TRUE(AllPairsCovered(u, d.configs));
}

TEST(InitialDesignTest, SingleRowAndRandomStrategy) {
  const Universe u = ClassifierFixture().universe;
  EXPECT_EQ(InitialDesign(u, 1, DesignStrategy::kCovering, 1).configs.size(), 1u);
  const Design r = InitialDesign(u, 8, DesignStrategy::kRandom, 4);
  EXPECT_EQ(std::set<Configuration>(r.configs.begin(), r.configs.end()).size(), 8u);
  EXPECT_EQ(r.configs, InitialDesign(u, 8, DesignStrategy::kRandom, 4).configs);
}

TEST(InitialDesignTest, ExcludesStoredConfigurations) {
  const Universe u = ClassifierFixture().universe;
  const Evidence ev(testing::Table3(u));
  const Design d = InitialDesign(u, 12, DesignStrategy::kCovering, 2, &ev);
  EXPECT_EQ(d.configs.size(), 5u);
  for (const Configuration& c : d.configs) EXPECT_FALSE(ev.Contains(c));
}

TEST(PairwiseCoverTest, CoversAllPairsOnRandomUniverses) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Universe u = RandomUniverse(rng);
    const auto rows = PairwiseCover(u, trial);
    EXPECT_TRUE(AllPairsCovered(u, rows)) << "trial " << trial;
    EXPECT_EQ(std::set<Configuration>(rows.begin(), rows.end()).size(), rows.size());
    EXPECT_LE(rows.size(), u.product_size());
    EXPECT_EQ(rows, PairwiseCover(u, trial));
  }
}

TEST(PairwiseCoverTest, ExistingEvidenceCountsAsCovered) {
  const Universe u = ClassifierFixture().universe;
  const auto first = PairwiseCover(u, 3);
  std::vector<Instance> runs;
  for (const Configuration& c : first) {
    Instance i;
    i.config = c;
    i.score = 1;
    i.outcome = Outcome::kSucceed;
    runs.push_back(i);
  }
  const Evidence ev(runs);
  EXPECT_TRUE(PairwiseCover(u, 3, &ev).empty());
}

TEST(ProbesForSuspectTest, GradientBoostingProbes) {
  const Universe u = ClassifierFixture().universe;
  const Evidence ev(testing::Table1(u));
  const auto probes = ProbesForSuspect(
      Conjunction{P(u, "Estimator", "=", "Gradient Boosting")}, u, ev, 5, 0);
  EXPECT_EQ(probes.size(), 3u);
  auto has = [&](const Configuration& c) {
    return std::find(probes.begin(), probes.end(), c) != probes.end();
  };
  EXPECT_TRUE(has(Classifier(u, "Digits", "Gradient Boosting", 2.0)));
  EXPECT_TRUE(has(Classifier(u, "Digits", "Gradient Boosting", 1.0)));
  // The most recent success moved into the suspect comes first.
  EXPECT_EQ(probes[0], Classifier(u, "Digits", "Gradient Boosting", 1.0));
}

TEST(ProbesForSuspectTest, VersionProbes) {
  const Universe u = ClassifierFixture().universe;
  const Evidence ev(testing::Table2(u));
  const auto probes =
      ProbesForSuspect(Conjunction{P(u, "Library Version", "=", 2.0)}, u, ev, 5, 0);
  EXPECT_EQ(probes.size(), 4u);
  auto has = [&](const Configuration& c) {
    return std::find(probes.begin(), probes.end(), c) != probes.end();
  };
  EXPECT_TRUE(has(Classifier(u, "Digits", "Logistic Regression", 2.0)));
  EXPECT_TRUE(has(Classifier(u, "Iris", "Decision Tree", 2.0)));
}

TEST(ProbesForSuspectTest, NothingLeftToTest) {
  const Universe u = ClassifierFixture().universe;
  const Evidence ev(testing::Table1(u));
  const auto probes = ProbesForSuspect(
      Conjunction{P(u, "Dataset", "=", "Iris"), P(u, "Estimator", "=", "Logistic Regression"),
                  P(u, "Library Version", "=", 1.0)},
      u, ev, 5, 0);
  EXPECT_TRUE(probes.empty());
}

TEST(ProbesForSuspectTest, BoundsStartNextToTheThreshold) {
  const Universe u({{"A", PropertyKind::kOrdered, {1, 2, 3, 4, 5, 6}},
                    {"B", PropertyKind::kCategorical, {"x", "y"}}});
  const Evidence ev;
  const auto le = ProbesForSuspect(Conjunction{P(u, "A", "<=", 4)}, u, ev, 1, 0);
  ASSERT_EQ(le.size(), 1u);
  EXPECT_EQ(u.values(0)[le[0][0]], Value(4));
  const auto gt = ProbesForSuspect(Conjunction{P(u, "A", ">", 2)}, u, ev, 1, 0);
  EXPECT_EQ(u.values(0)[gt[0][0]], Value(3));
}

TEST(ProbesForSuspectTest, PrefixExhaustiveAndSound) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Universe u = RandomUniverse(rng);
    const auto all = testing::AllConfigurations(u);
    std::vector<Instance> runs;
    for (int i = 0; i < 6; ++i) {
      Instance inst;
      inst.config = all[rng() % all.size()];
      inst.outcome = rng() % 2 ? Outcome::kFail : Outcome::kSucceed;
      inst.score = inst.outcome == Outcome::kFail ? 0.0 : 1.0;
      runs.push_back(inst);
    }
    const Evidence ev(runs);
    const PropertyIndex p = static_cast<PropertyIndex>(rng() % u.size());
    const Conjunction suspect{{p, Comparator::kNeq, 0}};
    const auto everything = ProbesForSuspect(suspect, u, ev, all.size() + 1, trial);
    std::size_t untested = 0;
    for (const Configuration& c : all) {
      untested += Satisfies(c, suspect) && !ev.Contains(c);
    }
    EXPECT_EQ(everything.size(), untested);
    EXPECT_EQ(std::set<Configuration>(everything.begin(), everything.end()).size(),
              everything.size());
    for (const Configuration& c : everything) {
      EXPECT_TRUE(Satisfies(c, suspect));
      EXPECT_FALSE(ev.Contains(c));
    }
    for (std::size_t k = 0; k <= everything.size(); ++k) {
      const auto prefix = ProbesForSuspect(suspect, u, ev, k, trial);
      ASSERT_EQ(prefix.size(), k);
      EXPECT_TRUE(std::equal(prefix.begin(), prefix.end(), everything.begin()));
    }
  }
}

TEST(ProbesForSuspectTest, AvoidedBoxesAreSkipped) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const Universe u = RandomUniverse(rng);
    const auto all = testing::AllConfigurations(u);
    std::vector<Instance> runs;
    for (int i = 0; i < 4; ++i) {
      Instance inst;
      inst.config = all[rng() % all.size()];
      inst.outcome = rng() % 2 ? Outcome::kFail : Outcome::kSucceed;
      inst.score = inst.outcome == Outcome::kFail ? 0.0 : 1.0;
      runs.push_back(inst);
    }
    const Evidence ev(runs);
    const PropertyIndex p = static_cast<PropertyIndex>(rng() % u.size());
    const PropertyIndex q = static_cast<PropertyIndex>(rng() % u.size());
    const Conjunction suspect{{p, Comparator::kNeq, 0}};
    const Box avoid[] = {Box(u, Conjunction{{q, Comparator::kEq, 1}})};
    const auto probes = ProbesForSuspect(suspect, u, ev, all.size() + 1, trial, avoid);
    std::size_t expected = 0;
    for (const Configuration& c : all) {
      expected += Satisfies(c, suspect) && !ev.Contains(c) && !avoid[0].Contains(c);
    }
    EXPECT_EQ(probes.size(), expected);
    for (const Configuration& c : probes) {
      EXPECT_TRUE(Satisfies(c, suspect));
      EXPECT_FALSE(avoid[0].Contains(c));
    }
  }
}

}  // namespace
}  // namespace pipedebug
