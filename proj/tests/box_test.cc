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
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "pipedebug/box.h"
#include "pipedebug/model.h"
#include "testing/testing.h"

namespace pipedebug {
namespace {

using testing::AllConfigurations;
using testing::NaiveHolds;
using testing::P;

Universe Small() {
  return Universe({
      {"A", PropertyKind::kCategorical, {"a", "b", "c", "d"}},
      {"B", PropertyKind::kOrdered, {1, 2, 3, 4, 5}},
      {"C", PropertyKind::kOrdered, {1, 2}},
  });
}

// Every predicate on property p.
std::vector<Predicate> PredicatesOn(const Universe& u, PropertyIndex p) {
  std::vector<Predicate> out;
  const bool ordered = u.property(p).kind == PropertyKind::kOrdered;
  for (ValueIndex v = 0; v < u.value_count(p); ++v) {
    out.push_back({p, Comparator::kEq, v});
    out.push_back({p, Comparator::kNeq, v});
    if (ordered) {
      out.push_back({p, Comparator::kLe, v});
      out.push_back({p, Comparator::kGt, v});
    }
  }
  return out;
}

ValueSet SetOf(const Universe& u, PropertyIndex p, const std::vector<Predicate>& preds) {
  ValueSet s(u.value_count(p), true);
  for (const Predicate& pred : preds) {
    ValueSet keep(u.value_count(p));
    for (ValueIndex v = 0; v < u.value_count(p); ++v) {
      Configuration c(std::vector<ValueIndex>(u.size(), 0));
      c.set(p, v);
      if (NaiveHolds(u, c, pred)) keep.insert(v);
    }
    s &= keep;
  }
  return s;
}

// Fewest predicates whose conjunction gives each nonempty set, up to `limit`.
std::map<ValueSet, std::size_t> MinimalCosts(const Universe& u, PropertyIndex p,
                                             std::size_t limit) {
  const std::vector<Predicate> all = PredicatesOn(u, p);
  std::map<ValueSet, std::size_t> best;
  std::vector<Predicate> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    const ValueSet s = SetOf(u, p, chosen);
    if (!s.empty()) {
      auto [it, inserted] = best.emplace(s, chosen.size());
      if (!inserted) it->second = std::min(it->second, chosen.size());
    }
    if (chosen.size() == limit) return;
    for (std::size_t i = start; i < all.size(); ++i) {
      chosen.push_back(all[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return best;
}

TEST(BoxTest, PredicateCostIsMinimal) {
  const Universe u = Small();
  for (PropertyIndex p = 0; p < u.size(); ++p) {
    const auto best = MinimalCosts(u, p, 4);
    for (const auto& [set, cost] : best) {
      EXPECT_EQ(PredicateCost(u, p, set), cost);
      std::vector<Predicate> preds;
      AppendPredicates(u, p, set, preds);
      EXPECT_EQ(preds.size(), cost);
      EXPECT_EQ(SetOf(u, p, preds), set);
    }
    // Every nonempty subset of at most five values costs at most four here.
    EXPECT_EQ(best.size(), (std::size_t{1} << u.value_count(p)) - 1);
  }
}

TEST(BoxTest, ShortestFormRoundTrips) {
  const Universe u = Small();
  const Conjunction c{P(u, "A", "!=", "a"), P(u, "A", "!=", "b"), P(u, "B", ">", 1),
                      P(u, "B", "<=", 4), P(u, "B", "!=", 3)};
  const Box box(u, c);
  EXPECT_EQ(box.count(), 2u * 2u * 2u);
  EXPECT_EQ(Box(u, box.ToConjunction(u)), box);
  EXPECT_EQ(box.Cost(u), box.ToConjunction(u).size());
  EXPECT_LE(box.Cost(u), c.size());
  for (const Configuration& config : AllConfigurations(u)) {
    EXPECT_EQ(box.Contains(config), NaiveHolds(u, config, c));
  }
}

TEST(BoxTest, EquivalenceModuloComparators) {
  const Universe u = Small();
  EXPECT_TRUE(EquivalentOver(u, Conjunction{P(u, "C", "=", 2)},
                             Conjunction{P(u, "C", ">", 1)}));
  EXPECT_TRUE(EquivalentOver(u, Conjunction{P(u, "B", "<=", 1)},
                             Conjunction{P(u, "B", "=", 1)}));
  EXPECT_FALSE(EquivalentOver(u, Conjunction{P(u, "B", "<=", 2)},
                              Conjunction{P(u, "B", "=", 1)}));
}

TEST(BoxTest, UnsatisfiableConjunctionGivesEmptyBox) {
  const Universe u = Small();
  const Box box(u, Conjunction{P(u, "A", "=", "a"), P(u, "A", "=", "b")});
  EXPECT_TRUE(box.empty());
  EXPECT_EQ(box.count(), 0u);
}

TEST(BoxTest, SubsetMatchesSatisfyingSets) {
  const Universe u = Small();
  const Box wide(u, Conjunction{P(u, "B", ">", 2)});
  const Box narrow(u, Conjunction{P(u, "B", ">", 3), P(u, "A", "=", "c")});
  EXPECT_TRUE(narrow.IsSubsetOf(wide));
  EXPECT_FALSE(wide.IsSubsetOf(narrow));
  EXPECT_TRUE(wide.IsSubsetOf(Box(u)));
}

TEST(BoxTest, ForEachInBoxAndProductIndexAgreeWithEnumeration) {
  const Universe u = Small();
  const std::vector<Configuration> all = AllConfigurations(u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(ProductIndex(u, all[i]), i);
  }
  const Box box(u, Conjunction{P(u, "B", "!=", 2), P(u, "A", "!=", "d")});
  std::vector<Configuration> visited;
  ForEachInBox(box, [&](const Configuration& c) {
    visited.push_back(c);
    return true;
  });
  std::vector<Configuration> expected;
  for (const Configuration& c : all) {
    if (box.Contains(c)) expected.push_back(c);
  }
  EXPECT_EQ(visited, expected);
}

TEST(BoxTest, CheapSupersetsAreExactlyTheCheapSupersets) {
  const Universe u = Small();
  std::mt19937 rng(3);
  for (PropertyIndex p = 0; p < u.size(); ++p) {
    const std::size_t n = u.value_count(p);
    for (std::uint32_t base_bits = 0; base_bits < (1u << n); ++base_bits) {
      ValueSet base(n);
      for (ValueIndex v = 0; v < n; ++v) {
        if (base_bits >> v & 1) base.insert(v);
      }
      for (std::size_t max_cost : {0, 1, 2, 3}) {
        std::set<ValueSet> expected;
        for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
          ValueSet s(n);
          for (ValueIndex v = 0; v < n; ++v) {
            if (bits >> v & 1) s.insert(v);
          }
          if (base.IsSubsetOf(s) && PredicateCost(u, p, s) <= max_cost) {
            expected.insert(s);
          }
        }
        const std::vector<ValueSet> got = CheapSupersets(u, p, base, max_cost);
        EXPECT_EQ(std::set<ValueSet>(got.begin(), got.end()), expected);
        EXPECT_EQ(got.size(), expected.size());
      }
    }
  }
}

// Every box of the universe, as per-property value-set choices.
std::vector<Box> AllBoxes(const Universe& u) {
  std::vector<Box> out;
  Box box(u);
  std::function<void(PropertyIndex)> rec = [&](PropertyIndex p) {
    if (p == u.size()) {
      out.push_back(box);
      return;
    }
    const std::size_t n = u.value_count(p);
    for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
      ValueSet s(n);
      for (ValueIndex v = 0; v < n; ++v) {
        if (bits >> v & 1) s.insert(v);
      }
      box.mutable_set(p) = s;
      rec(p + 1);
    }
  };
  rec(0);
  return out;
}

TEST(BoxTest, MaximalBoxesMatchBruteForce) {
  const Universe u({
      {"A", PropertyKind::kCategorical, {"a", "b", "c"}},
      {"B", PropertyKind::kOrdered, {1, 2, 3, 4}},
      {"C", PropertyKind::kCategorical, {"x", "y"}},
  });
  const std::vector<Configuration> all = AllConfigurations(u);
  const std::vector<Box> boxes = AllBoxes(u);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::set<Configuration> region;
    const int density = 1 + trial % 4;
    for (const Configuration& c : all) {
      if (rng() % 6 < static_cast<unsigned>(density)) region.insert(c);
    }
    const std::size_t max_cost = 1 + trial % 4;
    auto inside = [&](const Box& b) {
      bool any = false;
      for (const Configuration& c : all) {
        if (!b.Contains(c)) continue;
        if (!region.contains(c)) return false;
        any = true;
      }
      return any;
    };
    std::vector<Box> candidates;
    for (const Box& b : boxes) {
      if (b.Cost(u) <= max_cost && inside(b)) candidates.push_back(b);
    }
    std::vector<Box> expected;
    for (const Box& b : candidates) {
      bool dominated = false;
      for (const Box& o : candidates) dominated |= o != b && b.IsSubsetOf(o);
      if (!dominated) expected.push_back(b);
    }
    std::sort(expected.begin(), expected.end());
    const std::vector<Box> got = MaximalBoxes(
        u, [&](const Configuration& c) { return region.contains(c); }, max_cost);
    EXPECT_EQ(got, expected) << "trial " << trial;
  }
}

}  // namespace
}  // namespace pipedebug
