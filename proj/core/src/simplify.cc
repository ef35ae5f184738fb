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


#include "pipedebug/simplify.h"

#include <algorithm>
#include <optional>
#include <vector>

#include "pipedebug/box.h"

namespace pipedebug {
namespace {

std::size_t TotalCost(const Universe& universe, const std::vector<Box>& boxes) {
  std::size_t total = 0;
  for (const Box& b : boxes) total += b.Cost(universe);
  return total;
}

// Removes boxes contained in another; of two equal boxes the first stays.
bool Absorb(std::vector<Box>& boxes) {
  std::vector<bool> drop(boxes.size(), false);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = 0; j < boxes.size() && !drop[i]; ++j) {
      if (i == j || drop[j] || !boxes[i].IsSubsetOf(boxes[j])) continue;
      if (boxes[i] == boxes[j] && i < j) continue;
      drop[i] = true;
    }
  }
  std::vector<Box> kept;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!drop[i]) kept.push_back(std::move(boxes[i]));
  }
  const bool changed = kept.size() != boxes.size();
  boxes = std::move(kept);
  return changed;
}

// The single property on which `a` and `b` differ, if exactly one.
std::optional<PropertyIndex> SoleDifference(const Box& a, const Box& b) {
  std::optional<PropertyIndex> diff;
  for (PropertyIndex p = 0; p < a.size(); ++p) {
    if (a.set(p) == b.set(p)) continue;
    if (diff) return std::nullopt;
    diff = p;
  }
  return diff;
}

bool MergeOnce(std::vector<Box>& boxes) {
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      const auto p = SoleDifference(boxes[i], boxes[j]);
      if (!p) continue;
      ValueSet joined = boxes[i].set(*p);
      joined |= boxes[j].set(*p);
      if (!joined.full()) continue;
      boxes[i].mutable_set(*p) = joined;
      boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
      return true;
    }
  }
  return false;
}

class FailSet {
 public:
  FailSet(const Universe& universe, const std::vector<Box>& boxes)
      : universe_(universe), bits_(universe.product_size(), false) {
    for (const Box& b : boxes) {
      ForEachInBox(b, [&](const Configuration& c) {
        bits_[ProductIndex(universe_, c)] = true;
        return true;
      });
    }
  }

  bool Covers(const Box& box) const {
    bool all = true;
    ForEachInBox(box, [&](const Configuration& c) {
      all = bits_[ProductIndex(universe_, c)];
      return all;
    });
    return all;
  }

  std::vector<std::uint64_t> Members(const Box& box) const {
    std::vector<std::uint64_t> out;
    ForEachInBox(box, [&](const Configuration& c) {
      out.push_back(ProductIndex(universe_, c));
      return true;
    });
    return out;
  }

  std::size_t size() const { return bits_.size(); }
  bool test(std::uint64_t i) const { return bits_[i]; }

 private:
  const Universe& universe_;
  std::vector<bool> bits_;
};

// Grows `box` inside the failing set while its cost stays within `cap`.
Box Expand(const Universe& universe, const FailSet& fail, Box box,
           std::size_t cap) {
  bool grew = true;
  while (grew) {
    grew = false;
    for (PropertyIndex p = 0; p < universe.size(); ++p) {
      if (box.set(p).full()) continue;
      Box whole = box;
      whole.mutable_set(p) = ValueSet(universe.value_count(p), true);
      if (fail.Covers(whole)) {
        box = std::move(whole);
        grew = true;
        continue;
      }
      for (ValueIndex v = 0; v < universe.value_count(p); ++v) {
        if (box.set(p).contains(v)) continue;
        Box wider = box;
        wider.mutable_set(p).insert(v);
        if (wider.Cost(universe) <= cap && fail.Covers(wider)) {
          box = std::move(wider);
          grew = true;
        }
      }
    }
  }
  return box;
}

std::vector<Box> PrimeCover(const Universe& universe,
                            const std::vector<Box>& input) {
  const FailSet fail(universe, input);
  std::vector<Box> candidates;
  for (const Box& b : input) {
    Box grown = Expand(universe, fail, b, b.Cost(universe));
    if (std::find(candidates.begin(), candidates.end(), grown) ==
        candidates.end()) {
      candidates.push_back(std::move(grown));
    }
  }
  Absorb(candidates);

  struct Candidate {
    Box box;
    std::size_t cost;
    Conjunction form;
    std::vector<std::uint64_t> members;
  };
  std::vector<Candidate> pool;
  for (Box& b : candidates) {
    Candidate c{b, b.Cost(universe), b.ToConjunction(universe), {}};
    c.members = fail.Members(c.box);
    pool.push_back(std::move(c));
  }

  std::vector<bool> covered(fail.size(), false);
  std::size_t uncovered = 0;
  for (std::size_t i = 0; i < fail.size(); ++i) uncovered += fail.test(i);
  std::vector<std::size_t> picks;
  std::vector<bool> used(pool.size(), false);
  while (uncovered > 0) {
    std::size_t best = pool.size();
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      std::size_t gain = 0;
      for (std::uint64_t m : pool[i].members) gain += !covered[m];
      if (gain == 0) continue;
      const bool better =
          best == pool.size() || gain > best_gain ||
          (gain == best_gain &&
           (pool[i].cost < pool[best].cost ||
            (pool[i].cost == pool[best].cost && pool[i].form < pool[best].form)));
      if (better) {
        best = i;
        best_gain = gain;
      }
    }
    if (best == pool.size()) break;
    used[best] = true;
    picks.push_back(best);
    for (std::uint64_t m : pool[best].members) {
      if (!covered[m]) {
        covered[m] = true;
        --uncovered;
      }
    }
  }

  // Drop picks whose configurations the other picks already cover.
  std::vector<std::size_t> hits(fail.size(), 0);
  for (std::size_t i : picks) {
    for (std::uint64_t m : pool[i].members) ++hits[m];
  }
  std::vector<bool> keep(pool.size(), false);
  for (std::size_t i : picks) keep[i] = true;
  for (auto it = picks.rbegin(); it != picks.rend(); ++it) {
    const auto& members = pool[*it].members;
    const bool redundant = std::all_of(members.begin(), members.end(),
                                       [&](std::uint64_t m) { return hits[m] > 1; });
    if (!redundant) continue;
    keep[*it] = false;
    for (std::uint64_t m : members) --hits[m];
  }
  std::vector<Box> out;
  for (std::size_t i : picks) {
    if (keep[i]) out.push_back(pool[i].box);
  }
  return out;
}

}  // namespace

std::size_t ExplanationSize(const Explanation& explanation) {
  std::size_t n = 0;
  for (const Conjunction& c : explanation) n += c.size();
  return n;
}

Explanation Simplify(const Explanation& explanation, const Universe& universe) {
  std::vector<Box> boxes;
  for (const Conjunction& c : explanation) {
    Box b(universe, c);
    if (!b.empty()) boxes.push_back(std::move(b));
  }
  Absorb(boxes);
  while (MergeOnce(boxes)) Absorb(boxes);

  if (!universe.empty() && universe.product_size() <= kSimplifyEnumerationLimit &&
      !boxes.empty()) {
    std::vector<Box> cover = PrimeCover(universe, boxes);
    if (TotalCost(universe, cover) <= TotalCost(universe, boxes)) {
      boxes = std::move(cover);
    }
  }

  Explanation out;
  for (const Box& b : boxes) out.push_back(b.ToConjunction(universe));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pipedebug
