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

#include "pipedebug/box.h"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace pipedebug {

Box::Box(const Universe& universe) {
  sets_.reserve(universe.size());
  for (PropertyIndex p = 0; p < universe.size(); ++p) {
    sets_.emplace_back(universe.value_count(p), /*full=*/true);
  }
}

Box::Box(const Universe& universe, const Conjunction& conjunction)
    : Box(universe) {
  for (const Predicate& pred : conjunction) {
    if (pred.property >= sets_.size()) {
      throw std::out_of_range("predicate refers to a property outside the "
                              "universe");
    }
    ValueSet& set = sets_[pred.property];
    const std::size_t n = set.universe_size();
    for (ValueIndex v = 0; v < n; ++v) {
      bool keep = true;
      switch (pred.comparator) {
        case Comparator::kEq:
          keep = v == pred.value;
          break;
        case Comparator::kNeq:
          keep = v != pred.value;
          break;
        case Comparator::kLe:
          keep = v <= pred.value;
          break;
        case Comparator::kGt:
          keep = v > pred.value;
          break;
      }
      if (!keep) set.erase(v);
    }
  }
}

bool Box::empty() const {
  return std::any_of(sets_.begin(), sets_.end(),
                     [](const ValueSet& s) { return s.empty(); });
}

bool Box::Contains(const Configuration& config) const {
  for (std::size_t p = 0; p < sets_.size(); ++p) {
    if (!sets_[p].contains(config[static_cast<PropertyIndex>(p)])) return false;
  }
  return true;
}

bool Box::IsSubsetOf(const Box& other) const {
  for (std::size_t p = 0; p < sets_.size(); ++p) {
    if (!sets_[p].IsSubsetOf(other.sets_[p])) return false;
  }
  return true;
}

std::uint64_t Box::count() const {
  std::uint64_t total = 1;
  for (const ValueSet& s : sets_) {
    const std::uint64_t n = s.count();
    if (n == 0) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / n) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= n;
  }
  return total;
}

Conjunction Box::ToConjunction(const Universe& universe) const {
  std::vector<Predicate> preds;
  for (PropertyIndex p = 0; p < sets_.size(); ++p) {
    AppendPredicates(universe, p, sets_[p], preds);
  }
  return Conjunction(std::move(preds));
}

std::size_t Box::Cost(const Universe& universe) const {
  std::size_t total = 0;
  for (PropertyIndex p = 0; p < sets_.size(); ++p) {
    total += PredicateCost(universe, p, sets_[p]);
  }
  return total;
}

std::size_t PredicateCost(const Universe& universe, PropertyIndex p,
                          const ValueSet& set) {
  const std::size_t n = set.universe_size();
  const std::size_t members = set.count();
  if (members == n) return 0;
  if (members <= 1) return 1;
  if (universe.property(p).kind == PropertyKind::kCategorical) {
    return n - members;
  }
  const ValueIndex lo = set.front();
  const ValueIndex hi = set.back();
  const std::size_t holes = (hi - lo + 1) - members;
  return holes + (lo > 0 ? 1 : 0) + (hi + 1 < n ? 1 : 0);
}

void AppendPredicates(const Universe& universe, PropertyIndex p,
                      const ValueSet& set, std::vector<Predicate>& out) {
  const std::size_t n = set.universe_size();
  const std::size_t members = set.count();
  if (members == n) return;
  if (members == 0) {
    throw std::invalid_argument("cannot express an empty value set");
  }
  if (members == 1) {
    out.push_back({p, Comparator::kEq, set.front()});
    return;
  }
  if (universe.property(p).kind == PropertyKind::kCategorical) {
    for (ValueIndex v = 0; v < n; ++v) {
      if (!set.contains(v)) out.push_back({p, Comparator::kNeq, v});
    }
    return;
  }
  const ValueIndex lo = set.front();
  const ValueIndex hi = set.back();
  if (lo > 0) out.push_back({p, Comparator::kGt, lo - 1});
  if (hi + 1 < n) out.push_back({p, Comparator::kLe, hi});
  for (ValueIndex v = lo; v <= hi; ++v) {
    if (!set.contains(v)) out.push_back({p, Comparator::kNeq, v});
  }
}

bool EquivalentOver(const Universe& universe, const Conjunction& a,
                    const Conjunction& b) {
  return Box(universe, a) == Box(universe, b);
}

void ForEachInBox(const Box& box,
                  const std::function<bool(const Configuration&)>& visit) {
  if (box.size() == 0 || box.empty()) return;
  std::vector<std::vector<ValueIndex>> axes;
  for (PropertyIndex p = 0; p < box.size(); ++p) {
    axes.push_back(box.set(p).members());
  }
  std::vector<std::size_t> odometer(axes.size(), 0);
  std::vector<ValueIndex> values(axes.size());
  for (std::size_t p = 0; p < axes.size(); ++p) values[p] = axes[p][0];
  while (true) {
    if (!visit(Configuration(values))) return;
    std::size_t p = axes.size();
    while (p-- > 0) {
      if (++odometer[p] < axes[p].size()) {
        values[p] = axes[p][odometer[p]];
        break;
      }
      odometer[p] = 0;
      values[p] = axes[p][0];
      if (p == 0) return;
    }
  }
}

std::uint64_t ProductIndex(const Universe& universe,
                           const Configuration& config) {
  std::uint64_t index = 0;
  for (PropertyIndex p = 0; p < universe.size(); ++p) {
    index = index * universe.value_count(p) + config.at(p);
  }
  return index;
}

namespace {

// Calls `emit` with every subset of `pool` of size at most `k`.
void ForEachSmallSubset(
    const std::vector<ValueIndex>& pool, std::size_t k,
    const std::function<void(const std::vector<ValueIndex>&)>& emit) {
  std::vector<ValueIndex> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    emit(chosen);
    if (chosen.size() == k) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      chosen.push_back(pool[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

}  // namespace

std::vector<ValueSet> CheapSupersets(const Universe& universe, PropertyIndex p,
                                     const ValueSet& base, std::size_t max_cost) {
  const std::size_t n = universe.value_count(p);
  std::vector<ValueSet> out;
  auto offer = [&](const ValueSet& s) {
    if (s.empty() || !base.IsSubsetOf(s)) return;
    if (PredicateCost(universe, p, s) > max_cost) return;
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  if (max_cost >= 1) {
    for (ValueIndex v = 0; v < n; ++v) offer(ValueSet::Single(n, v));
  }
  if (universe.property(p).kind == PropertyKind::kCategorical) {
    std::vector<ValueIndex> outside;
    for (ValueIndex v = 0; v < n; ++v) {
      if (!base.contains(v)) outside.push_back(v);
    }
    ForEachSmallSubset(outside, max_cost, [&](const std::vector<ValueIndex>& drop) {
      ValueSet s(n, true);
      for (ValueIndex v : drop) s.erase(v);
      offer(s);
    });
    return out;
  }
  const ValueIndex lo_max = base.empty() ? static_cast<ValueIndex>(n - 1) : base.front();
  for (ValueIndex lo = 0; lo <= lo_max; ++lo) {
    const ValueIndex hi_min = base.empty() ? lo : base.back();
    for (ValueIndex hi = hi_min; hi < n; ++hi) {
      const std::size_t bounds = (lo > 0 ? 1 : 0) + (hi + 1 < n ? 1 : 0);
      if (bounds > max_cost) continue;
      std::vector<ValueIndex> gaps;
      for (ValueIndex v = lo + 1; v < hi; ++v) {
        if (!base.contains(v)) gaps.push_back(v);
      }
      ForEachSmallSubset(gaps, max_cost - bounds,
                         [&](const std::vector<ValueIndex>& holes) {
                           ValueSet s(n, false);
                           for (ValueIndex v = lo; v <= hi; ++v) s.insert(v);
                           for (ValueIndex v : holes) s.erase(v);
                           offer(s);
                         });
    }
  }
  return out;
}

std::vector<Box> MaximalBoxes(const Universe& universe,
                              const std::function<bool(const Configuration&)>& inside,
                              std::size_t max_cost) {
  const std::size_t n_props = universe.size();
  if (n_props == 0) return {};
  std::vector<ValueIndex> configs;
  std::vector<std::uint32_t> in, out;
  ForEachInBox(Box(universe), [&](const Configuration& c) {
    const auto id = static_cast<std::uint32_t>(configs.size() / n_props);
    configs.insert(configs.end(), c.values().begin(), c.values().end());
    (inside(c) ? in : out).push_back(id);
    return true;
  });
  if (in.empty()) return {};

  std::vector<std::vector<std::pair<ValueSet, std::size_t>>> options(n_props);
  for (PropertyIndex p = 0; p < n_props; ++p) {
    for (ValueSet& s : CheapSupersets(universe, p, ValueSet(universe.value_count(p)),
                                      max_cost)) {
      const std::size_t cost = PredicateCost(universe, p, s);
      options[p].emplace_back(std::move(s), cost);
    }
  }

  // A path stops at the first box (remaining properties unconstrained) with
  // no outside member; anything below it is contained in that box.
  std::set<Box> found;
  Box box(universe);
  auto filter = [&](const std::vector<std::uint32_t>& ids, PropertyIndex p,
                    const ValueSet& s) {
    std::vector<std::uint32_t> kept;
    for (std::uint32_t id : ids) {
      if (s.contains(configs[std::size_t{id} * n_props + p])) kept.push_back(id);
    }
    return kept;
  };
  std::function<void(PropertyIndex, std::size_t, const std::vector<std::uint32_t>&,
                     const std::vector<std::uint32_t>&)>
      search = [&](PropertyIndex p, std::size_t cost,
                   const std::vector<std::uint32_t>& f,
                   const std::vector<std::uint32_t>& s) {
        if (s.empty()) {
          found.insert(box);
          return;
        }
        if (p == n_props) return;
        for (const auto& [set, c] : options[p]) {
          if (cost + c > max_cost) continue;
          std::vector<std::uint32_t> f2 = set.full() ? f : filter(f, p, set);
          if (f2.empty()) continue;
          std::vector<std::uint32_t> s2 = set.full() ? s : filter(s, p, set);
          box.mutable_set(p) = set;
          search(p + 1, cost + c, f2, s2);
        }
        box.mutable_set(p) = ValueSet(universe.value_count(p), true);
      };
  search(0, 0, in, out);

  std::vector<Box> result;
  for (const Box& b : found) {
    bool dominated = false;
    for (const Box& other : found) {
      if (other != b && b.IsSubsetOf(other)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) result.push_back(b);
  }
  return result;
}

}  // namespace pipedebug
