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

#ifndef PIPEDEBUG_BOX_H_
#define PIPEDEBUG_BOX_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "pipedebug/model.h"
#include "pipedebug/universe.h"

namespace pipedebug {

// Value-set normal form of a conjunction: the set of admissible values of
// every property. The satisfying configurations of a conjunction are
// exactly the Cartesian product of these sets, so two conjunctions are
// logically equivalent over a universe iff their boxes are equal.
class Box {
 public:
  // The box of every configuration.
  explicit Box(const Universe& universe);
  Box(const Universe& universe, const Conjunction& conjunction);

  std::size_t size() const { return sets_.size(); }
  const ValueSet& set(PropertyIndex p) const { return sets_[p]; }
  ValueSet& mutable_set(PropertyIndex p) { return sets_[p]; }
  const std::vector<ValueSet>& sets() const { return sets_; }

  bool empty() const;
  bool Contains(const Configuration& config) const;
  bool IsSubsetOf(const Box& other) const;
  // Number of configurations in the box, saturated at UINT64_MAX.
  std::uint64_t count() const;

  // Shortest predicate form (see PredicateCost). Precondition: !empty().
  Conjunction ToConjunction(const Universe& universe) const;
  // Total number of predicates ToConjunction produces.
  std::size_t Cost(const Universe& universe) const;

  friend bool operator==(const Box&, const Box&) = default;
  friend auto operator<=>(const Box& a, const Box& b) {
    return a.sets_ <=> b.sets_;
  }

 private:
  std::vector<ValueSet> sets_;
};

// Fewest predicates needed to restrict property `p` to `set`:
//   full set -> 0; singleton -> 1 (EQ);
//   categorical -> one NEQ per excluded value;
//   ordered -> a LE bound if values above the hull are excluded, a GT bound
//   if values below are excluded, plus one NEQ per hole inside the hull.
std::size_t PredicateCost(const Universe& universe, PropertyIndex p,
                          const ValueSet& set);

// Appends the predicates that realize PredicateCost to `out`.
void AppendPredicates(const Universe& universe, PropertyIndex p,
                      const ValueSet& set, std::vector<Predicate>& out);

// Conjunction identity modulo comparator choice: equal iff their boxes are
// equal.
bool EquivalentOver(const Universe& universe, const Conjunction& a,
                    const Conjunction& b);

// Every nonempty value set of property `p` that contains `base` and costs
// at most `max_cost` (an empty `base` yields all such sets). No duplicates;
// the order is deterministic.
std::vector<ValueSet> CheapSupersets(const Universe& universe, PropertyIndex p,
                                     const ValueSet& base, std::size_t max_cost);

// Visits the configurations of `box` in lexicographic index order until
// `visit` returns false.
void ForEachInBox(const Box& box,
                  const std::function<bool(const Configuration&)>& visit);

// Mixed-radix rank of `config` in the full product (last property fastest).
std::uint64_t ProductIndex(const Universe& universe, const Configuration& config);

// The boxes of cost at most `max_cost` that lie inside the region selected
// by `inside`, contain at least one of its configurations, and are not
// strictly contained in another such box. Enumerates the full product, so
// callers bound its size. Sorted by box order.
std::vector<Box> MaximalBoxes(const Universe& universe,
                              const std::function<bool(const Configuration&)>& inside,
                              std::size_t max_cost);

}  // namespace pipedebug

#endif  // PIPEDEBUG_BOX_H_
