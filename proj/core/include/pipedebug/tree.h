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

// Debugging decision tree: an unpruned CART-style tree grown over evaluated
// instances until every leaf is pure or inseparable. Root-to-leaf paths that
// end in a pure-fail leaf are the hypotheses the debugger tests.

#ifndef PIPEDEBUG_TREE_H_
#define PIPEDEBUG_TREE_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipedebug/model.h"
#include "pipedebug/universe.h"

namespace pipedebug {

enum class Purity { kPureFail, kPureSucceed, kMixed };

// A leaf when `split` is empty; otherwise an inner node whose true child
// holds the instances satisfying `split`.
struct TreeNode {
  std::size_t n_fail = 0;
  std::size_t n_succeed = 0;
  std::optional<Predicate> split;
  std::unique_ptr<TreeNode> true_child;
  std::unique_ptr<TreeNode> false_child;

  bool is_leaf() const { return !split.has_value(); }
  Purity purity() const;

  static std::unique_ptr<TreeNode> Leaf(std::size_t n_fail,
                                        std::size_t n_succeed);
  static std::unique_ptr<TreeNode> Inner(Predicate split,
                                         std::unique_ptr<TreeNode> on_true,
                                         std::unique_ptr<TreeNode> on_false);
};

// Grows the tree. Candidate splits are (p = v) for categorical properties
// and (p <= t) for ordered ones, where t ranges over every observed value
// at the node except the largest. The split with the largest Gini impurity
// decrease wins, compared exactly; ties go to the canonically smallest
// predicate. Growth continues through zero-gain splits until a node is pure
// or no split separates its instances.
std::unique_ptr<TreeNode> FitTree(std::span<const Instance> instances,
                                  const Universe& universe);

struct Suspect {
  Conjunction conjunction;
  std::size_t n_fail = 0;

  friend bool operator==(const Suspect&, const Suspect&) = default;
};

// One suspect per pure-fail leaf: the conjunction of split predicates on
// its path, negated on false branches. Sorted by descending n_fail, then
// ascending size, then canonical predicate order.
std::vector<Suspect> ExtractSuspects(const TreeNode& tree);

nlohmann::json TreeToJson(const Universe& universe, const TreeNode& tree);

}  // namespace pipedebug

#endif  // PIPEDEBUG_TREE_H_
