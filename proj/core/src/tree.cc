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

#include "pipedebug/tree.h"

#include <algorithm>
#include <cstdint>

#include "pipedebug/json_io.h"

namespace pipedebug {
namespace {

using u128 = unsigned __int128;

// Weighted Gini impurity of a split is n - Q with
//   Q = (fl^2 + sl^2) / nl + (fr^2 + sr^2) / nr,
// so the best split maximizes Q. Kept as an exact fraction.
struct SplitScore {
  u128 numerator = 0;
  u128 denominator = 1;

  static SplitScore Of(std::uint64_t fl, std::uint64_t sl, std::uint64_t fr,
                       std::uint64_t sr) {
    const u128 nl = fl + sl;
    const u128 nr = fr + sr;
    const u128 ql = u128{fl} * fl + u128{sl} * sl;
    const u128 qr = u128{fr} * fr + u128{sr} * sr;
    return {ql * nr + qr * nl, nl * nr};
  }

  bool Beats(const SplitScore& other) const {
    return numerator * other.denominator > other.numerator * denominator;
  }
};

struct Counts {
  std::uint64_t fail = 0;
  std::uint64_t succeed = 0;
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const Instance> instances, const Universe& universe)
      : instances_(instances), universe_(universe) {}

  std::unique_ptr<TreeNode> Build(std::vector<std::size_t> rows) {
    std::size_t n_fail = 0;
    for (std::size_t r : rows) {
      if (instances_[r].outcome == Outcome::kFail) ++n_fail;
    }
    const std::size_t n_succeed = rows.size() - n_fail;
    if (n_fail == 0 || n_succeed == 0) {
      return TreeNode::Leaf(n_fail, n_succeed);
    }
    const std::optional<Predicate> split = BestSplit(rows, n_fail, n_succeed);
    if (!split) return TreeNode::Leaf(n_fail, n_succeed);

    std::vector<std::size_t> on_true;
    std::vector<std::size_t> on_false;
    for (std::size_t r : rows) {
      (Satisfies(instances_[r].config, *split) ? on_true : on_false).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    auto t = Build(std::move(on_true));
    auto f = Build(std::move(on_false));
    auto node = TreeNode::Inner(*split, std::move(t), std::move(f));
    return node;
  }

 private:
  std::optional<Predicate> BestSplit(const std::vector<std::size_t>& rows,
                                     std::uint64_t n_fail,
                                     std::uint64_t n_succeed) const {
    std::optional<Predicate> best;
    SplitScore best_score;
    auto consider = [&](const Predicate& pred, const Counts& in) {
      const std::uint64_t n_in = in.fail + in.succeed;
      if (n_in == 0 || n_in == rows.size()) return;
      const SplitScore score = SplitScore::Of(in.fail, in.succeed,
                                              n_fail - in.fail,
                                              n_succeed - in.succeed);
      if (!best || score.Beats(best_score)) {
        best = pred;
        best_score = score;
      }
    };

    for (PropertyIndex p = 0; p < universe_.size(); ++p) {
      std::vector<Counts> per_value(universe_.value_count(p));
      for (std::size_t r : rows) {
        Counts& c = per_value[instances_[r].config[p]];
        (instances_[r].outcome == Outcome::kFail ? c.fail : c.succeed) += 1;
      }
      if (universe_.property(p).kind == PropertyKind::kCategorical) {
        for (ValueIndex v = 0; v < per_value.size(); ++v) {
          consider({p, Comparator::kEq, v}, per_value[v]);
        }
        continue;
      }
      // Ordered: thresholds at observed values; the largest observed value
      // cannot separate anything and is skipped by `consider`.
      Counts below;
      for (ValueIndex v = 0; v < per_value.size(); ++v) {
        if (per_value[v].fail + per_value[v].succeed == 0) continue;
        below.fail += per_value[v].fail;
        below.succeed += per_value[v].succeed;
        consider({p, Comparator::kLe, v}, below);
      }
    }
    return best;
  }

  std::span<const Instance> instances_;
  const Universe& universe_;
};

void CollectSuspects(const TreeNode& node, std::vector<Predicate>& path,
                     std::vector<Suspect>& out) {
  if (node.is_leaf()) {
    if (node.purity() == Purity::kPureFail) {
      out.push_back({Conjunction(path), node.n_fail});
    }
    return;
  }
  path.push_back(*node.split);
  CollectSuspects(*node.true_child, path, out);
  path.back() = node.split->Negated();
  CollectSuspects(*node.false_child, path, out);
  path.pop_back();
}

}  // namespace

Purity TreeNode::purity() const {
  if (n_succeed == 0 && n_fail > 0) return Purity::kPureFail;
  if (n_fail == 0 && n_succeed > 0) return Purity::kPureSucceed;
  return Purity::kMixed;
}

std::unique_ptr<TreeNode> TreeNode::Leaf(std::size_t n_fail,
                                         std::size_t n_succeed) {
  auto node = std::make_unique<TreeNode>();
  node->n_fail = n_fail;
  node->n_succeed = n_succeed;
  return node;
}

std::unique_ptr<TreeNode> TreeNode::Inner(Predicate split,
                                          std::unique_ptr<TreeNode> on_true,
                                          std::unique_ptr<TreeNode> on_false) {
  auto node = std::make_unique<TreeNode>();
  node->n_fail = on_true->n_fail + on_false->n_fail;
  node->n_succeed = on_true->n_succeed + on_false->n_succeed;
  node->split = split;
  node->true_child = std::move(on_true);
  node->false_child = std::move(on_false);
  return node;
}

std::unique_ptr<TreeNode> FitTree(std::span<const Instance> instances,
                                  const Universe& universe) {
  std::vector<std::size_t> rows(instances.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return TreeBuilder(instances, universe).Build(std::move(rows));
}

std::vector<Suspect> ExtractSuspects(const TreeNode& tree) {
  std::vector<Suspect> out;
  std::vector<Predicate> path;
  CollectSuspects(tree, path, out);
  std::stable_sort(out.begin(), out.end(),
                   [](const Suspect& a, const Suspect& b) {
                     if (a.n_fail != b.n_fail) return a.n_fail > b.n_fail;
                     if (a.conjunction.size() != b.conjunction.size()) {
                       return a.conjunction.size() < b.conjunction.size();
                     }
                     return a.conjunction < b.conjunction;
                   });
  return out;
}

nlohmann::json TreeToJson(const Universe& universe, const TreeNode& tree) {
  nlohmann::json j = {{"n_fail", tree.n_fail}, {"n_succeed", tree.n_succeed}};
  if (tree.is_leaf()) {
    switch (tree.purity()) {
      case Purity::kPureFail:
        j["purity"] = "pure_fail";
        break;
      case Purity::kPureSucceed:
        j["purity"] = "pure_succeed";
        break;
      case Purity::kMixed:
        j["purity"] = "mixed";
        break;
    }
    return j;
  }
  j["split"] = PredicateToJson(universe, *tree.split);
  j["true"] = TreeToJson(universe, *tree.true_child);
  j["false"] = TreeToJson(universe, *tree.false_child);
  return j;
}

}  // namespace pipedebug
