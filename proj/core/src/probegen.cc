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

#include "pipedebug/probegen.h"

#include <algorithm>
#include <queue>
#include <random>
#include <tuple>
#include <unordered_set>

#include "pipedebug/box.h"

namespace pipedebug {
namespace {

std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t HashConfig(std::uint64_t seed, const Configuration& config) {
  std::uint64_t h = Mix(seed);
  for (ValueIndex v : config.values()) h = Mix(h ^ v);
  return h;
}

using ConfigSet = std::unordered_set<Configuration, ConfigurationHash>;

bool Excluded(const Evidence* exclude, const ConfigSet& chosen,
              const Configuration& c) {
  return chosen.contains(c) || (exclude && exclude->Contains(c));
}

// Tracks which single values and value pairs are still uncovered.
class PairCoverage {
 public:
  explicit PairCoverage(const Universe& universe) : universe_(universe) {
    const std::size_t n = universe.size();
    singles_.resize(n);
    pairs_.resize(n * n);
    for (PropertyIndex p = 0; p < n; ++p) {
      singles_[p].assign(universe.value_count(p), true);
      remaining_ += universe.value_count(p);
      for (PropertyIndex q = p + 1; q < n; ++q) {
        pairs_[p * n + q].assign(
            universe.value_count(p) * universe.value_count(q), true);
        remaining_ += universe.value_count(p) * universe.value_count(q);
      }
    }
  }

  bool complete() const { return remaining_ == 0; }

  bool Uncovered(PropertyIndex p, ValueIndex v) const { return singles_[p][v]; }
  bool Uncovered(PropertyIndex p, ValueIndex v, PropertyIndex q,
                 ValueIndex w) const {
    if (p > q) {
      std::swap(p, q);
      std::swap(v, w);
    }
    return pairs_[p * universe_.size() + q][v * universe_.value_count(q) + w];
  }

  void Cover(const Configuration& c) {
    const std::size_t n = universe_.size();
    for (PropertyIndex p = 0; p < n; ++p) {
      if (singles_[p][c[p]]) {
        singles_[p][c[p]] = false;
        --remaining_;
      }
      for (PropertyIndex q = p + 1; q < n; ++q) {
        auto bit = pairs_[p * n + q][c[p] * universe_.value_count(q) + c[q]];
        if (bit) {
          bit = false;
          --remaining_;
        }
      }
    }
  }

  std::size_t Gain(const Configuration& c) const {
    std::size_t gain = 0;
    const std::size_t n = universe_.size();
    for (PropertyIndex p = 0; p < n; ++p) {
      gain += singles_[p][c[p]];
      for (PropertyIndex q = p + 1; q < n; ++q) {
        gain += pairs_[p * n + q][c[p] * universe_.value_count(q) + c[q]];
      }
    }
    return gain;
  }

  // Some still-uncovered (p, v, q, w); q == p means a single.
  std::tuple<PropertyIndex, ValueIndex, PropertyIndex, ValueIndex>
  FirstUncovered() const {
    const std::size_t n = universe_.size();
    for (PropertyIndex p = 0; p < n; ++p) {
      for (PropertyIndex q = p + 1; q < n; ++q) {
        const auto& bits = pairs_[p * n + q];
        for (std::size_t i = 0; i < bits.size(); ++i) {
          if (bits[i]) {
            return {p, static_cast<ValueIndex>(i / universe_.value_count(q)), q,
                    static_cast<ValueIndex>(i % universe_.value_count(q))};
          }
        }
      }
    }
    for (PropertyIndex p = 0; p < n; ++p) {
      for (ValueIndex v = 0; v < singles_[p].size(); ++v) {
        if (singles_[p][v]) return {p, v, p, v};
      }
    }
    return {0, 0, 0, 0};
  }

 private:
  const Universe& universe_;
  std::vector<std::vector<bool>> singles_;
  std::vector<std::vector<bool>> pairs_;
  std::size_t remaining_ = 0;
};

// Greedy row: properties in `order`, each taking the value that covers the
// most new singles/pairs given the values already placed.
Configuration GreedyRow(const Universe& universe, const PairCoverage& coverage,
                        const std::vector<PropertyIndex>& order,
                        std::vector<bool> fixed, Configuration row,
                        std::mt19937_64& rng) {
  std::vector<bool> placed = fixed;
  for (PropertyIndex p : order) {
    if (fixed[p]) continue;
    std::size_t best_gain = 0;
    std::vector<ValueIndex> best;
    for (ValueIndex v = 0; v < universe.value_count(p); ++v) {
      std::size_t gain = coverage.Uncovered(p, v) ? 1 : 0;
      for (PropertyIndex q = 0; q < universe.size(); ++q) {
        if (q != p && placed[q] && coverage.Uncovered(p, v, q, row[q])) ++gain;
      }
      if (best.empty() || gain > best_gain) {
        best_gain = gain;
        best.assign(1, v);
      } else if (gain == best_gain) {
        best.push_back(v);
      }
    }
    row.set(p, best[std::uniform_int_distribution<std::size_t>(
        0, best.size() - 1)(rng)]);
    placed[p] = true;
  }
  return row;
}

Configuration RandomConfig(const Universe& universe, std::mt19937_64& rng) {
  std::vector<ValueIndex> values(universe.size());
  for (PropertyIndex p = 0; p < universe.size(); ++p) {
    values[p] = static_cast<ValueIndex>(std::uniform_int_distribution<std::size_t>(
        0, universe.value_count(p) - 1)(rng));
  }
  return Configuration(std::move(values));
}

// Appends up to `n` distinct random configurations not yet excluded.
void FillRandom(const Universe& universe, std::size_t n, std::uint64_t seed,
                const Evidence* exclude, ConfigSet& chosen,
                std::vector<Configuration>& out) {
  const std::uint64_t product = universe.product_size();
  if (product <= (1u << 16)) {
    // Enumerate what is left and order it by a seeded hash.
    std::vector<std::pair<std::uint64_t, Configuration>> left;
    ForEachConfiguration(universe, Conjunction(), [&](const Configuration& c) {
      if (!Excluded(exclude, chosen, c)) left.emplace_back(HashConfig(seed, c), c);
      return true;
    });
    std::sort(left.begin(), left.end());
    for (auto& [hash, c] : left) {
      if (out.size() >= n) break;
      chosen.insert(c);
      out.push_back(std::move(c));
    }
    return;
  }
  std::mt19937_64 rng(seed);
  while (out.size() < n) {
    Configuration c = RandomConfig(universe, rng);
    if (Excluded(exclude, chosen, c)) continue;
    chosen.insert(c);
    out.push_back(std::move(c));
  }
}

std::uint64_t Available(const Universe& universe, const Evidence* exclude) {
  const std::uint64_t product = universe.product_size();
  if (!exclude) return product;
  std::uint64_t stored = 0;
  for (const Instance& inst : exclude->instances()) {
    if (inst.config.size() == universe.size()) ++stored;
  }
  return product > stored ? product - stored : 0;
}

}  // namespace

std::vector<Configuration> PairwiseCover(const Universe& universe,
                                         std::uint64_t seed,
                                         const Evidence* exclude) {
  std::vector<Configuration> rows;
  if (universe.empty()) return rows;
  PairCoverage coverage(universe);
  if (exclude) {
    for (const Instance& inst : exclude->instances()) coverage.Cover(inst.config);
  }
  std::mt19937_64 rng(Mix(seed ^ 0x5ca1ab1eULL));
  constexpr int kCandidates = 24;
  std::vector<PropertyIndex> order(universe.size());
  for (PropertyIndex p = 0; p < order.size(); ++p) order[p] = p;

  while (!coverage.complete()) {
    const auto [p, v, q, w] = coverage.FirstUncovered();
    Configuration best;
    std::size_t best_gain = 0;
    for (int attempt = 0; attempt < kCandidates; ++attempt) {
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<bool> fixed(universe.size(), false);
      Configuration row(std::vector<ValueIndex>(universe.size(), 0));
      // The first candidate is anchored on an uncovered pair so every row
      // makes progress.
      if (attempt == 0) {
        fixed[p] = fixed[q] = true;
        row.set(p, v);
        row.set(q, w);
      }
      Configuration candidate =
          GreedyRow(universe, coverage, order, std::move(fixed), row, rng);
      const std::size_t gain = coverage.Gain(candidate);
      if (gain > best_gain) {
        best_gain = gain;
        best = std::move(candidate);
      }
    }
    coverage.Cover(best);
    rows.push_back(std::move(best));
  }
  return rows;
}

Design InitialDesign(const Universe& universe, std::size_t n,
                     DesignStrategy strategy, std::uint64_t seed,
                     const Evidence* exclude) {
  Design design;
  if (universe.empty() || n == 0) return design;
  const std::uint64_t available = Available(universe, exclude);
  if (n > available) {
    design.warning = "requested " + std::to_string(n) +
                     " configurations but only " + std::to_string(available) +
                     " untested ones exist; returning all of them";
    n = static_cast<std::size_t>(available);
  }
  ConfigSet chosen;
  if (strategy == DesignStrategy::kCovering) {
    for (Configuration& row : PairwiseCover(universe, seed, exclude)) {
      if (design.configs.size() >= n) break;
      chosen.insert(row);
      design.configs.push_back(std::move(row));
    }
  }
  FillRandom(universe, n, Mix(seed + 1), exclude, chosen, design.configs);
  return design;
}

std::vector<Configuration> ProbesForSuspect(const Conjunction& suspect,
                                            const Universe& universe,
                                            const Evidence& evidence,
                                            std::size_t k, std::uint64_t seed,
                                            std::span<const Box> avoid) {
  std::vector<Configuration> out;
  const Box box(universe, suspect);
  auto avoided = [&](const Configuration& c) {
    return std::any_of(avoid.begin(), avoid.end(),
                       [&](const Box& b) { return b.Contains(c); });
  };
  if (k == 0 || universe.empty() || box.empty()) return out;

  // Per-property preference order over admissible values.
  std::vector<std::vector<ValueIndex>> prefs(universe.size());
  std::vector<std::size_t> last_succeed_pos;
  std::vector<bool> seen_fail;
  for (PropertyIndex p = 0; p < universe.size(); ++p) {
    const std::vector<ValueIndex> admissible = box.set(p).members();
    std::vector<ValueIndex> lower_bounds;  // witness values for > t
    std::vector<ValueIndex> upper_bounds;  // witness values for <= t
    for (const Predicate& pred : suspect) {
      if (pred.property != p) continue;
      if (pred.comparator == Comparator::kLe) upper_bounds.push_back(pred.value);
      if (pred.comparator == Comparator::kGt) lower_bounds.push_back(pred.value + 1);
    }
    std::vector<ValueIndex>& pref = prefs[p];
    pref = admissible;
    if (!lower_bounds.empty() || !upper_bounds.empty()) {
      auto distance = [&](ValueIndex v) {
        std::size_t d = SIZE_MAX;
        for (ValueIndex t : upper_bounds) d = std::min<std::size_t>(d, t - v);
        for (ValueIndex t : lower_bounds) d = std::min<std::size_t>(d, v - t);
        return d;
      };
      std::stable_sort(pref.begin(), pref.end(), [&](ValueIndex a, ValueIndex b) {
        return distance(a) < distance(b);
      });
      continue;
    }
    last_succeed_pos.assign(universe.value_count(p), 0);
    seen_fail.assign(universe.value_count(p), false);
    const auto& insts = evidence.instances();
    for (std::size_t i = 0; i < insts.size(); ++i) {
      if (insts[i].config.size() != universe.size()) continue;
      const ValueIndex v = insts[i].config[p];
      if (insts[i].outcome == Outcome::kSucceed) {
        last_succeed_pos[v] = i + 1;
      } else {
        seen_fail[v] = true;
      }
    }
    auto key = [&](ValueIndex v) {
      const int tier = last_succeed_pos[v] ? 0 : (!seen_fail[v] ? 1 : 2);
      const std::uint64_t within =
          tier == 0 ? ~static_cast<std::uint64_t>(last_succeed_pos[v])
                    : Mix(seed ^ (std::uint64_t{p} << 32) ^ v);
      return std::make_pair(tier, within);
    };
    std::sort(pref.begin(), pref.end(),
              [&](ValueIndex a, ValueIndex b) { return key(a) < key(b); });
  }

  // Best-first walk over rank vectors in order of (rank sum, hash).
  struct Node {
    std::size_t cost;
    std::uint64_t tie;
    std::vector<std::uint32_t> ranks;
    bool operator>(const Node& o) const {
      return std::tie(cost, tie, ranks) > std::tie(o.cost, o.tie, o.ranks);
    }
  };
  auto to_config = [&](const std::vector<std::uint32_t>& ranks) {
    std::vector<ValueIndex> values(ranks.size());
    for (std::size_t p = 0; p < ranks.size(); ++p) values[p] = prefs[p][ranks[p]];
    return Configuration(std::move(values));
  };
  // Succeeding runs moved into the suspect come first, most recent first:
  // each keeps every value the suspect admits and takes the most preferred
  // admissible value elsewhere.
  ConfigSet emitted;
  const auto& insts = evidence.instances();
  for (auto it = insts.rbegin(); it != insts.rend() && out.size() < k; ++it) {
    if (it->outcome != Outcome::kSucceed || it->config.size() != universe.size()) {
      continue;
    }
    Configuration projected = it->config;
    std::vector<PropertyIndex> moved;
    for (PropertyIndex p = 0; p < universe.size(); ++p) {
      if (box.set(p).contains(projected[p])) continue;
      projected.set(p, prefs[p].front());
      moved.push_back(p);
    }
    for (PropertyIndex p : moved) {
      for (std::size_t r = 1; r < prefs[p].size() && avoided(projected); ++r) {
        projected.set(p, prefs[p][r]);
      }
      if (avoided(projected)) projected.set(p, prefs[p].front());
    }
    if (avoided(projected) || evidence.Contains(projected) ||
        !emitted.insert(projected).second) {
      continue;
    }
    out.push_back(std::move(projected));
  }

  std::priority_queue<Node, std::vector<Node>, std::greater<>> frontier;
  ConfigSet visited;
  {
    std::vector<std::uint32_t> start(universe.size(), 0);
    Configuration c = to_config(start);
    frontier.push({0, HashConfig(seed, c), std::move(start)});
    visited.insert(std::move(c));
  }
  while (!frontier.empty() && out.size() < k) {
    Node node = frontier.top();
    frontier.pop();
    Configuration config = to_config(node.ranks);
    if (!evidence.Contains(config) && !emitted.contains(config) && !avoided(config)) {
      out.push_back(config);
    }
    for (std::size_t p = 0; p < node.ranks.size(); ++p) {
      if (node.ranks[p] + 1 >= prefs[p].size()) continue;
      std::vector<std::uint32_t> next = node.ranks;
      ++next[p];
      Configuration c = to_config(next);
      if (!visited.insert(c).second) continue;
      frontier.push({node.cost + 1, HashConfig(seed, c), std::move(next)});
    }
  }
  return out;
}

}  // namespace pipedebug
