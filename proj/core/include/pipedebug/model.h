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

#ifndef PIPEDEBUG_MODEL_H_
#define PIPEDEBUG_MODEL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pipedebug/universe.h"
#include "pipedebug/value.h"

namespace pipedebug {

// Only four comparators exist. GE and LT are expressed by splitting the
// other way: (p >= v) is (p > predecessor(v)).
enum class Comparator : std::uint8_t { kEq = 0, kNeq = 1, kLe = 2, kGt = 3 };

// "=", "!=", "<=", ">".
std::string_view ComparatorSymbol(Comparator cmp);
// Accepts the symbols above; throws std::invalid_argument otherwise.
Comparator ParseComparator(std::string_view symbol);
// EQ <-> NEQ, LE <-> GT.
Comparator Negate(Comparator cmp);

// A (property, comparator, value) triple over a Universe, stored by index.
// Ordering is canonical: property name, then comparator, then value.
struct Predicate {
  PropertyIndex property = 0;
  Comparator comparator = Comparator::kEq;
  ValueIndex value = 0;

  // Validates names, value membership and comparator legality. Throws
  // std::invalid_argument (illegal comparator) or std::out_of_range
  // (unknown property or value).
  static Predicate Make(const Universe& universe, std::string_view property,
                        Comparator comparator, const Value& value);

  Predicate Negated() const { return {property, Negate(comparator), value}; }

  friend bool operator==(const Predicate&, const Predicate&) = default;
  friend auto operator<=>(const Predicate&, const Predicate&) = default;
};

// A total assignment of one value to every property of a Universe.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<ValueIndex> values)
      : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  ValueIndex operator[](PropertyIndex p) const { return values_[p]; }
  // Throws std::out_of_range when `p` is not a property of this config.
  ValueIndex at(PropertyIndex p) const { return values_.at(p); }
  void set(PropertyIndex p, ValueIndex v) { values_.at(p) = v; }
  const std::vector<ValueIndex>& values() const { return values_; }

  // Builds a configuration from (name, value) pairs. Throws
  // std::invalid_argument when not total, std::out_of_range on unknown
  // names or values.
  static Configuration FromNamed(
      const Universe& universe,
      const std::vector<std::pair<std::string, Value>>& assignments);

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  std::vector<ValueIndex> values_;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& config) const;
};

// A set of predicates read as their logical AND. Predicates are kept
// sorted canonically and unique; the empty conjunction is always true.
class Conjunction {
 public:
  Conjunction() = default;
  explicit Conjunction(std::vector<Predicate> predicates);
  Conjunction(std::initializer_list<Predicate> predicates)
      : Conjunction(std::vector<Predicate>(predicates)) {}

  const std::vector<Predicate>& predicates() const { return predicates_; }
  std::size_t size() const { return predicates_.size(); }
  bool empty() const { return predicates_.empty(); }
  auto begin() const { return predicates_.begin(); }
  auto end() const { return predicates_.end(); }

  // True when at least one configuration of `universe` satisfies it.
  bool IsSatisfiable(const Universe& universe) const;
  // Proper-subset test on the predicate sets.
  bool IsProperSubsetOf(const Conjunction& other) const;

  friend bool operator==(const Conjunction&, const Conjunction&) = default;
  friend auto operator<=>(const Conjunction&, const Conjunction&) = default;

 private:
  std::vector<Predicate> predicates_;
};

// A disjunction of conjunctions.
using Explanation = std::vector<Conjunction>;

enum class Outcome { kSucceed, kFail };
std::string_view OutcomeName(Outcome outcome);  // "succeed" / "fail"
Outcome ParseOutcome(std::string_view name);

enum class Origin { kSeed, kInitialDesign, kProbe };
std::string_view OriginName(Origin origin);  // "seed" / "initial_design" / "probe"
Origin ParseOrigin(std::string_view name);

// Why a run produced no score.
enum class FailureKind { kCrash, kBadOutput, kTimeout };
std::string_view FailureKindName(FailureKind kind);  // "crash" / ...
FailureKind ParseFailureKind(std::string_view name);

// One executed pipeline configuration and its evaluation.
struct Instance {
  Configuration config;
  std::optional<double> score;
  Outcome outcome = Outcome::kFail;
  std::string run_id;
  Origin origin = Origin::kSeed;
  std::optional<FailureKind> failure;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Throws std::out_of_range if the predicate's property is not part of
// `config` (config/universe mismatch).
bool Satisfies(const Configuration& config, const Predicate& predicate);
bool Satisfies(const Configuration& config, const Conjunction& conjunction);
bool Satisfies(const Configuration& config, const Explanation& explanation);

// Number of configurations of `universe` satisfying `conjunction`, computed
// per property. Saturates at UINT64_MAX.
std::uint64_t ProductCount(const Universe& universe,
                           const Conjunction& conjunction);

// Calls `visit` on every configuration of the universe, in lexicographic
// index order, that satisfies `filter`. Stops early when `visit` returns
// false.
void ForEachConfiguration(
    const Universe& universe, const Conjunction& filter,
    const std::function<bool(const Configuration&)>& visit);

// "Estimator = Gradient Boosting", "(A = 1 AND B > 2)", "TRUE" for empty.
std::string Describe(const Universe& universe, const Predicate& predicate);
std::string Describe(const Universe& universe, const Conjunction& conjunction);
std::string Describe(const Universe& universe, const Explanation& explanation);

}  // namespace pipedebug

#endif  // PIPEDEBUG_MODEL_H_
