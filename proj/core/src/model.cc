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

#include "pipedebug/model.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "pipedebug/box.h"

namespace pipedebug {

std::string_view ComparatorSymbol(Comparator cmp) {
  switch (cmp) {
    case Comparator::kEq:
      return "=";
    case Comparator::kNeq:
      return "!=";
    case Comparator::kLe:
      return "<=";
    case Comparator::kGt:
      return ">";
  }
  return "?";
}

Comparator ParseComparator(std::string_view symbol) {
  if (symbol == "=" || symbol == "==") return Comparator::kEq;
  if (symbol == "!=") return Comparator::kNeq;
  if (symbol == "<=") return Comparator::kLe;
  if (symbol == ">") return Comparator::kGt;
  throw std::invalid_argument("unknown comparator '" + std::string(symbol) +
                              "' (expected =, !=, <= or >)");
}

Comparator Negate(Comparator cmp) {
  switch (cmp) {
    case Comparator::kEq:
      return Comparator::kNeq;
    case Comparator::kNeq:
      return Comparator::kEq;
    case Comparator::kLe:
      return Comparator::kGt;
    case Comparator::kGt:
      return Comparator::kLe;
  }
  return cmp;
}

Predicate Predicate::Make(const Universe& universe, std::string_view property,
                          Comparator comparator, const Value& value) {
  const PropertyIndex p = universe.index_of(property);
  if ((comparator == Comparator::kLe || comparator == Comparator::kGt) &&
      universe.property(p).kind != PropertyKind::kOrdered) {
    throw std::invalid_argument("comparator " +
                                std::string(ComparatorSymbol(comparator)) +
                                " needs an ordered property; '" +
                                std::string(property) + "' is categorical");
  }
  return {p, comparator, universe.value_index(p, value)};
}

Configuration Configuration::FromNamed(
    const Universe& universe,
    const std::vector<std::pair<std::string, Value>>& assignments) {
  std::vector<ValueIndex> values(universe.size());
  std::vector<bool> seen(universe.size(), false);
  for (const auto& [name, value] : assignments) {
    const PropertyIndex p = universe.index_of(name);
    if (seen[p]) {
      throw std::invalid_argument("property '" + name + "' assigned twice");
    }
    seen[p] = true;
    values[p] = universe.value_index(p, value);
  }
  for (PropertyIndex p = 0; p < universe.size(); ++p) {
    if (!seen[p]) {
      throw std::invalid_argument("configuration does not assign property '" +
                                  universe.property(p).name + "'");
    }
  }
  return Configuration(std::move(values));
}

std::size_t ConfigurationHash::operator()(const Configuration& config) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (ValueIndex v : config.values()) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Conjunction::Conjunction(std::vector<Predicate> predicates)
    : predicates_(std::move(predicates)) {
  std::sort(predicates_.begin(), predicates_.end());
  predicates_.erase(std::unique(predicates_.begin(), predicates_.end()),
                    predicates_.end());
}

bool Conjunction::IsSatisfiable(const Universe& universe) const {
  for (const Predicate& pred : predicates_) {
    if (pred.property >= universe.size() ||
        pred.value >= universe.value_count(pred.property)) {
      return false;
    }
  }
  return !Box(universe, *this).empty();
}

bool Conjunction::IsProperSubsetOf(const Conjunction& other) const {
  return size() < other.size() &&
         std::includes(other.predicates_.begin(), other.predicates_.end(),
                       predicates_.begin(), predicates_.end());
}

std::string_view OutcomeName(Outcome outcome) {
  return outcome == Outcome::kSucceed ? "succeed" : "fail";
}

Outcome ParseOutcome(std::string_view name) {
  if (name == "succeed") return Outcome::kSucceed;
  if (name == "fail") return Outcome::kFail;
  throw std::invalid_argument("unknown outcome '" + std::string(name) + "'");
}

std::string_view OriginName(Origin origin) {
  switch (origin) {
    case Origin::kSeed:
      return "seed";
    case Origin::kInitialDesign:
      return "initial_design";
    case Origin::kProbe:
      return "probe";
  }
  return "seed";
}

Origin ParseOrigin(std::string_view name) {
  if (name == "seed") return Origin::kSeed;
  if (name == "initial_design") return Origin::kInitialDesign;
  if (name == "probe") return Origin::kProbe;
  throw std::invalid_argument("unknown origin '" + std::string(name) + "'");
}

std::string_view FailureKindName(FailureKind kind) {
  switch (kind) {
    case FailureKind::kCrash:
      return "crash";
    case FailureKind::kBadOutput:
      return "bad_output";
    case FailureKind::kTimeout:
      return "timeout";
  }
  return "crash";
}

FailureKind ParseFailureKind(std::string_view name) {
  if (name == "crash") return FailureKind::kCrash;
  if (name == "bad_output") return FailureKind::kBadOutput;
  if (name == "timeout") return FailureKind::kTimeout;
  throw std::invalid_argument("unknown failure kind '" + std::string(name) +
                              "'");
}

bool Satisfies(const Configuration& config, const Predicate& predicate) {
  const ValueIndex actual = config.at(predicate.property);
  switch (predicate.comparator) {
    case Comparator::kEq:
      return actual == predicate.value;
    case Comparator::kNeq:
      return actual != predicate.value;
    case Comparator::kLe:
      return actual <= predicate.value;
    case Comparator::kGt:
      return actual > predicate.value;
  }
  return false;
}

bool Satisfies(const Configuration& config, const Conjunction& conjunction) {
  return std::all_of(
      conjunction.begin(), conjunction.end(),
      [&](const Predicate& pred) { return Satisfies(config, pred); });
}

bool Satisfies(const Configuration& config, const Explanation& explanation) {
  return std::any_of(
      explanation.begin(), explanation.end(),
      [&](const Conjunction& conj) { return Satisfies(config, conj); });
}

std::uint64_t ProductCount(const Universe& universe,
                           const Conjunction& conjunction) {
  return Box(universe, conjunction).count();
}

void ForEachConfiguration(
    const Universe& universe, const Conjunction& filter,
    const std::function<bool(const Configuration&)>& visit) {
  if (universe.empty()) return;
  ForEachInBox(Box(universe, filter), visit);
}

std::string Describe(const Universe& universe, const Predicate& predicate) {
  return universe.property(predicate.property).name + " " +
         std::string(ComparatorSymbol(predicate.comparator)) + " " +
         universe.values(predicate.property)[predicate.value].ToString();
}

std::string Describe(const Universe& universe, const Conjunction& conjunction) {
  if (conjunction.empty()) return "TRUE";
  std::string out;
  for (const Predicate& pred : conjunction) {
    if (!out.empty()) out += " AND ";
    out += Describe(universe, pred);
  }
  return conjunction.size() > 1 ? "(" + out + ")" : out;
}

std::string Describe(const Universe& universe, const Explanation& explanation) {
  if (explanation.empty()) return "FALSE";
  std::string out;
  for (const Conjunction& conj : explanation) {
    if (!out.empty()) out += " OR ";
    out += Describe(universe, conj);
  }
  return out;
}

}  // namespace pipedebug
