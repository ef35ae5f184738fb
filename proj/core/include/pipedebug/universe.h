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

#ifndef PIPEDEBUG_UNIVERSE_H_
#define PIPEDEBUG_UNIVERSE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pipedebug/value.h"

namespace pipedebug {

// Index of a property inside a Universe. Properties are stored sorted by
// name, so index order is also canonical order.
using PropertyIndex = std::uint32_t;
// Index of a value inside one property's value list. For ordered
// properties index order is the property's total order.
using ValueIndex = std::uint32_t;

enum class PropertyKind { kCategorical, kOrdered };

std::string_view PropertyKindName(PropertyKind kind);

struct Property {
  std::string name;
  PropertyKind kind = PropertyKind::kCategorical;

  friend bool operator==(const Property&, const Property&) = default;
};

// A property together with its declared values, as written in a universe
// file. Input to the Universe constructor.
struct PropertySpec {
  std::string name;
  PropertyKind kind = PropertyKind::kCategorical;
  std::vector<Value> values;
};

// The finite search space: every property and the values it may take.
//
// Construction canonicalizes the input:
//   * properties are sorted by name;
//   * if every value of a property is a number or a numeric string, all of
//     them become numbers;
//   * numeric values (and categorical strings) are sorted ascending;
//     ordered string properties keep their declared order, which is their
//     total order.
// Throws std::invalid_argument on empty or duplicate names, empty value
// lists, or duplicate values.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<PropertySpec> specs);

  std::size_t size() const { return properties_.size(); }
  bool empty() const { return properties_.empty(); }

  const Property& property(PropertyIndex p) const { return properties_.at(p); }
  std::span<const Value> values(PropertyIndex p) const { return values_.at(p); }
  std::size_t value_count(PropertyIndex p) const { return values_.at(p).size(); }

  std::optional<PropertyIndex> find(std::string_view name) const;
  // Throws std::out_of_range naming the property when absent.
  PropertyIndex index_of(std::string_view name) const;

  // Maps `value` into this universe, converting numeric strings for
  // numeric properties. Returns nullopt when the value is not present.
  std::optional<ValueIndex> find_value(PropertyIndex p, const Value& value) const;
  // Throws std::out_of_range when the value is not present.
  ValueIndex value_index(PropertyIndex p, const Value& value) const;

  // Converts numeric strings to numbers when the property is numeric.
  Value Canonicalize(PropertyIndex p, const Value& value) const;
  bool is_numeric(PropertyIndex p) const;

  // Size of the Cartesian product, saturated at UINT64_MAX.
  std::uint64_t product_size() const;

  // Adds every value of `other` that is missing here. Properties absent from
  // this universe are added with `other`'s kind. Returns a description of
  // each value that was added (empty when `other` is a subset).
  std::vector<std::string> MergeFrom(const Universe& other);

  std::vector<PropertySpec> specs() const;

  friend bool operator==(const Universe&, const Universe&) = default;

 private:
  std::vector<Property> properties_;
  std::vector<std::vector<Value>> values_;
};

// A set of value indices of one property, as a small dynamic bitset.
class ValueSet {
 public:
  ValueSet() = default;
  explicit ValueSet(std::size_t universe_size, bool full = false);

  static ValueSet Single(std::size_t universe_size, ValueIndex v);

  std::size_t universe_size() const { return size_; }
  bool contains(ValueIndex v) const {
    return (words_[v >> 6] >> (v & 63)) & 1U;
  }
  void insert(ValueIndex v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void erase(ValueIndex v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }

  std::size_t count() const;
  bool empty() const;
  bool full() const { return count() == size_; }
  bool IsSubsetOf(const ValueSet& other) const;
  // Lowest / highest member; precondition: !empty().
  ValueIndex front() const;
  ValueIndex back() const;
  std::vector<ValueIndex> members() const;

  ValueSet& operator&=(const ValueSet& other);
  ValueSet& operator|=(const ValueSet& other);

  friend bool operator==(const ValueSet&, const ValueSet&) = default;
  friend auto operator<=>(const ValueSet& a, const ValueSet& b) {
    return a.words_ <=> b.words_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace pipedebug

#endif  // PIPEDEBUG_UNIVERSE_H_
