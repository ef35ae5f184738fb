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

#include "pipedebug/universe.h"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pipedebug {
namespace {

// True when every value is a number or parses as one.
bool AllNumeric(const std::vector<Value>& values) {
  return std::all_of(values.begin(), values.end(), [](const Value& v) {
    return v.is_number() || Value::ParseNumber(v.text()).has_value();
  });
}

Value ToNumber(const Value& v) {
  if (v.is_number()) return v;
  return Value(*Value::ParseNumber(v.text()));
}

}  // namespace

std::string_view PropertyKindName(PropertyKind kind) {
  return kind == PropertyKind::kOrdered ? "ordered" : "categorical";
}

Universe::Universe(std::vector<PropertySpec> specs) {
  std::sort(specs.begin(), specs.end(),
            [](const PropertySpec& a, const PropertySpec& b) {
              return a.name < b.name;
            });
  for (std::size_t i = 0; i < specs.size(); ++i) {
    PropertySpec& spec = specs[i];
    if (spec.name.empty()) {
      throw std::invalid_argument("property name must be nonempty");
    }
    if (!properties_.empty() && properties_.back().name == spec.name) {
      throw std::invalid_argument("duplicate property '" + spec.name + "'");
    }
    if (spec.values.empty()) {
      throw std::invalid_argument("property '" + spec.name +
                                  "' has no values");
    }
    std::vector<Value> values = std::move(spec.values);
    const bool numeric = AllNumeric(values);
    if (numeric) {
      for (Value& v : values) v = ToNumber(v);
    }
    // Ordered string properties keep the declared order as their order.
    if (numeric || spec.kind == PropertyKind::kCategorical) {
      std::sort(values.begin(), values.end());
    }
    for (std::size_t a = 0; a < values.size(); ++a) {
      for (std::size_t b = a + 1; b < values.size(); ++b) {
        if (values[a] == values[b]) {
          throw std::invalid_argument("property '" + spec.name +
                                      "' lists value '" +
                                      values[a].ToString() + "' twice");
        }
      }
    }
    properties_.push_back({std::move(spec.name), spec.kind});
    values_.push_back(std::move(values));
  }
}

std::optional<PropertyIndex> Universe::find(std::string_view name) const {
  auto it = std::lower_bound(
      properties_.begin(), properties_.end(), name,
      [](const Property& p, std::string_view n) { return p.name < n; });
  if (it == properties_.end() || it->name != name) return std::nullopt;
  return static_cast<PropertyIndex>(it - properties_.begin());
}

PropertyIndex Universe::index_of(std::string_view name) const {
  if (auto p = find(name)) return *p;
  throw std::out_of_range("unknown property '" + std::string(name) + "'");
}

bool Universe::is_numeric(PropertyIndex p) const {
  const auto& vals = values_.at(p);
  return !vals.empty() && vals.front().is_number();
}

Value Universe::Canonicalize(PropertyIndex p, const Value& value) const {
  if (value.is_string() && is_numeric(p)) {
    if (auto n = Value::ParseNumber(value.text())) return Value(*n);
  }
  return value;
}

std::optional<ValueIndex> Universe::find_value(PropertyIndex p,
                                               const Value& value) const {
  const Value canonical = Canonicalize(p, value);
  const auto& vals = values_.at(p);
  auto it = std::find(vals.begin(), vals.end(), canonical);
  if (it == vals.end()) return std::nullopt;
  return static_cast<ValueIndex>(it - vals.begin());
}

ValueIndex Universe::value_index(PropertyIndex p, const Value& value) const {
  if (auto v = find_value(p, value)) return *v;
  throw std::out_of_range("value '" + value.ToString() +
                          "' is not in the universe of property '" +
                          properties_.at(p).name + "'");
}

std::uint64_t Universe::product_size() const {
  std::uint64_t total = 1;
  for (const auto& vals : values_) {
    if (total > std::numeric_limits<std::uint64_t>::max() / vals.size()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= vals.size();
  }
  return total;
}

std::vector<PropertySpec> Universe::specs() const {
  std::vector<PropertySpec> out;
  for (std::size_t p = 0; p < properties_.size(); ++p) {
    out.push_back({properties_[p].name, properties_[p].kind, values_[p]});
  }
  return out;
}

std::vector<std::string> Universe::MergeFrom(const Universe& other) {
  std::vector<std::string> added;
  std::vector<PropertySpec> merged = specs();
  for (PropertyIndex q = 0; q < other.size(); ++q) {
    const Property& prop = other.property(q);
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const PropertySpec& s) {
                             return s.name == prop.name;
                           });
    if (it == merged.end()) {
      merged.push_back({prop.name, prop.kind,
                        std::vector<Value>(other.values(q).begin(),
                                           other.values(q).end())});
      added.push_back("property '" + prop.name + "'");
      continue;
    }
    const PropertyIndex p = *find(prop.name);
    for (const Value& v : other.values(q)) {
      if (!find_value(p, v)) {
        it->values.push_back(Canonicalize(p, v));
        added.push_back(prop.name + " = " + v.ToString());
      }
    }
  }
  if (!added.empty()) *this = Universe(std::move(merged));
  return added;
}

ValueSet::ValueSet(std::size_t universe_size, bool full)
    : size_(universe_size), words_((universe_size + 63) / 64, 0) {
  if (full) {
    for (std::size_t v = 0; v < universe_size; ++v) {
      insert(static_cast<ValueIndex>(v));
    }
  }
}

ValueSet ValueSet::Single(std::size_t universe_size, ValueIndex v) {
  ValueSet s(universe_size);
  s.insert(v);
  return s;
}

std::size_t ValueSet::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

bool ValueSet::empty() const {
  return std::all_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

bool ValueSet::IsSubsetOf(const ValueSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

ValueIndex ValueSet::front() const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i]) {
      return static_cast<ValueIndex>(i * 64 + std::countr_zero(words_[i]));
    }
  }
  throw std::logic_error("front() of empty ValueSet");
}

ValueIndex ValueSet::back() const {
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i]) {
      return static_cast<ValueIndex>(i * 64 + 63 - std::countl_zero(words_[i]));
    }
  }
  throw std::logic_error("back() of empty ValueSet");
}

std::vector<ValueIndex> ValueSet::members() const {
  std::vector<ValueIndex> out;
  for (std::size_t v = 0; v < size_; ++v) {
    if (contains(static_cast<ValueIndex>(v))) {
      out.push_back(static_cast<ValueIndex>(v));
    }
  }
  return out;
}

ValueSet& ValueSet::operator&=(const ValueSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

ValueSet& ValueSet::operator|=(const ValueSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

}  // namespace pipedebug
