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

#ifndef PIPEDEBUG_VALUE_H_
#define PIPEDEBUG_VALUE_H_

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>

namespace pipedebug {

// A property value: either a number or a string. Numbers and strings never
// compare equal to each other. In the total order used for sorting, every
// number precedes every string.
class Value {
 public:
  Value() : rep_(0.0) {}
  Value(double number);  // NOLINT(google-explicit-constructor)
  Value(int number) : Value(static_cast<double>(number)) {}  // NOLINT
  Value(std::string text) : rep_(std::move(text)) {}  // NOLINT
  Value(const char* text) : rep_(std::string(text)) {}  // NOLINT

  bool is_number() const { return std::holds_alternative<double>(rep_); }
  bool is_string() const { return !is_number(); }

  // Precondition: is_number().
  double number() const { return std::get<double>(rep_); }
  // Precondition: is_string().
  const std::string& text() const { return std::get<std::string>(rep_); }

  // Human-readable form: numbers in shortest round-trip notation, strings
  // verbatim.
  std::string ToString() const;

  // Parses `text` as a finite number if the whole string is numeric.
  static std::optional<double> ParseNumber(std::string_view text);

  friend bool operator==(const Value& a, const Value& b) {
    return a.rep_ == b.rep_;
  }
  friend bool operator<(const Value& a, const Value& b);

 private:
  std::variant<double, std::string> rep_;
};

std::ostream& operator<<(std::ostream& os, const Value& value);

}  // namespace pipedebug

#endif  // PIPEDEBUG_VALUE_H_
