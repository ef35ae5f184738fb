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

#include "pipedebug/value.h"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace pipedebug {

Value::Value(double number) : rep_(number) {
  if (!std::isfinite(number)) {
    throw std::invalid_argument("property values must be finite numbers");
  }
  // Fold -0.0 into 0.0 so equality and hashing agree.
  if (number == 0.0) rep_ = 0.0;
}

std::string Value::ToString() const {
  if (is_string()) return text();
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), number());
  if (ec != std::errc()) return std::to_string(number());
  return std::string(buf, end);
}

std::optional<double> Value::ParseNumber(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double out = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || end != text.data() + text.size() ||
      !std::isfinite(out)) {
    return std::nullopt;
  }
  return out;
}

bool operator<(const Value& a, const Value& b) {
  if (a.is_number() != b.is_number()) return a.is_number();
  if (a.is_number()) return a.number() < b.number();
  return a.text() < b.text();
}

std::ostream& operator<<(std::ostream& os, const Value& value) {
  return os << value.ToString();
}

}  // namespace pipedebug
