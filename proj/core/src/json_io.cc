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

#include "pipedebug/json_io.h"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pipedebug {
namespace {

using nlohmann::json;

std::size_t LineOfOffset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string(), 0, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PropertyKind ParseKind(const std::string& kind) {
  if (kind == "categorical") return PropertyKind::kCategorical;
  if (kind == "ordered") return PropertyKind::kOrdered;
  throw std::invalid_argument("unknown property kind '" + kind +
                              "' (expected categorical or ordered)");
}

}  // namespace

FormatError::FormatError(std::string file, std::size_t line,
                         const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
      file_(std::move(file)),
      line_(line) {}

json ValueToJson(const Value& value) {
  if (value.is_number()) return value.number();
  return value.text();
}

Value ValueFromJson(const json& j) {
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_number()) return Value(j.get<double>());
  throw std::invalid_argument("property values must be strings or numbers, got " +
                              j.dump());
}

json UniverseToJson(const Universe& universe) {
  json props = json::array();
  for (PropertyIndex p = 0; p < universe.size(); ++p) {
    json values = json::array();
    for (const Value& v : universe.values(p)) values.push_back(ValueToJson(v));
    props.push_back({{"name", universe.property(p).name},
                     {"kind", PropertyKindName(universe.property(p).kind)},
                     {"values", std::move(values)}});
  }
  return {{"properties", std::move(props)}};
}

Universe UniverseFromJson(const json& j) {
  if (!j.is_object() || !j.contains("properties") ||
      !j.at("properties").is_array()) {
    throw std::invalid_argument(
        "universe must be an object with a \"properties\" array");
  }
  std::vector<PropertySpec> specs;
  for (const json& entry : j.at("properties")) {
    if (!entry.is_object() || !entry.contains("name") ||
        !entry.contains("values") || !entry.at("values").is_array()) {
      throw std::invalid_argument(
          "each property needs a \"name\" and a \"values\" array");
    }
    PropertySpec spec;
    spec.name = entry.at("name").get<std::string>();
    spec.kind = ParseKind(entry.value("kind", std::string("categorical")));
    for (const json& v : entry.at("values")) {
      spec.values.push_back(ValueFromJson(v));
    }
    specs.push_back(std::move(spec));
  }
  return Universe(std::move(specs));
}

json PredicateToJson(const Universe& universe, const Predicate& pred) {
  return {{"property", universe.property(pred.property).name},
          {"comparator", ComparatorSymbol(pred.comparator)},
          {"value", ValueToJson(universe.values(pred.property)[pred.value])}};
}

Predicate PredicateFromJson(const Universe& universe, const json& j) {
  if (!j.is_object() || !j.contains("property") || !j.contains("comparator") ||
      !j.contains("value")) {
    throw std::invalid_argument(
        "predicate needs \"property\", \"comparator\" and \"value\"");
  }
  return Predicate::Make(universe, j.at("property").get<std::string>(),
                         ParseComparator(j.at("comparator").get<std::string>()),
                         ValueFromJson(j.at("value")));
}

json ConjunctionToJson(const Universe& universe, const Conjunction& conj) {
  json out = json::array();
  for (const Predicate& pred : conj) out.push_back(PredicateToJson(universe, pred));
  return out;
}

Conjunction ConjunctionFromJson(const Universe& universe, const json& j) {
  if (!j.is_array()) {
    throw std::invalid_argument("conjunction must be an array of predicates");
  }
  std::vector<Predicate> preds;
  for (const json& p : j) preds.push_back(PredicateFromJson(universe, p));
  Conjunction conj(std::move(preds));
  if (!conj.IsSatisfiable(universe)) {
    throw std::invalid_argument("conjunction " + Describe(universe, conj) +
                                " is unsatisfiable over the universe");
  }
  return conj;
}

json ExplanationToJson(const Universe& universe, const Explanation& expl) {
  json out = json::array();
  for (const Conjunction& c : expl) out.push_back(ConjunctionToJson(universe, c));
  return out;
}

Explanation ExplanationFromJson(const Universe& universe, const json& j) {
  if (!j.is_array()) {
    throw std::invalid_argument("explanation must be an array of conjunctions");
  }
  Explanation out;
  for (const json& c : j) out.push_back(ConjunctionFromJson(universe, c));
  return out;
}

json ConfigurationToJson(const Universe& universe, const Configuration& config) {
  json out = json::object();
  for (PropertyIndex p = 0; p < universe.size(); ++p) {
    out[universe.property(p).name] = ValueToJson(universe.values(p)[config.at(p)]);
  }
  return out;
}

Configuration ConfigurationFromJson(const Universe& universe, const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("configuration must be a JSON object");
  }
  std::vector<std::pair<std::string, Value>> named;
  for (auto it = j.begin(); it != j.end(); ++it) {
    named.emplace_back(it.key(), ValueFromJson(it.value()));
  }
  return Configuration::FromNamed(universe, named);
}

json ReadJsonFile(const std::filesystem::path& path) {
  const std::string text = ReadAll(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string(), LineOfOffset(text, e.byte), e.what());
  }
}

Universe ReadUniverseFile(const std::filesystem::path& path) {
  const json j = ReadJsonFile(path);
  try {
    return UniverseFromJson(j);
  } catch (const std::exception& e) {
    throw FormatError(path.string(), 1, e.what());
  }
}

Explanation ReadExplanationFile(const Universe& universe,
                                const std::filesystem::path& path) {
  const json j = ReadJsonFile(path);
  try {
    return ExplanationFromJson(universe, j);
  } catch (const std::exception& e) {
    throw FormatError(path.string(), 1, e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

}  // namespace pipedebug
