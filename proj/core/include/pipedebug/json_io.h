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

// JSON forms of the domain vocabulary.
//
// Universe file:
//   {"properties":[{"name":str,"kind":"categorical"|"ordered","values":[...]}]}
// Explanation:
//   [[{"property":str,"comparator":"="|"!="|"<="|">","value":...}, ...], ...]
// Configuration (also the executor child's stdin):
//   {"<property>": <value>, ...}

#ifndef PIPEDEBUG_JSON_IO_H_
#define PIPEDEBUG_JSON_IO_H_

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "pipedebug/model.h"
#include "pipedebug/universe.h"
#include "pipedebug/value.h"

namespace pipedebug {

// A malformed input file. what() reads "<file>:<line>: <message>".
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string file, std::size_t line, const std::string& message);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

nlohmann::json ValueToJson(const Value& value);
// Throws std::invalid_argument unless `json` is a string or a finite number.
Value ValueFromJson(const nlohmann::json& json);

nlohmann::json UniverseToJson(const Universe& universe);
Universe UniverseFromJson(const nlohmann::json& json);

nlohmann::json PredicateToJson(const Universe& universe, const Predicate& pred);
Predicate PredicateFromJson(const Universe& universe, const nlohmann::json& json);

nlohmann::json ConjunctionToJson(const Universe& universe,
                                 const Conjunction& conjunction);
Conjunction ConjunctionFromJson(const Universe& universe,
                                const nlohmann::json& json);

nlohmann::json ExplanationToJson(const Universe& universe,
                                 const Explanation& explanation);
Explanation ExplanationFromJson(const Universe& universe,
                                const nlohmann::json& json);

nlohmann::json ConfigurationToJson(const Universe& universe,
                                   const Configuration& config);
Configuration ConfigurationFromJson(const Universe& universe,
                                    const nlohmann::json& json);

// Whole-file helpers. Errors carry the file name and the line number.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
Universe ReadUniverseFile(const std::filesystem::path& path);
Explanation ReadExplanationFile(const Universe& universe,
                                const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace pipedebug

#endif  // PIPEDEBUG_JSON_IO_H_
