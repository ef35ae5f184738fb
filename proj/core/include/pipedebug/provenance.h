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

// Append-only store of executed pipeline instances.
//
// On disk the store is JSON Lines, one instance per line:
//
//   {"run_id":str,"config":{...},"score":num|null,"outcome":"succeed"|"fail",
//    "origin":"seed"|"initial_design"|"probe","ts":iso8601[,"failure":str]}
//
// Every line is written with a single write(2) on an O_APPEND descriptor, so
// a crash leaves either the whole line or nothing.

#ifndef PIPEDEBUG_PROVENANCE_H_
#define PIPEDEBUG_PROVENANCE_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipedebug/box.h"
#include "pipedebug/model.h"
#include "pipedebug/universe.h"

namespace pipedebug {

// Immutable view of the store used for reasoning: one entry per distinct
// configuration, in order of first appearance. A configuration observed
// with both outcomes is kept as FAIL.
class Evidence {
 public:
  Evidence() = default;
  explicit Evidence(std::span<const Instance> instances);

  const std::vector<Instance>& instances() const { return instances_; }
  std::size_t size() const { return instances_.size(); }
  bool Contains(const Configuration& config) const;
  std::optional<Outcome> OutcomeOf(const Configuration& config) const;
  // Configurations observed with both outcomes.
  const std::vector<Configuration>& nondeterministic() const {
    return nondeterministic_;
  }

  std::size_t CountSatisfying(const Box& box) const;
  // No SUCCEED instance inside the box and at least one FAIL instance.
  bool IsDefinitive(const Box& box) const;

 private:
  std::vector<Instance> instances_;
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> position_;
  std::vector<Configuration> nondeterministic_;
};

class ProvenanceStore {
 public:
  explicit ProvenanceStore(Universe universe);
  ProvenanceStore(const ProvenanceStore& other);
  ProvenanceStore& operator=(const ProvenanceStore&) = delete;

  const Universe& universe() const { return universe_; }

  // Persists subsequent appends to `path` (created if missing). Existing
  // contents are not read; use Load for that.
  void AttachLog(const std::filesystem::path& path);
  // Overrides the timestamp source (ISO 8601 strings); for tests.
  void SetClock(std::function<std::string()> clock);

  // Validates `instance` against the universe, forces FAIL when the score is
  // absent, writes the log line (if attached) and then makes it visible.
  // Throws std::invalid_argument on invalid instances and
  // std::system_error on I/O failure; in both cases nothing is stored.
  void Append(Instance instance);
  void Append(std::span<const Instance> instances);

  std::size_t size() const;
  std::vector<Instance> instances() const;

  // Stored instances satisfying `conjunction` (and `outcome`, when given),
  // in insertion order.
  std::vector<Instance> Query(const Conjunction& conjunction,
                              std::optional<Outcome> outcome) const;
  bool Contains(const Configuration& config) const;

  Evidence Snapshot() const;

  // Per-property sets of values that occur in stored configurations.
  // Throws std::logic_error when the store is empty.
  Universe ObservedUniverse() const;

  // The whole store as JSON Lines.
  std::string Serialize() const;

  friend bool operator==(const ProvenanceStore& a, const ProvenanceStore& b);

 private:
  nlohmann::json InstanceToJson(const Instance& instance,
                                const std::string& ts) const;

  Universe universe_;
  mutable std::shared_mutex mu_;
  std::vector<Instance> instances_;
  std::vector<std::string> timestamps_;
  std::unordered_map<Configuration, std::vector<std::string>, ConfigurationHash>
      index_;
  std::filesystem::path log_path_;
  std::function<std::string()> clock_;

  friend struct ProvenanceLoader;
};

struct LoadedProvenance {
  std::unique_ptr<ProvenanceStore> store;
  // Values found in the log but missing from the declared universe.
  std::vector<std::string> notes;
};

// Reads a provenance log. The store's universe is `declared` (if any)
// extended with every value observed in the log. With no declared universe
// an empty or missing log is an error. Malformed lines raise FormatError
// with the offending line number.
LoadedProvenance LoadProvenance(const std::filesystem::path& path,
                                const Universe* declared);
LoadedProvenance ParseProvenance(const std::string& text,
                                 const std::string& source_name,
                                 const Universe* declared);

std::string CurrentTimestamp();

}  // namespace pipedebug

#endif  // PIPEDEBUG_PROVENANCE_H_
