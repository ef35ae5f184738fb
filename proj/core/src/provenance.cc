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

#include "pipedebug/provenance.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <system_error>

#include "pipedebug/json_io.h"

namespace pipedebug {

using nlohmann::json;

std::string CurrentTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Evidence::Evidence(std::span<const Instance> instances) {
  for (const Instance& inst : instances) {
    auto [it, inserted] = position_.try_emplace(inst.config, instances_.size());
    if (inserted) {
      instances_.push_back(inst);
      continue;
    }
    Instance& kept = instances_[it->second];
    if (kept.outcome != inst.outcome) {
      if (std::find(nondeterministic_.begin(), nondeterministic_.end(),
                    inst.config) == nondeterministic_.end()) {
        nondeterministic_.push_back(inst.config);
      }
      if (inst.outcome == Outcome::kFail) kept = inst;
    }
  }
}

bool Evidence::Contains(const Configuration& config) const {
  return position_.contains(config);
}

std::optional<Outcome> Evidence::OutcomeOf(const Configuration& config) const {
  auto it = position_.find(config);
  if (it == position_.end()) return std::nullopt;
  return instances_[it->second].outcome;
}

std::size_t Evidence::CountSatisfying(const Box& box) const {
  return static_cast<std::size_t>(
      std::count_if(instances_.begin(), instances_.end(),
                    [&](const Instance& i) { return box.Contains(i.config); }));
}

bool Evidence::IsDefinitive(const Box& box) const {
  bool any_fail = false;
  for (const Instance& inst : instances_) {
    if (!box.Contains(inst.config)) continue;
    if (inst.outcome == Outcome::kSucceed) return false;
    any_fail = true;
  }
  return any_fail;
}

ProvenanceStore::ProvenanceStore(Universe universe)
    : universe_(std::move(universe)), clock_(CurrentTimestamp) {}

ProvenanceStore::ProvenanceStore(const ProvenanceStore& other)
    : universe_(other.universe_) {
  std::shared_lock lock(other.mu_);
  instances_ = other.instances_;
  timestamps_ = other.timestamps_;
  index_ = other.index_;
  clock_ = other.clock_;
  // The copy is detached from the log file.
}

void ProvenanceStore::AttachLog(const std::filesystem::path& path) {
  std::unique_lock lock(mu_);
  log_path_ = path;
}

void ProvenanceStore::SetClock(std::function<std::string()> clock) {
  std::unique_lock lock(mu_);
  clock_ = std::move(clock);
}

json ProvenanceStore::InstanceToJson(const Instance& inst,
                                     const std::string& ts) const {
  json j = {{"run_id", inst.run_id},
            {"config", ConfigurationToJson(universe_, inst.config)},
            {"score", inst.score ? json(*inst.score) : json(nullptr)},
            {"outcome", OutcomeName(inst.outcome)},
            {"origin", OriginName(inst.origin)},
            {"ts", ts}};
  if (inst.failure) j["failure"] = FailureKindName(*inst.failure);
  return j;
}

void ProvenanceStore::Append(Instance instance) {
  Append(std::span<const Instance>(&instance, 1));
}

void ProvenanceStore::Append(std::span<const Instance> batch) {
  std::vector<Instance> checked(batch.begin(), batch.end());
  for (Instance& inst : checked) {
    if (inst.config.size() != universe_.size()) {
      throw std::invalid_argument("instance " + inst.run_id +
                                  " does not assign every property");
    }
    for (PropertyIndex p = 0; p < universe_.size(); ++p) {
      if (inst.config[p] >= universe_.value_count(p)) {
        throw std::invalid_argument("instance " + inst.run_id +
                                    " uses a value outside the universe");
      }
    }
    if (!inst.score) inst.outcome = Outcome::kFail;
  }
  std::unique_lock lock(mu_);
  std::vector<std::string> stamps;
  std::string lines;
  for (const Instance& inst : checked) {
    stamps.push_back(clock_ ? clock_() : std::string());
    lines += InstanceToJson(inst, stamps.back()).dump() + "\n";
  }
  if (!log_path_.empty() && !lines.empty()) {
    const int fd = ::open(log_path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC,
                          0644);
    if (fd < 0) {
      throw std::system_error(errno, std::generic_category(),
                              "open " + log_path_.string());
    }
    const ssize_t n = ::write(fd, lines.data(), lines.size());
    const int err = errno;
    ::close(fd);
    if (n != static_cast<ssize_t>(lines.size())) {
      throw std::system_error(n < 0 ? err : EIO, std::generic_category(),
                              "append to " + log_path_.string());
    }
  }
  for (std::size_t i = 0; i < checked.size(); ++i) {
    index_[checked[i].config].push_back(checked[i].run_id);
    instances_.push_back(std::move(checked[i]));
    timestamps_.push_back(std::move(stamps[i]));
  }
}

std::size_t ProvenanceStore::size() const {
  std::shared_lock lock(mu_);
  return instances_.size();
}

std::vector<Instance> ProvenanceStore::instances() const {
  std::shared_lock lock(mu_);
  return instances_;
}

std::vector<Instance> ProvenanceStore::Query(
    const Conjunction& conjunction, std::optional<Outcome> outcome) const {
  std::shared_lock lock(mu_);
  std::vector<Instance> out;
  for (const Instance& inst : instances_) {
    if (outcome && inst.outcome != *outcome) continue;
    if (Satisfies(inst.config, conjunction)) out.push_back(inst);
  }
  return out;
}

bool ProvenanceStore::Contains(const Configuration& config) const {
  std::shared_lock lock(mu_);
  return index_.contains(config);
}

Evidence ProvenanceStore::Snapshot() const {
  std::shared_lock lock(mu_);
  return Evidence(instances_);
}

Universe ProvenanceStore::ObservedUniverse() const {
  std::shared_lock lock(mu_);
  if (instances_.empty()) {
    throw std::logic_error(
        "the provenance store is empty; supply a universe file or seed runs");
  }
  std::vector<PropertySpec> specs;
  for (PropertyIndex p = 0; p < universe_.size(); ++p) {
    std::vector<bool> used(universe_.value_count(p), false);
    for (const Instance& inst : instances_) used[inst.config[p]] = true;
    PropertySpec spec{universe_.property(p).name, universe_.property(p).kind, {}};
    for (ValueIndex v = 0; v < used.size(); ++v) {
      if (used[v]) spec.values.push_back(universe_.values(p)[v]);
    }
    specs.push_back(std::move(spec));
  }
  return Universe(std::move(specs));
}

std::string ProvenanceStore::Serialize() const {
  std::shared_lock lock(mu_);
  std::string out;
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    out += InstanceToJson(instances_[i], timestamps_[i]).dump() + "\n";
  }
  return out;
}

bool operator==(const ProvenanceStore& a, const ProvenanceStore& b) {
  if (&a == &b) return true;
  std::shared_lock la(a.mu_);
  std::shared_lock lb(b.mu_);
  return a.universe_ == b.universe_ && a.instances_ == b.instances_;
}

struct ProvenanceLoader {
  static void Push(ProvenanceStore& store, Instance inst, std::string ts) {
    store.index_[inst.config].push_back(inst.run_id);
    store.instances_.push_back(std::move(inst));
    store.timestamps_.push_back(std::move(ts));
  }
};

namespace {

struct RawLine {
  std::size_t line;
  json object;
};

// Collects every property's observed values, converting numeric strings
// when the whole column is numeric.
Universe ObservedFromLines(const std::vector<RawLine>& lines,
                           const Universe* declared) {
  std::vector<std::string> names;
  std::vector<std::vector<Value>> columns;
  for (const RawLine& raw : lines) {
    for (auto it = raw.object.at("config").begin();
         it != raw.object.at("config").end(); ++it) {
      auto pos = std::find(names.begin(), names.end(), it.key());
      if (pos == names.end()) {
        names.push_back(it.key());
        columns.emplace_back();
        pos = names.end() - 1;
      }
      columns[pos - names.begin()].push_back(ValueFromJson(it.value()));
    }
  }
  std::vector<PropertySpec> specs;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::vector<Value> values = std::move(columns[i]);
    const bool numeric =
        std::all_of(values.begin(), values.end(), [](const Value& v) {
          return v.is_number() || Value::ParseNumber(v.text());
        });
    if (numeric) {
      for (Value& v : values) {
        if (v.is_string()) v = Value(*Value::ParseNumber(v.text()));
      }
    }
    PropertyKind kind = PropertyKind::kCategorical;
    if (declared) {
      if (auto p = declared->find(names[i])) {
        kind = declared->property(*p).kind;
        for (Value& v : values) v = declared->Canonicalize(*p, v);
      }
    }
    std::vector<Value> distinct;
    for (Value& v : values) {
      if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) {
        distinct.push_back(std::move(v));
      }
    }
    specs.push_back({names[i], kind, std::move(distinct)});
  }
  return Universe(std::move(specs));
}

}  // namespace

LoadedProvenance ParseProvenance(const std::string& text,
                                 const std::string& source_name,
                                 const Universe* declared) {
  std::vector<RawLine> lines;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(source_name, number, e.what());
    }
    if (!object.is_object() || !object.contains("config") ||
        !object.at("config").is_object() || !object.contains("outcome")) {
      throw FormatError(source_name, number,
                        "expected an object with \"config\" and \"outcome\"");
    }
    lines.push_back({number, std::move(object)});
  }
  if (lines.empty() && !declared) {
    throw FormatError(source_name, 0,
                      "the provenance log is empty; supply a universe file or "
                      "seed runs");
  }

  LoadedProvenance out;
  Universe universe = declared ? *declared : Universe();
  if (!lines.empty()) {
    try {
      const Universe observed = ObservedFromLines(lines, declared);
      if (declared) {
        for (const std::string& added : universe.MergeFrom(observed)) {
          out.notes.push_back("value outside the declared universe: " + added);
        }
      } else {
        universe = observed;
      }
    } catch (const std::exception& e) {
      throw FormatError(source_name, lines.front().line, e.what());
    }
  }

  out.store = std::make_unique<ProvenanceStore>(universe);
  for (const RawLine& raw : lines) {
    try {
      const json& j = raw.object;
      Instance inst;
      inst.config = ConfigurationFromJson(universe, j.at("config"));
      if (j.contains("score") && !j.at("score").is_null()) {
        inst.score = j.at("score").get<double>();
      }
      inst.outcome = ParseOutcome(j.at("outcome").get<std::string>());
      if (!inst.score) inst.outcome = Outcome::kFail;
      inst.run_id = j.value("run_id", "line-" + std::to_string(raw.line));
      inst.origin = ParseOrigin(j.value("origin", std::string("seed")));
      if (j.contains("failure") && !j.at("failure").is_null()) {
        inst.failure = ParseFailureKind(j.at("failure").get<std::string>());
      }
      ProvenanceLoader::Push(*out.store, std::move(inst),
                             j.value("ts", std::string()));
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError(source_name, raw.line, e.what());
    }
  }
  return out;
}

LoadedProvenance LoadProvenance(const std::filesystem::path& path,
                                const Universe* declared) {
  std::string text;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path.string(), 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  return ParseProvenance(text, path.string(), declared);
}

}  // namespace pipedebug
