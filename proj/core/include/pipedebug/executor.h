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


// Black-box execution of pipeline configurations.
//
// Child protocol: the command runs under /bin/sh -c. Its standard input
// receives one JSON object mapping every property name to its value,
// followed by end-of-stream. It must print one JSON object containing the
// metric key on standard output and exit 0 once the evaluation completes,
// whatever the score. A nonzero exit is a crash, unparseable output or a
// missing/non-numeric metric is bad output, and running past the timeout
// kills the child's process group. All three are recorded as FAIL.

#ifndef PIPEDEBUG_EXECUTOR_H_
#define PIPEDEBUG_EXECUTOR_H_

#include <chrono>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipedebug/model.h"
#include "pipedebug/universe.h"

namespace pipedebug {

// Executor invocations allowed and spent. Lookups in the store are free.
struct Budget {
  static constexpr std::size_t kUnlimited =
      std::numeric_limits<std::size_t>::max();

  std::size_t max_runs = kUnlimited;
  std::size_t spent = 0;

  std::size_t remaining() const {
    return max_runs == kUnlimited ? kUnlimited : max_runs - spent;
  }
  bool exhausted() const { return remaining() == 0; }
};

enum class Direction { kGe, kLe };
Direction ParseDirection(std::string_view name);  // "ge" / "le"

struct EvaluationSpec {
  std::string metric_key = "score";
  double threshold = 0.0;
  Direction direction = Direction::kGe;

  // FAIL when `score` is absent.
  Outcome Evaluate(std::optional<double> score) const;
};

struct ExecutorConfig {
  std::string command;
  std::chrono::milliseconds timeout = std::chrono::seconds(300);
  std::size_t workers = 5;
  std::vector<std::string> env_passthrough;
};

// What a single execution produced, before evaluation.
struct RunResult {
  std::optional<double> score;
  std::optional<FailureKind> failure;
  std::string detail;
};

// Configuration problem (for example a missing command), as opposed to a
// pipeline failure. Aborts the batch.
class ExecutorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Executor {
 public:
  virtual ~Executor() = default;
  // May be called concurrently from up to workers() threads.
  virtual RunResult Run(const Configuration& config) = 0;
  virtual std::size_t workers() const = 0;
};

// Runs `configs` on at most executor.workers() threads and returns one
// Instance per configuration in input order, with origin `origin` and an
// empty run id. Charges `budget` for every configuration; throws
// std::logic_error without running anything if the batch exceeds what is
// left. The first ExecutorError is rethrown after all workers stop.
std::vector<Instance> RunBatch(Executor& executor,
                               std::span<const Configuration> configs,
                               const EvaluationSpec& eval, Budget& budget,
                               Origin origin = Origin::kProbe);

class SubprocessExecutor : public Executor {
 public:
  SubprocessExecutor(Universe universe, ExecutorConfig config,
                     std::string metric_key);

  RunResult Run(const Configuration& config) override;
  std::size_t workers() const override { return config_.workers; }

 private:
  Universe universe_;
  ExecutorConfig config_;
  std::string metric_key_;
  std::vector<std::string> env_;
};

// In-process executor backed by a function; used for planted pipelines and
// tests.
class FunctionExecutor : public Executor {
 public:
  using Fn = std::function<RunResult(const Configuration&)>;

  explicit FunctionExecutor(Fn fn, std::size_t workers = 1)
      : fn_(std::move(fn)), workers_(workers) {}

  RunResult Run(const Configuration& config) override { return fn_(config); }
  std::size_t workers() const override { return workers_; }

 private:
  Fn fn_;
  std::size_t workers_;
};

// Parses the child's standard output. Returns the metric or the reason it
// could not be read.
RunResult ParseChildOutput(const std::string& stdout_text,
                           const std::string& metric_key);

}  // namespace pipedebug

#endif  // PIPEDEBUG_EXECUTOR_H_
