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


// The iterative debugging loop. Fit a decision tree over the evidence, take
// a pure-fail path as a suspect, and probe configurations that satisfy it.
// A succeeding probe refutes the suspect and the tree is refit. A suspect
// whose probes all fail is confirmed, reduced to its smallest confirmed
// subset of predicates, and then widened to the largest confirmed box
// reachable within the predicate cap. In find-all mode, once the tree has no
// new suspect, maximal boxes of the union of the confirmed causes that no
// single cause contains are tested the same way.

#ifndef PIPEDEBUG_DEBUGGER_H_
#define PIPEDEBUG_DEBUGGER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipedebug/box.h"
#include "pipedebug/executor.h"
#include "pipedebug/model.h"
#include "pipedebug/probegen.h"
#include "pipedebug/provenance.h"
#include "pipedebug/universe.h"

namespace pipedebug {

enum class Mode { kFindOne, kFindAll };
std::string_view ModeName(Mode mode);  // "find-one" / "find-all"
Mode ParseMode(std::string_view name);

enum class CauseStatus { kDefinitiveExhaustive, kDefinitiveSampled };
std::string_view CauseStatusName(CauseStatus status);

enum class ConfirmResult {
  kConfirmedExhaustive,
  kConfirmedSampled,
  kRefuted,
  kBudgetExhausted,
};
std::string_view ConfirmResultName(ConfirmResult result);

enum class DebugStatus { kCausesFound, kBudgetExhausted, kNoFailures };
std::string_view DebugStatusName(DebugStatus status);
// 0, 2 and 3 respectively.
int ExitCode(DebugStatus status);

struct DebugOptions {
  Mode mode = Mode::kFindOne;
  std::size_t max_runs = Budget::kUnlimited;
  std::uint64_t seed = 0;
  // Probes executed per batch.
  std::size_t probe_batch = 5;
  // Suspects with at most this many configurations are checked exhaustively.
  std::size_t exhaustive_cap = 256;
  // New all-failing probes needed to confirm a larger suspect.
  std::size_t sampled_quota = 32;
  // Predicate limit for widened causes.
  std::size_t max_cause_cost = 4;
  bool widen = true;
  DesignStrategy design = DesignStrategy::kCovering;
  // After the budget runs out, keep testing the remaining suspects against
  // stored evidence alone.
  bool exhaust_free_suspects = false;
};

// True iff the evidence holds a failing configuration satisfying
// `conjunction` and no succeeding one.
bool IsDefinitive(const Universe& universe, const Conjunction& conjunction,
                  const Evidence& evidence);

struct Cause {
  Conjunction conjunction;
  CauseStatus status = CauseStatus::kDefinitiveExhaustive;

  friend bool operator==(const Cause&, const Cause&) = default;
};

struct ProbeRecord {
  std::string run_id;
  std::string phase;  // initial / confirm / minimize / widen
  Conjunction suspect;
  Configuration config;
  std::optional<double> score;
  Outcome outcome = Outcome::kFail;
  std::optional<FailureKind> failure;
};

struct DebugReport {
  Mode mode = Mode::kFindOne;
  DebugStatus status = DebugStatus::kNoFailures;
  // Confirmed causes in discovery order.
  std::vector<Cause> causes;
  // Simplified disjunction of the causes, with the weakest status of the
  // causes each conjunction overlaps.
  Explanation explanation;
  std::vector<CauseStatus> explanation_status;
  std::vector<Conjunction> refuted;
  std::size_t runs_used = 0;
  std::size_t max_runs = Budget::kUnlimited;
  std::vector<std::string> notes;
  std::vector<Configuration> nondeterministic;
  std::vector<ProbeRecord> probes;
};

nlohmann::json ReportToJson(const Universe& universe, const DebugReport& report);

// Single-use driver over one store and executor. Executed instances are
// appended to `store` (and its log, if attached).
class Debugger {
 public:
  Debugger(ProvenanceStore& store, Executor& executor, EvaluationSpec eval,
           DebugOptions options);

  DebugReport Run();

  // Building blocks, exposed for testing. `phase` labels audit records.
  // Up to the exhaustive cap every configuration of the suspect must be
  // stored. Beyond it, `sampled_quota` new probes must all fail; they skip
  // the `known` boxes, which are already confirmed.
  ConfirmResult Confirm(const Conjunction& suspect,
                        const std::string& phase = "confirm",
                        std::span<const Box> known = {});
  // Smallest confirmed proper subset of `cause`, or `cause` itself.
  Cause Minimize(const Cause& cause);
  // Largest confirmed box containing `cause` within max_cause_cost.
  Cause Widen(const Cause& cause);

  const Budget& budget() const { return budget_; }
  const Evidence& evidence() const { return evidence_; }
  const std::vector<ProbeRecord>& probes() const { return probes_; }
  // True when the last Minimize or Widen stopped for lack of budget.
  bool interrupted() const { return interrupted_; }

 private:
  void Execute(const std::vector<Configuration>& configs, Origin origin,
               const std::string& phase, const Conjunction& suspect);
  bool RunInitialDesign();
  std::vector<Conjunction> Suspects(const std::vector<Cause>& confirmed) const;
  std::vector<Box> WidenCandidates(const Box& current) const;
  // A box of the union of `confirmed` that no single cause contains and
  // that is maximal within the union; skips `tried`.
  std::optional<Conjunction> UnionSuspect(const std::vector<Cause>& confirmed,
                                          const std::vector<Conjunction>& tried) const;
  void Refresh();

  ProvenanceStore& store_;
  Executor& executor_;
  EvaluationSpec eval_;
  DebugOptions options_;
  const Universe& universe_;
  Budget budget_;
  Evidence evidence_;
  std::vector<ProbeRecord> probes_;
  std::vector<Conjunction> refuted_;
  std::vector<std::string> notes_;
  std::size_t next_run_ = 0;
  bool interrupted_ = false;
};

// Convenience wrapper around Debugger::Run.
DebugReport Debug(ProvenanceStore& store, Executor& executor,
                  const EvaluationSpec& eval, const DebugOptions& options);

}  // namespace pipedebug

#endif  // PIPEDEBUG_DEBUGGER_H_
