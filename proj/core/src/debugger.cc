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


#include "pipedebug/debugger.h"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <span>
#include <stdexcept>

#include "pipedebug/box.h"
#include "pipedebug/json_io.h"
#include "pipedebug/simplify.h"
#include "pipedebug/tree.h"

namespace pipedebug {
namespace {

using nlohmann::json;

// Beyond this many predicates Minimize drops predicates one at a time
// instead of trying every subset.
constexpr std::size_t kSubsetSearchLimit = 12;
// Search nodes visited when enumerating wider boxes.
constexpr std::size_t kWidenNodeLimit = std::size_t{1} << 20;

std::string RunId(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "run-%06zu", n);
  return buf;
}

bool HasOutcome(const Evidence& evidence, Outcome outcome) {
  return std::any_of(evidence.instances().begin(), evidence.instances().end(),
                     [&](const Instance& i) { return i.outcome == outcome; });
}

bool Intersects(const Box& a, const Box& b) {
  for (PropertyIndex p = 0; p < a.size(); ++p) {
    ValueSet s = a.set(p);
    s &= b.set(p);
    if (s.empty()) return false;
  }
  return true;
}

json ProbeToJson(const Universe& universe, const ProbeRecord& probe) {
  json j = {
      {"run_id", probe.run_id},
      {"phase", probe.phase},
      {"suspect", ConjunctionToJson(universe, probe.suspect)},
      {"config", ConfigurationToJson(universe, probe.config)},
      {"score", probe.score ? json(*probe.score) : json(nullptr)},
      {"outcome", OutcomeName(probe.outcome)},
  };
  if (probe.failure) j["failure"] = FailureKindName(*probe.failure);
  return j;
}

}  // namespace

std::string_view ModeName(Mode mode) {
  return mode == Mode::kFindOne ? "find-one" : "find-all";
}

Mode ParseMode(std::string_view name) {
  if (name == "find-one") return Mode::kFindOne;
  if (name == "find-all") return Mode::kFindAll;
  throw std::invalid_argument("mode must be find-one or find-all, got \"" +
                              std::string(name) + "\"");
}

std::string_view CauseStatusName(CauseStatus status) {
  return status == CauseStatus::kDefinitiveExhaustive ? "definitive_exhaustive"
                                                      : "definitive_sampled";
}

std::string_view ConfirmResultName(ConfirmResult result) {
  switch (result) {
    case ConfirmResult::kConfirmedExhaustive:
      return "confirmed_exhaustive";
    case ConfirmResult::kConfirmedSampled:
      return "confirmed_sampled";
    case ConfirmResult::kRefuted:
      return "refuted";
    case ConfirmResult::kBudgetExhausted:
      return "budget_exhausted";
  }
  return "?";
}

std::string_view DebugStatusName(DebugStatus status) {
  switch (status) {
    case DebugStatus::kCausesFound:
      return "causes_found";
    case DebugStatus::kBudgetExhausted:
      return "budget_exhausted";
    case DebugStatus::kNoFailures:
      return "no_failures";
  }
  return "?";
}

int ExitCode(DebugStatus status) {
  switch (status) {
    case DebugStatus::kCausesFound:
      return 0;
    case DebugStatus::kBudgetExhausted:
      return 2;
    case DebugStatus::kNoFailures:
      return 3;
  }
  return 1;
}

bool IsDefinitive(const Universe& universe, const Conjunction& conjunction,
                  const Evidence& evidence) {
  return evidence.IsDefinitive(Box(universe, conjunction));
}

Debugger::Debugger(ProvenanceStore& store, Executor& executor,
                   EvaluationSpec eval, DebugOptions options)
    : store_(store),
      executor_(executor),
      eval_(std::move(eval)),
      options_(options),
      universe_(store.universe()) {
  if (options_.probe_batch == 0) {
    throw std::invalid_argument("probe batch must be at least 1");
  }
  budget_.max_runs = options_.max_runs;
  next_run_ = store_.size();
  Refresh();
}

void Debugger::Refresh() { evidence_ = store_.Snapshot(); }

void Debugger::Execute(const std::vector<Configuration>& configs, Origin origin,
                       const std::string& phase, const Conjunction& suspect) {
  if (configs.empty()) return;
  std::vector<Instance> done =
      RunBatch(executor_, configs, eval_, budget_, origin);
  for (Instance& inst : done) {
    inst.run_id = RunId(++next_run_);
    probes_.push_back({inst.run_id, phase, suspect, inst.config, inst.score,
                       inst.outcome, inst.failure});
  }
  store_.Append(std::span<const Instance>(done));
  Refresh();
}

ConfirmResult Debugger::Confirm(const Conjunction& suspect,
                                const std::string& phase,
                                std::span<const Box> known) {
  const Box box(universe_, suspect);
  if (box.empty()) return ConfirmResult::kRefuted;
  const std::uint64_t total = box.count();
  const bool exhaustive = total <= options_.exhaustive_cap;
  if (exhaustive) known = {};
  std::uint64_t probed = 0;
  for (;;) {
    std::uint64_t stored = 0;
    for (const Instance& inst : evidence_.instances()) {
      if (!box.Contains(inst.config)) continue;
      if (inst.outcome == Outcome::kSucceed) return ConfirmResult::kRefuted;
      ++stored;
    }
    if (exhaustive && stored == total) return ConfirmResult::kConfirmedExhaustive;
    if (!exhaustive && probed >= options_.sampled_quota) {
      return ConfirmResult::kConfirmedSampled;
    }
    if (budget_.exhausted()) return ConfirmResult::kBudgetExhausted;
    const std::uint64_t wanted =
        exhaustive ? total - stored : options_.sampled_quota - probed;
    const std::size_t k = static_cast<std::size_t>(std::min<std::uint64_t>(
        {options_.probe_batch, wanted, budget_.remaining()}));
    std::vector<Configuration> probes =
        ProbesForSuspect(suspect, universe_, evidence_, k, options_.seed, known);
    if (probes.empty()) {
      if (!exhaustive && stored > 0) return ConfirmResult::kConfirmedSampled;
      throw std::logic_error("no untested configuration left for " +
                             Describe(universe_, suspect));
    }
    probed += probes.size();
    Execute(probes, Origin::kProbe, phase, suspect);
  }
}

Cause Debugger::Minimize(const Cause& cause) {
  interrupted_ = false;
  const std::vector<Predicate>& preds = cause.conjunction.predicates();
  const std::size_t n = preds.size();
  if (n <= 1) return cause;
  const Box base(universe_, cause.conjunction);

  // Returns the confirmed status, or nullopt.
  auto attempt = [&](const Conjunction& candidate) -> std::optional<CauseStatus> {
    if (!IsDefinitive(universe_, candidate, evidence_)) return std::nullopt;
    switch (Confirm(candidate, "minimize", std::span(&base, 1))) {
      case ConfirmResult::kConfirmedExhaustive:
        return CauseStatus::kDefinitiveExhaustive;
      case ConfirmResult::kConfirmedSampled:
        return CauseStatus::kDefinitiveSampled;
      case ConfirmResult::kBudgetExhausted:
        interrupted_ = true;
        return std::nullopt;
      case ConfirmResult::kRefuted:
        return std::nullopt;
    }
    return std::nullopt;
  };

  if (n > kSubsetSearchLimit) {
    Cause best = cause;
    bool shrunk = true;
    while (shrunk && !interrupted_) {
      shrunk = false;
      const auto current = best.conjunction.predicates();
      for (std::size_t drop = 0; drop < current.size() && !interrupted_; ++drop) {
        std::vector<Predicate> rest = current;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(drop));
        Conjunction candidate(std::move(rest));
        if (auto status = attempt(candidate)) {
          best = {candidate, *status};
          shrunk = true;
          break;
        }
      }
    }
    return best;
  }

  for (std::size_t size = 1; size < n; ++size) {
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
      std::vector<Predicate> chosen;
      for (std::size_t i : idx) chosen.push_back(preds[i]);
      Conjunction candidate(std::move(chosen));
      if (auto status = attempt(candidate)) return {candidate, *status};
      if (interrupted_) return cause;
      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return cause;
}

std::vector<Box> Debugger::WidenCandidates(const Box& current) const {
  std::vector<const Configuration*> succeeding;
  for (const Instance& inst : evidence_.instances()) {
    if (inst.outcome == Outcome::kSucceed) succeeding.push_back(&inst.config);
  }
  auto clean = [&](const Box& b) {
    return std::none_of(succeeding.begin(), succeeding.end(),
                        [&](const Configuration* c) { return b.Contains(*c); });
  };

  const std::size_t limit = options_.max_cause_cost;
  std::vector<Box> found;
  std::size_t nodes = 0;
  Box box = current;
  std::function<void(PropertyIndex, std::size_t)> search =
      [&](PropertyIndex p, std::size_t cost) {
        if (++nodes > kWidenNodeLimit) return;
        if (p == universe_.size()) {
          if (box != current) found.push_back(box);
          return;
        }
        for (const ValueSet& s :
             CheapSupersets(universe_, p, current.set(p), limit - cost)) {
          box.mutable_set(p) = s;
          if (s != current.set(p) && !clean(box)) continue;
          search(p + 1, cost + PredicateCost(universe_, p, s));
        }
        box.mutable_set(p) = current.set(p);
      };
  search(0, 0);

  struct Ranked {
    std::uint64_t count;
    std::size_t cost;
    Conjunction form;
    Box box;
  };
  std::vector<Ranked> ranked;
  for (Box& b : found) {
    ranked.push_back({b.count(), b.Cost(universe_), b.ToConjunction(universe_),
                      std::move(b)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& x, const Ranked& y) {
    if (x.count != y.count) return x.count > y.count;
    if (x.cost != y.cost) return x.cost < y.cost;
    return x.form < y.form;
  });
  std::vector<Box> out;
  for (Ranked& r : ranked) out.push_back(std::move(r.box));
  return out;
}

Cause Debugger::Widen(const Cause& cause) {
  interrupted_ = false;
  Cause current = cause;
  for (;;) {
    bool moved = false;
    const Box base(universe_, current.conjunction);
    for (const Box& candidate : WidenCandidates(base)) {
      if (!evidence_.IsDefinitive(candidate)) continue;
      const Conjunction form = candidate.ToConjunction(universe_);
      const ConfirmResult result = Confirm(form, "widen", std::span(&base, 1));
      if (result == ConfirmResult::kBudgetExhausted) {
        interrupted_ = true;
        return current;
      }
      if (result == ConfirmResult::kRefuted) continue;
      current = {form, result == ConfirmResult::kConfirmedExhaustive
                           ? CauseStatus::kDefinitiveExhaustive
                           : CauseStatus::kDefinitiveSampled};
      moved = true;
      break;
    }
    if (!moved) return current;
  }
}

bool Debugger::RunInitialDesign() {
  if (budget_.exhausted()) return false;
  std::vector<Configuration> rows = PairwiseCover(universe_, options_.seed, &evidence_);
  if (rows.size() > budget_.remaining()) rows.resize(budget_.remaining());
  Execute(rows, Origin::kInitialDesign, "initial", Conjunction());
  for (std::uint64_t round = 1;
       !HasOutcome(evidence_, Outcome::kFail) && !budget_.exhausted(); ++round) {
    Design batch = InitialDesign(
        universe_, std::min(options_.probe_batch, budget_.remaining()),
        DesignStrategy::kRandom, options_.seed + round, &evidence_);
    if (batch.configs.empty()) break;
    Execute(batch.configs, Origin::kInitialDesign, "initial", Conjunction());
  }
  return true;
}

std::vector<Conjunction> Debugger::Suspects(
    const std::vector<Cause>& confirmed) const {
  std::vector<Box> covered;
  for (const Cause& c : confirmed) covered.emplace_back(universe_, c.conjunction);
  std::vector<Instance> view;
  bool any_fail = false;
  for (const Instance& inst : evidence_.instances()) {
    if (inst.outcome == Outcome::kFail &&
        std::any_of(covered.begin(), covered.end(),
                    [&](const Box& b) { return b.Contains(inst.config); })) {
      continue;
    }
    any_fail |= inst.outcome == Outcome::kFail;
    view.push_back(inst);
  }
  std::vector<Conjunction> out;
  if (!any_fail) return out;
  const auto tree = FitTree(view, universe_);
  for (const Suspect& s : ExtractSuspects(*tree)) {
    Conjunction form = Box(universe_, s.conjunction).ToConjunction(universe_);
    if (std::find(out.begin(), out.end(), form) == out.end()) {
      out.push_back(std::move(form));
    }
  }
  return out;
}

std::optional<Conjunction> Debugger::UnionSuspect(
    const std::vector<Cause>& confirmed,
    const std::vector<Conjunction>& tried) const {
  if (confirmed.size() < 2 ||
      universe_.product_size() > kSimplifyEnumerationLimit) {
    return std::nullopt;
  }
  std::vector<Box> boxes;
  for (const Cause& c : confirmed) boxes.emplace_back(universe_, c.conjunction);
  auto in_union = [&](const Configuration& config) {
    return std::any_of(boxes.begin(), boxes.end(),
                       [&](const Box& b) { return b.Contains(config); });
  };
  for (const Box& box : MaximalBoxes(universe_, in_union, options_.max_cause_cost)) {
    if (std::any_of(boxes.begin(), boxes.end(),
                    [&](const Box& b) { return box.IsSubsetOf(b); })) {
      continue;
    }
    Conjunction form = box.ToConjunction(universe_);
    if (std::find(tried.begin(), tried.end(), form) == tried.end()) return form;
  }
  return std::nullopt;
}

DebugReport Debugger::Run() {
  DebugReport report;
  report.mode = options_.mode;
  report.max_runs = options_.max_runs;

  if (universe_.empty()) {
    throw std::invalid_argument("the universe has no properties");
  }
  if (!HasOutcome(evidence_, Outcome::kFail) ||
      !HasOutcome(evidence_, Outcome::kSucceed)) {
    RunInitialDesign();
  }

  std::vector<Cause> causes;
  bool saw_universal = false;
  if (HasOutcome(evidence_, Outcome::kFail)) {
    std::vector<Conjunction> unresolved;
    for (;;) {
      std::optional<Conjunction> suspect;
      for (Conjunction& s : Suspects(causes)) {
        if (std::find(unresolved.begin(), unresolved.end(), s) ==
            unresolved.end()) {
          suspect = std::move(s);
          break;
        }
      }
      std::vector<Box> covered;
      if (!suspect && options_.mode == Mode::kFindAll) {
        std::vector<Conjunction> tried = unresolved;
        tried.insert(tried.end(), report.refuted.begin(), report.refuted.end());
        suspect = UnionSuspect(causes, tried);
        for (const Cause& c : causes) covered.emplace_back(universe_, c.conjunction);
      }
      if (!suspect) break;
      if (suspect->empty() && !saw_universal) {
        saw_universal = true;
        notes_.push_back("universal failure: every observed configuration fails");
      }
      const ConfirmResult result = Confirm(*suspect, "confirm", covered);
      if (result == ConfirmResult::kRefuted) {
        report.refuted.push_back(*suspect);
        continue;
      }
      if (result == ConfirmResult::kBudgetExhausted) {
        if (!options_.exhaust_free_suspects) break;
        unresolved.push_back(*suspect);
        continue;
      }
      Cause cause{*suspect, result == ConfirmResult::kConfirmedExhaustive
                                ? CauseStatus::kDefinitiveExhaustive
                                : CauseStatus::kDefinitiveSampled};
      cause = Minimize(cause);
      bool incomplete = interrupted_;
      if (!incomplete && options_.widen) {
        cause = Widen(cause);
        incomplete = interrupted_;
      }
      if (incomplete) cause.status = CauseStatus::kDefinitiveSampled;

      const Box box(universe_, cause.conjunction);
      const bool known = std::any_of(causes.begin(), causes.end(), [&](const Cause& c) {
        return box.IsSubsetOf(Box(universe_, c.conjunction));
      });
      if (!known) {
        std::erase_if(causes, [&](const Cause& c) {
          return Box(universe_, c.conjunction).IsSubsetOf(box);
        });
        causes.push_back(cause);
      }
      if (options_.mode == Mode::kFindOne) break;
    }
  }

  if (!causes.empty()) {
    report.status = DebugStatus::kCausesFound;
  } else if (!HasOutcome(evidence_, Outcome::kFail)) {
    report.status = DebugStatus::kNoFailures;
    notes_.push_back("no failures: no failing configuration was observed");
  } else {
    report.status = DebugStatus::kBudgetExhausted;
  }

  Explanation raw;
  for (const Cause& c : causes) raw.push_back(c.conjunction);
  report.causes = std::move(causes);
  report.explanation = Simplify(raw, universe_);
  for (const Conjunction& conj : report.explanation) {
    const Box box(universe_, conj);
    CauseStatus status = CauseStatus::kDefinitiveExhaustive;
    for (const Cause& c : report.causes) {
      if (c.status == CauseStatus::kDefinitiveSampled &&
          Intersects(box, Box(universe_, c.conjunction))) {
        status = CauseStatus::kDefinitiveSampled;
      }
    }
    report.explanation_status.push_back(status);
  }
  report.runs_used = budget_.spent;
  report.notes = notes_;
  report.nondeterministic = evidence_.nondeterministic();
  report.probes = probes_;
  return report;
}

DebugReport Debug(ProvenanceStore& store, Executor& executor,
                  const EvaluationSpec& eval, const DebugOptions& options) {
  return Debugger(store, executor, eval, options).Run();
}

json ReportToJson(const Universe& universe, const DebugReport& report) {
  json causes = json::array();
  for (const Cause& c : report.causes) {
    causes.push_back({{"conjunction", ConjunctionToJson(universe, c.conjunction)},
                      {"status", CauseStatusName(c.status)}});
  }
  json status = json::array();
  for (CauseStatus s : report.explanation_status) status.push_back(CauseStatusName(s));
  json refuted = json::array();
  for (const Conjunction& c : report.refuted) {
    refuted.push_back(ConjunctionToJson(universe, c));
  }
  json nondeterministic = json::array();
  for (const Configuration& c : report.nondeterministic) {
    nondeterministic.push_back(ConfigurationToJson(universe, c));
  }
  json probes = json::array();
  for (const ProbeRecord& p : report.probes) probes.push_back(ProbeToJson(universe, p));
  return {
      {"mode", ModeName(report.mode)},
      {"status", DebugStatusName(report.status)},
      {"summary", Describe(universe, report.explanation)},
      {"causes", std::move(causes)},
      {"explanation", ExplanationToJson(universe, report.explanation)},
      {"explanation_status", std::move(status)},
      {"refuted", std::move(refuted)},
      {"runs_used", report.runs_used},
      {"budget", report.max_runs == Budget::kUnlimited ? json(nullptr)
                                                       : json(report.max_runs)},
      {"notes", report.notes},
      {"nondeterministic", std::move(nondeterministic)},
      {"probes", std::move(probes)},
  };
}

}  // namespace pipedebug
