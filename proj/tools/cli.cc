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


#include "cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pipedebug/bench.h"
#include "pipedebug/debugger.h"
#include "pipedebug/executor.h"
#include "pipedebug/fixtures.h"
#include "pipedebug/json_io.h"
#include "pipedebug/provenance.h"
#include "pipedebug/simplify.h"
#include "pipedebug/tree.h"

namespace pipedebug::cli {
namespace {

using nlohmann::json;

constexpr const char* kProtocol = R"(Child process protocol (debug --cmd):
  The command runs under /bin/sh -c, once per configuration, in its own
  process group. Only PATH and the variables named with --env are passed.
  stdin:  one JSON object mapping every property name to its value, e.g.
          {"Dataset":"Iris","Estimator":"Logistic Regression","Library Version":1.0}
          followed by end-of-stream.
  stdout: one JSON object containing the metric key, e.g. {"score":0.9}.
  exit:   0 whenever the evaluation completed, whatever the score.
  A nonzero exit (crash), output that is not a JSON object holding a numeric
  metric (bad_output), or running past --timeout (timeout) records the run
  as FAIL. Exit status 126 or 127 from the shell means the command could not
  be started and aborts the session.

Files:
  universe    {"properties":[{"name":str,"kind":"categorical"|"ordered","values":[...]}]}
  provenance  JSON Lines, one run per line:
              {"run_id":str,"config":{...},"score":num|null,
               "outcome":"succeed"|"fail","origin":"seed"|"initial_design"|"probe",
               "ts":iso8601[,"failure":"crash"|"bad_output"|"timeout"]}
  explanation [[{"property":str,"comparator":"="|"!="|"<="|">","value":...}, ...], ...]

Exit status: 0 causes found, 2 budget exhausted without a confirmed cause,
3 no failures observed, 64 malformed input, 69 pipeline command unavailable.)";

// Executor that must never run; used by replay.
class Tripwire : public Executor {
 public:
  RunResult Run(const Configuration&) override {
    throw std::logic_error("replay attempted to execute a configuration");
  }
  std::size_t workers() const override { return 1; }
};

void WriteOutput(const std::string& path, const std::string& text,
                 std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WriteTextFile(path, text);
  }
}

std::vector<std::size_t> ParseBudgets(const std::string& text) {
  std::vector<std::size_t> budgets;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "unlimited") {
      budgets.push_back(Budget::kUnlimited);
      continue;
    }
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw std::invalid_argument("bad budget \"" + item + "\"");
    }
    budgets.push_back(static_cast<std::size_t>(v));
  }
  if (budgets.empty()) throw std::invalid_argument("no budgets given");
  return budgets;
}

struct DebugArgs {
  std::string universe;
  std::string provenance;
  std::string command;
  std::string fixture;
  std::string metric = "score";
  std::optional<double> threshold;
  std::string direction = "ge";
  std::string mode = "find-one";
  std::optional<std::size_t> budget;
  std::size_t workers = 5;
  std::uint64_t seed = 0;
  std::optional<std::size_t> probe_batch;
  double timeout = 300.0;
  std::vector<std::string> env;
  std::string out;
  std::string dump_tree;
};

struct ReplayArgs {
  std::string universe;
  std::string provenance;
  std::string mode = "find-one";
  std::uint64_t seed = 0;
  std::string out;
};

struct BenchArgs {
  std::string suite;
  std::size_t generate = 0;
  std::uint64_t suite_seed = 1;
  std::string write_suite;
  std::string budgets = "10,25,50";
  std::string mode = "find-all";
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out;
};

struct MetricsArgs {
  std::string suite;
  std::string answers;
  std::string out;
};

struct SimplifyArgs {
  std::string in;
  std::string universe;
  std::string out;
};

struct FixtureArgs {
  std::string name;
  std::string universe_out;
  std::string provenance_out;
};

std::string ReportText(const Universe& universe, const DebugReport& report) {
  return ReportToJson(universe, report).dump(2) + "\n";
}

int RunDebug(const DebugArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<Fixture> fixture;
  if (!a.fixture.empty()) fixture = FixtureByName(a.fixture);
  if (a.command.empty() == !fixture) {
    throw CLI::ValidationError("debug", "give exactly one of --cmd or --fixture");
  }

  std::optional<Universe> declared;
  if (!a.universe.empty()) {
    declared = ReadUniverseFile(a.universe);
  } else if (fixture) {
    declared = fixture->universe;
  }
  LoadedProvenance loaded;
  if (!a.provenance.empty()) {
    loaded = LoadProvenance(a.provenance, declared ? &*declared : nullptr);
  } else if (declared) {
    loaded.store = std::make_unique<ProvenanceStore>(*declared);
  } else {
    throw CLI::ValidationError("debug", "give --universe or --provenance");
  }
  ProvenanceStore& store = *loaded.store;
  if (!a.provenance.empty()) store.AttachLog(a.provenance);

  EvaluationSpec eval;
  if (fixture) eval = fixture->eval;
  eval.metric_key = a.metric;
  if (a.threshold) {
    eval.threshold = *a.threshold;
    eval.direction = ParseDirection(a.direction);
  } else if (!fixture) {
    throw CLI::ValidationError("debug", "--threshold is required with --cmd");
  }

  DebugOptions options;
  options.mode = ParseMode(a.mode);
  options.max_runs = a.budget.value_or(Budget::kUnlimited);
  options.seed = a.seed;
  options.probe_batch = a.probe_batch.value_or(a.workers);

  std::unique_ptr<Executor> executor;
  if (fixture) {
    executor = std::make_unique<FunctionExecutor>(fixture->MakeExecutor(a.workers));
  } else {
    ExecutorConfig config;
    config.command = a.command;
    config.workers = a.workers;
    config.timeout = std::chrono::milliseconds(
        static_cast<long long>(a.timeout * 1000.0));
    config.env_passthrough = a.env;
    executor = std::make_unique<SubprocessExecutor>(store.universe(), config,
                                                    eval.metric_key);
  }

  DebugReport report = Debug(store, *executor, eval, options);
  report.notes.insert(report.notes.begin(), loaded.notes.begin(),
                      loaded.notes.end());
  WriteOutput(a.out, ReportText(store.universe(), report), out);
  if (!a.dump_tree.empty()) {
    const Evidence evidence = store.Snapshot();
    if (evidence.size() > 0) {
      const auto tree = FitTree(evidence.instances(), store.universe());
      WriteTextFile(a.dump_tree, TreeToJson(store.universe(), *tree).dump(2) + "\n");
    }
  }
  err << Describe(store.universe(), report.explanation) << " ("
      << DebugStatusName(report.status) << ", " << report.runs_used
      << " runs)\n";
  return ExitCode(report.status);
}

int RunReplay(const ReplayArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<Universe> declared;
  if (!a.universe.empty()) declared = ReadUniverseFile(a.universe);
  if (!std::filesystem::exists(a.provenance)) {
    throw FormatError(a.provenance, 0, "no such file");
  }
  LoadedProvenance loaded =
      LoadProvenance(a.provenance, declared ? &*declared : nullptr);
  Tripwire tripwire;
  DebugOptions options;
  options.mode = ParseMode(a.mode);
  options.max_runs = 0;
  options.seed = a.seed;
  options.exhaust_free_suspects = true;
  DebugReport report = Debug(*loaded.store, tripwire, EvaluationSpec{}, options);
  report.notes.insert(report.notes.begin(), loaded.notes.begin(),
                      loaded.notes.end());
  WriteOutput(a.out, ReportText(loaded.store->universe(), report), out);
  err << Describe(loaded.store->universe(), report.explanation) << " ("
      << DebugStatusName(report.status) << ")\n";
  return ExitCode(report.status);
}

int RunBench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.suite.empty() == (a.generate == 0)) {
    throw CLI::ValidationError("bench", "give exactly one of --suite or --generate");
  }
  BenchmarkSuite suite;
  if (!a.suite.empty()) {
    suite = ReadSuiteFile(a.suite);
  } else {
    SuiteGeneratorOptions gen;
    gen.pipelines = a.generate;
    gen.seed = a.suite_seed;
    suite = GenerateSuite(gen);
  }
  if (!a.write_suite.empty()) {
    WriteTextFile(a.write_suite, SuiteToJson(suite).dump(2) + "\n");
  }
  const std::vector<std::size_t> budgets = ParseBudgets(a.budgets);
  const std::vector<SweepRow> rows =
      BudgetSweep(suite, budgets, ParseMode(a.mode), a.seed, a.threads);
  WriteOutput(a.out, SweepToCsv(rows), out);
  for (const SweepRow& r : rows) {
    err << "budget " << (r.budget == Budget::kUnlimited ? std::string("unlimited")
                                                        : std::to_string(r.budget))
        << ": exhaustive-only precision " << r.exhaustive_precision << "\n";
  }
  return 0;
}

int RunMetrics(const MetricsArgs& a, std::ostream& out, std::ostream&) {
  const BenchmarkSuite suite = ReadSuiteFile(a.suite);
  const json answers = ReadJsonFile(a.answers);
  const std::vector<Explanation> oracle = SuiteOracle(suite);
  std::vector<Assessment> assessments;
  try {
    for (std::size_t i = 0; i < suite.pipelines.size(); ++i) {
      const PlantedPipeline& p = suite.pipelines[i];
      json entry;
      if (answers.is_array()) {
        if (i >= answers.size()) {
          throw std::invalid_argument("answers cover " + std::to_string(answers.size()) +
                                      " of " + std::to_string(suite.pipelines.size()) +
                                      " pipelines");
        }
        entry = answers.at(i);
      } else if (answers.is_object() && answers.contains(p.name)) {
        entry = answers.at(p.name);
      } else {
        throw std::invalid_argument("no answer for pipeline \"" + p.name + "\"");
      }
      assessments.push_back({p.universe, oracle[i], ExplanationFromJson(p.universe, entry)});
    }
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(a.answers, 1, e.what());
  }
  const double precision = Precision(assessments);
  const double one = RecallFindOne(assessments);
  const double all = RecallFindAll(assessments);
  const json result = {
      {"precision", precision},
      {"precision_by_convention", PrecisionByConvention(assessments)},
      {"recall_findone", one},
      {"recall_findall", all},
      {"f_findone", FMeasure(precision, one)},
      {"f_findall", FMeasure(precision, all)},
  };
  WriteOutput(a.out, result.dump(2) + "\n", out);
  return 0;
}

int RunSimplify(const SimplifyArgs& a, std::ostream& out, std::ostream&) {
  const Universe universe = ReadUniverseFile(a.universe);
  const Explanation in = ReadExplanationFile(universe, a.in);
  WriteOutput(a.out, ExplanationToJson(universe, Simplify(in, universe)).dump(2) + "\n",
              out);
  return 0;
}

int RunFixture(const FixtureArgs& a, std::ostream& out, std::ostream&) {
  const Fixture f = FixtureByName(a.name);
  WriteOutput(a.universe_out, UniverseToJson(f.universe).dump(2) + "\n", out);
  if (!a.provenance_out.empty()) {
    std::filesystem::remove(a.provenance_out);
    ProvenanceStore store(f.universe);
    store.SetClock([] { return std::string("1970-01-01T00:00:00Z"); });
    store.AttachLog(a.provenance_out);
    store.Append(std::span<const Instance>(f.seeds));
  }
  return 0;
}

}  // namespace

int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) {
  CLI::App app("Finds minimal definitive root causes of pipeline failures.",
               "pipedebug");
  app.require_subcommand(1);
  app.footer(kProtocol);

  DebugArgs d;
  CLI::App* debug = app.add_subcommand(
      "debug", "Probe a pipeline until its failures are explained");
  debug->add_option("--universe", d.universe, "Universe JSON file");
  debug->add_option("--provenance", d.provenance,
                    "Provenance log (JSON Lines); new runs are appended");
  debug->add_option("--cmd", d.command, "Pipeline command (see protocol below)");
  debug->add_option("--fixture", d.fixture,
                    "Use a built-in table-driven pipeline instead of --cmd")
      ->check(CLI::IsMember(FixtureNames()));
  debug->add_option("--metric", d.metric, "Metric key in the child's output")
      ->capture_default_str();
  debug->add_option("--threshold", d.threshold, "Acceptance threshold");
  debug->add_option("--direction", d.direction, "ge: succeed iff metric >= threshold; le: <=")
      ->check(CLI::IsMember({"ge", "le"}))
      ->capture_default_str();
  debug->add_option("--mode", d.mode, "find-one or find-all")
      ->check(CLI::IsMember({"find-one", "find-all"}))
      ->capture_default_str();
  debug->add_option("--budget", d.budget, "Maximum pipeline runs (default unlimited)");
  debug->add_option("--workers", d.workers, "Concurrent pipeline runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  debug->add_option("--seed", d.seed, "Random seed")->capture_default_str();
  debug->add_option("--probe-batch", d.probe_batch, "Probes per batch (default --workers)")
      ->check(CLI::PositiveNumber);
  debug->add_option("--timeout", d.timeout, "Seconds per run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  debug->add_option("--env", d.env, "Environment variable passed to the child");
  debug->add_option("--out", d.out, "Report JSON file (default stdout)");
  debug->add_option("--dump-tree", d.dump_tree, "Write the final decision tree as JSON");

  ReplayArgs r;
  CLI::App* replay = app.add_subcommand(
      "replay", "Explain a provenance log without running anything");
  replay->add_option("--provenance", r.provenance, "Provenance log")->required();
  replay->add_option("--universe", r.universe, "Universe JSON file");
  replay->add_option("--mode", r.mode, "find-one or find-all")
      ->check(CLI::IsMember({"find-one", "find-all"}))
      ->capture_default_str();
  replay->add_option("--seed", r.seed, "Random seed")->capture_default_str();
  replay->add_option("--out", r.out, "Report JSON file (default stdout)");

  BenchArgs b;
  CLI::App* bench = app.add_subcommand(
      "bench", "Score the debugger on planted pipelines under budgets");
  bench->add_option("--suite", b.suite, "Suite JSON file");
  bench->add_option("--generate", b.generate, "Generate this many random pipelines");
  bench->add_option("--suite-seed", b.suite_seed, "Seed for --generate")
      ->capture_default_str();
  bench->add_option("--write-suite", b.write_suite, "Save the suite as JSON");
  bench->add_option("--budgets", b.budgets, "Comma-separated budgets or 'unlimited'")
      ->capture_default_str();
  bench->add_option("--mode", b.mode, "find-one or find-all")
      ->check(CLI::IsMember({"find-one", "find-all"}))
      ->capture_default_str();
  bench->add_option("--seed", b.seed, "Debugger seed")->capture_default_str();
  bench->add_option("--threads", b.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  bench->add_option("--out", b.out, "CSV file (default stdout)");

  MetricsArgs m;
  CLI::App* metrics = app.add_subcommand(
      "metrics", "Score answers against the oracle of a suite");
  metrics->add_option("--suite", m.suite, "Suite JSON file")->required();
  metrics->add_option("--answers", m.answers,
                      "JSON array of explanations in suite order, or an object "
                      "keyed by pipeline name")
      ->required();
  metrics->add_option("--out", m.out, "Output JSON file (default stdout)");

  SimplifyArgs s;
  CLI::App* simplify = app.add_subcommand("simplify", "Simplify an explanation");
  simplify->add_option("--in", s.in, "Explanation JSON file")->required();
  simplify->add_option("--universe", s.universe, "Universe JSON file")->required();
  simplify->add_option("--out", s.out, "Output file (default stdout)");

  FixtureArgs f;
  CLI::App* fixture = app.add_subcommand(
      "fixture", "Write a built-in pipeline's universe and seed runs");
  fixture->add_option("name", f.name, "Fixture name")
      ->required()
      ->check(CLI::IsMember(FixtureNames()));
  fixture->add_option("--universe-out", f.universe_out, "Universe file (default stdout)");
  fixture->add_option("--provenance-out", f.provenance_out,
                      "Seed provenance log (overwritten)");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (debug->parsed()) return RunDebug(d, out, err);
    if (replay->parsed()) return RunReplay(r, out, err);
    if (bench->parsed()) return RunBench(b, out, err);
    if (metrics->parsed()) return RunMetrics(m, out, err);
    if (simplify->parsed()) return RunSimplify(s, out, err);
    if (fixture->parsed()) return RunFixture(f, out, err);
    return kExitMalformedInput;
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "pipedebug: " << e.what() << "\n";
    return kExitMalformedInput;
  } catch (const FormatError& e) {
    err << e.what() << "\n";
    return kExitMalformedInput;
  } catch (const ExecutorError& e) {
    err << "pipedebug: " << e.what() << "\n";
    return kExitExecutorUnavailable;
  } catch (const std::invalid_argument& e) {
    err << "pipedebug: " << e.what() << "\n";
    return kExitMalformedInput;
  } catch (const std::out_of_range& e) {
    err << "pipedebug: " << e.what() << "\n";
    return kExitMalformedInput;
  } catch (const std::exception& e) {
    err << "pipedebug: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace pipedebug::cli
