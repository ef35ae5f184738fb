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


// Planted-cause benchmark: pipelines whose failure region is a known DNF,
// a brute-force oracle for their minimal definitive causes, and the
// precision / recall / F-measure scores used to compare debugger answers
// against it.
//
// Suite file:
//   {"pipelines":[{"name":str,"universe":{...},"truth":[[...]],
//                  "noise":num,"noise_seed":int}]}

#ifndef PIPEDEBUG_BENCH_H_
#define PIPEDEBUG_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipedebug/debugger.h"
#include "pipedebug/executor.h"
#include "pipedebug/model.h"
#include "pipedebug/universe.h"

namespace pipedebug {

struct PlantedPipeline {
  std::string name;
  Universe universe;
  Explanation truth;
  // Probability that a configuration's outcome is flipped. The flip is a
  // fixed function of (noise_seed, configuration).
  double noise = 0.0;
  std::uint64_t noise_seed = 0;

  bool Fails(const Configuration& config) const;
};

struct BenchmarkSuite {
  std::vector<PlantedPipeline> pipelines;
};

nlohmann::json SuiteToJson(const BenchmarkSuite& suite);
BenchmarkSuite SuiteFromJson(const nlohmann::json& json);
BenchmarkSuite ReadSuiteFile(const std::filesystem::path& path);

struct SuiteGeneratorOptions {
  std::size_t pipelines = 50;
  std::size_t min_properties = 2;
  std::size_t max_properties = 5;
  std::size_t min_values = 2;
  std::size_t max_values = 6;
  std::size_t max_truth_conjunctions = 2;
  std::size_t max_truth_length = 3;
  double noise = 0.0;
  std::uint64_t seed = 1;
};

// Random planted pipelines with mixed categorical and ordered properties.
// Truth conjunctions use distinct properties and no vacuous predicate;
// truths whose failure region is empty or the whole product are redrawn.
BenchmarkSuite GenerateSuite(const SuiteGeneratorOptions& options);

// Largest product the oracle accepts.
inline constexpr std::uint64_t kOracleProductLimit = 1'000'000;

// Every conjunction of at most `max_cost` predicates that is definitive over
// the full product (no succeeding configuration satisfies it, at least one
// failing one does) and is not strictly contained in another such
// conjunction. Conjunctions are compared as value-set boxes and returned in
// shortest form, sorted. Throws std::invalid_argument when the product
// exceeds kOracleProductLimit.
Explanation OracleMinimalCauses(const PlantedPipeline& pipeline,
                                std::size_t max_cost = 4);

// Executor answering 1.0 for succeeding configurations and 0.0 for failing
// ones; pair it with PlantedEvaluation().
FunctionExecutor PlantedExecutor(const PlantedPipeline& pipeline,
                                 std::size_t workers = 1);
EvaluationSpec PlantedEvaluation();

// Runs the debugger on a fresh, empty store.
DebugReport DebugPlanted(const PlantedPipeline& pipeline,
                         const DebugOptions& options);

// A reference answer set and a candidate answer set for one pipeline.
// Conjunctions are identified by their value-set box.
struct Assessment {
  Universe universe;
  Explanation reference;
  Explanation answer;
};

// |A ∩ R| counting distinct boxes.
std::size_t TruePositives(const Assessment& a);
// Σ|A ∩ R| / Σ|A|; 1.0 when no answer was given at all.
double Precision(std::span<const Assessment> suite);
bool PrecisionByConvention(std::span<const Assessment> suite);
// Fraction of pipelines with at least one correct answer.
double RecallFindOne(std::span<const Assessment> suite);
// Σ|A ∩ R| / Σ|R|; 1.0 when there is nothing to find.
double RecallFindAll(std::span<const Assessment> suite);
// Harmonic mean; 0 when p + r = 0.
double FMeasure(double precision, double recall);

struct SweepRow {
  std::size_t budget = 0;
  Mode mode = Mode::kFindOne;
  double precision = 1.0;
  double recall = 0.0;
  double f = 0.0;
  // Precision over causes labeled definitive_exhaustive only.
  double exhaustive_precision = 1.0;
  // Per-pipeline answers, in suite order.
  std::vector<DebugReport> reports;
};

// Runs the debugger on every pipeline at every budget (Budget::kUnlimited
// allowed). Recall is RecallFindOne in find-one mode and RecallFindAll in
// find-all mode. Pipelines run in parallel on `threads` threads (0 = one
// per hardware thread); results do not depend on the thread count.
std::vector<SweepRow> BudgetSweep(const BenchmarkSuite& suite,
                                  std::span<const std::size_t> budgets,
                                  Mode mode, std::uint64_t seed,
                                  std::size_t threads = 0,
                                  const DebugOptions& base = {});

// CSV with header "budget,mode,precision,recall,f".
std::string SweepToCsv(std::span<const SweepRow> rows);

// Oracle answers for every pipeline in the suite.
std::vector<Explanation> SuiteOracle(const BenchmarkSuite& suite);

}  // namespace pipedebug

#endif  // PIPEDEBUG_BENCH_H_
