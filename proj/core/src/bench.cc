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


#include "pipedebug/bench.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "pipedebug/box.h"
#include "pipedebug/json_io.h"
#include "pipedebug/provenance.h"

namespace pipedebug {
namespace {

using nlohmann::json;

std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void ParallelFor(std::size_t n, std::size_t threads,
                 const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<Box> DistinctBoxes(const Universe& universe,
                               const Explanation& explanation) {
  std::vector<Box> out;
  for (const Conjunction& c : explanation) {
    Box b(universe, c);
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(std::move(b));
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

bool PlantedPipeline::Fails(const Configuration& config) const {
  bool fails = Satisfies(config, truth);
  if (noise > 0.0) {
    std::uint64_t h = Mix(noise_seed);
    for (ValueIndex v : config.values()) h = Mix(h ^ v);
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    if (u < noise) fails = !fails;
  }
  return fails;
}

json SuiteToJson(const BenchmarkSuite& suite) {
  json pipelines = json::array();
  for (const PlantedPipeline& p : suite.pipelines) {
    pipelines.push_back({{"name", p.name},
                         {"universe", UniverseToJson(p.universe)},
                         {"truth", ExplanationToJson(p.universe, p.truth)},
                         {"noise", p.noise},
                         {"noise_seed", p.noise_seed}});
  }
  return {{"pipelines", std::move(pipelines)}};
}

BenchmarkSuite SuiteFromJson(const json& j) {
  if (!j.is_object() || !j.contains("pipelines") || !j.at("pipelines").is_array()) {
    throw std::invalid_argument("suite must be an object with a \"pipelines\" array");
  }
  BenchmarkSuite suite;
  for (const json& entry : j.at("pipelines")) {
    if (!entry.is_object() || !entry.contains("universe") || !entry.contains("truth")) {
      throw std::invalid_argument("each pipeline needs \"universe\" and \"truth\"");
    }
    PlantedPipeline p;
    p.name = entry.value("name", "pipeline-" + std::to_string(suite.pipelines.size()));
    p.universe = UniverseFromJson(entry.at("universe"));
    p.truth = ExplanationFromJson(p.universe, entry.at("truth"));
    p.noise = entry.value("noise", 0.0);
    p.noise_seed = entry.value("noise_seed", std::uint64_t{0});
    if (p.noise < 0.0 || p.noise > 1.0) {
      throw std::invalid_argument("noise must lie in [0, 1]");
    }
    suite.pipelines.push_back(std::move(p));
  }
  if (suite.pipelines.empty()) throw std::invalid_argument("suite has no pipelines");
  return suite;
}

BenchmarkSuite ReadSuiteFile(const std::filesystem::path& path) {
  const json j = ReadJsonFile(path);
  try {
    return SuiteFromJson(j);
  } catch (const std::exception& e) {
    throw FormatError(path.string(), 1, e.what());
  }
}

BenchmarkSuite GenerateSuite(const SuiteGeneratorOptions& options) {
  if (options.min_properties < 1 || options.min_properties > options.max_properties ||
      options.min_values < 2 || options.min_values > options.max_values ||
      options.max_truth_conjunctions < 1 || options.max_truth_length < 1) {
    throw std::invalid_argument("inconsistent suite generator options");
  }
  std::mt19937_64 rng(options.seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  BenchmarkSuite suite;
  while (suite.pipelines.size() < options.pipelines) {
    const std::size_t n_props = uniform(options.min_properties, options.max_properties);
    std::vector<PropertySpec> specs;
    for (std::size_t i = 0; i < n_props; ++i) {
      PropertySpec spec;
      spec.name = "P" + std::to_string(i + 1);
      spec.kind = uniform(0, 1) ? PropertyKind::kOrdered : PropertyKind::kCategorical;
      const std::size_t n_values = uniform(options.min_values, options.max_values);
      for (std::size_t v = 0; v < n_values; ++v) {
        if (spec.kind == PropertyKind::kOrdered) {
          spec.values.emplace_back(static_cast<double>(v + 1));
        } else {
          spec.values.emplace_back(std::string(1, static_cast<char>('a' + v)));
        }
      }
      specs.push_back(std::move(spec));
    }
    Universe universe(std::move(specs));

    Explanation truth;
    const std::size_t n_conj = uniform(1, options.max_truth_conjunctions);
    for (std::size_t c = 0; c < n_conj; ++c) {
      std::vector<PropertyIndex> props(universe.size());
      for (PropertyIndex p = 0; p < props.size(); ++p) props[p] = p;
      std::shuffle(props.begin(), props.end(), rng);
      const std::size_t len = uniform(1, std::min(options.max_truth_length, props.size()));
      std::vector<Predicate> preds;
      for (std::size_t i = 0; i < len; ++i) {
        const PropertyIndex p = props[i];
        const std::size_t n = universe.value_count(p);
        const bool ordered = universe.property(p).kind == PropertyKind::kOrdered;
        const auto cmp = static_cast<Comparator>(uniform(0, ordered ? 3 : 1));
        const bool bound = cmp == Comparator::kLe || cmp == Comparator::kGt;
        const auto v = static_cast<ValueIndex>(uniform(0, bound ? n - 2 : n - 1));
        preds.push_back({p, cmp, v});
      }
      truth.emplace_back(std::move(preds));
    }

    PlantedPipeline candidate{"planted-" + std::to_string(suite.pipelines.size()),
                              std::move(universe), std::move(truth), options.noise,
                              Mix(options.seed + suite.pipelines.size())};
    std::uint64_t fails = 0;
    ForEachConfiguration(candidate.universe, Conjunction(), [&](const Configuration& c) {
      fails += candidate.Fails(c);
      return true;
    });
    if (fails == 0 || fails == candidate.universe.product_size()) continue;
    suite.pipelines.push_back(std::move(candidate));
  }
  return suite;
}

Explanation OracleMinimalCauses(const PlantedPipeline& pipeline, std::size_t max_cost) {
  const Universe& universe = pipeline.universe;
  if (universe.empty()) return {};
  if (universe.product_size() > kOracleProductLimit) {
    throw std::invalid_argument(
        "oracle needs a product of at most 1000000 configurations; use a smaller "
        "universe");
  }
  Explanation out;
  for (const Box& box : MaximalBoxes(
           universe, [&](const Configuration& c) { return pipeline.Fails(c); },
           max_cost)) {
    out.push_back(box.ToConjunction(universe));
  }
  std::sort(out.begin(), out.end());
  return out;
}

FunctionExecutor PlantedExecutor(const PlantedPipeline& pipeline, std::size_t workers) {
  return FunctionExecutor(
      [&pipeline](const Configuration& c) {
        RunResult r;
        r.score = pipeline.Fails(c) ? 0.0 : 1.0;
        return r;
      },
      workers);
}

EvaluationSpec PlantedEvaluation() {
  EvaluationSpec eval;
  eval.metric_key = "score";
  eval.threshold = 0.5;
  eval.direction = Direction::kGe;
  return eval;
}

DebugReport DebugPlanted(const PlantedPipeline& pipeline, const DebugOptions& options) {
  ProvenanceStore store(pipeline.universe);
  FunctionExecutor executor = PlantedExecutor(pipeline);
  return Debug(store, executor, PlantedEvaluation(), options);
}

std::size_t TruePositives(const Assessment& a) {
  const std::vector<Box> reference = DistinctBoxes(a.universe, a.reference);
  std::size_t hits = 0;
  for (const Box& b : DistinctBoxes(a.universe, a.answer)) {
    hits += std::find(reference.begin(), reference.end(), b) != reference.end();
  }
  return hits;
}

double Precision(std::span<const Assessment> suite) {
  std::size_t hits = 0, answered = 0;
  for (const Assessment& a : suite) {
    hits += TruePositives(a);
    answered += DistinctBoxes(a.universe, a.answer).size();
  }
  return answered == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(answered);
}

bool PrecisionByConvention(std::span<const Assessment> suite) {
  return std::all_of(suite.begin(), suite.end(),
                     [](const Assessment& a) { return a.answer.empty(); });
}

double RecallFindOne(std::span<const Assessment> suite) {
  if (suite.empty()) return 0.0;
  std::size_t found = 0;
  for (const Assessment& a : suite) found += TruePositives(a) > 0;
  return static_cast<double>(found) / static_cast<double>(suite.size());
}

double RecallFindAll(std::span<const Assessment> suite) {
  std::size_t hits = 0, total = 0;
  for (const Assessment& a : suite) {
    hits += TruePositives(a);
    total += DistinctBoxes(a.universe, a.reference).size();
  }
  return total == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(total);
}

double FMeasure(double precision, double recall) {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

std::vector<Explanation> SuiteOracle(const BenchmarkSuite& suite) {
  std::vector<Explanation> out(suite.pipelines.size());
  ParallelFor(out.size(), 0,
              [&](std::size_t i) { out[i] = OracleMinimalCauses(suite.pipelines[i]); });
  return out;
}

std::vector<SweepRow> BudgetSweep(const BenchmarkSuite& suite,
                                  std::span<const std::size_t> budgets, Mode mode,
                                  std::uint64_t seed, std::size_t threads,
                                  const DebugOptions& base) {
  const std::vector<Explanation> oracle = SuiteOracle(suite);
  std::vector<SweepRow> rows;
  for (std::size_t budget : budgets) {
    SweepRow row;
    row.budget = budget;
    row.mode = mode;
    row.reports.resize(suite.pipelines.size());
    DebugOptions options = base;
    options.mode = mode;
    options.max_runs = budget;
    options.seed = seed;
    ParallelFor(suite.pipelines.size(), threads, [&](std::size_t i) {
      row.reports[i] = DebugPlanted(suite.pipelines[i], options);
    });
    std::vector<Assessment> all, exhaustive;
    for (std::size_t i = 0; i < suite.pipelines.size(); ++i) {
      const Universe& u = suite.pipelines[i].universe;
      Assessment a{u, oracle[i], {}};
      Assessment e{u, oracle[i], {}};
      for (const Cause& c : row.reports[i].causes) {
        a.answer.push_back(c.conjunction);
        if (c.status == CauseStatus::kDefinitiveExhaustive) {
          e.answer.push_back(c.conjunction);
        }
      }
      all.push_back(std::move(a));
      exhaustive.push_back(std::move(e));
    }
    row.precision = Precision(all);
    row.recall = mode == Mode::kFindOne ? RecallFindOne(all) : RecallFindAll(all);
    row.f = FMeasure(row.precision, row.recall);
    row.exhaustive_precision = Precision(exhaustive);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string SweepToCsv(std::span<const SweepRow> rows) {
  std::string out = "budget,mode,precision,recall,f\n";
  for (const SweepRow& r : rows) {
    out += (r.budget == Budget::kUnlimited ? std::string("unlimited")
                                           : std::to_string(r.budget));
    out += ",";
    out += ModeName(r.mode);
    out += "," + FormatDouble(r.precision) + "," + FormatDouble(r.recall) + "," +
           FormatDouble(r.f) + "\n";
  }
  return out;
}

}  // namespace pipedebug
