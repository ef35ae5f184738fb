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


// Table-driven reference pipelines used by the command-line stub executor,
// the test suite and the benchmarks.
//
//   classifier        Dataset x Estimator x Library Version, scored against
//                     0.6 (succeed iff score >= 0.6). Every configuration
//                     with Library Version 2.0 scores below the threshold.
//                     Comes with three seed runs.
//   insurance         Estimator x Scaler x Test Split, scored against 0.4.
//                     Gaussian NB and K-Neighbors Classifier score below it.
//   insurance-strict  The same pipeline scored against 0.5; only Random
//                     Forest reaches it.

#ifndef PIPEDEBUG_FIXTURES_H_
#define PIPEDEBUG_FIXTURES_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pipedebug/executor.h"
#include "pipedebug/model.h"
#include "pipedebug/universe.h"

namespace pipedebug {

struct Fixture {
  std::string name;
  Universe universe;
  EvaluationSpec eval;
  std::function<double(const Configuration&)> score;
  std::vector<Instance> seeds;

  // An in-process executor returning `score`.
  FunctionExecutor MakeExecutor(std::size_t workers = 1) const;
};

Fixture ClassifierFixture();
Fixture InsuranceFixture(double threshold = 0.4);

std::vector<std::string> FixtureNames();
// Throws std::invalid_argument for unknown names.
Fixture FixtureByName(std::string_view name);

}  // namespace pipedebug

#endif  // PIPEDEBUG_FIXTURES_H_
