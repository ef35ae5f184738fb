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


#include "pipedebug/fixtures.h"

#include <map>
#include <stdexcept>
#include <tuple>

namespace pipedebug {
namespace {

const std::map<std::tuple<std::string, std::string, double>, double>&
ClassifierScores() {
  static const auto* scores =
      new std::map<std::tuple<std::string, std::string, double>, double>{
          {{"Iris", "Logistic Regression", 1.0}, 0.9},
          {{"Digits", "Decision Tree", 1.0}, 0.8},
          {{"Iris", "Gradient Boosting", 2.0}, 0.2},
          {{"Digits", "Gradient Boosting", 2.0}, 0.2},
          {{"Digits", "Gradient Boosting", 1.0}, 0.7},
          {{"Digits", "Logistic Regression", 2.0}, 0.3},
          {{"Iris", "Decision Tree", 2.0}, 0.1},
          {{"Iris", "Gradient Boosting", 1.0}, 0.75},
          {{"Iris", "Decision Tree", 1.0}, 0.95},
          {{"Digits", "Logistic Regression", 1.0}, 0.88},
          {{"Iris", "Logistic Regression", 2.0}, 0.3},
          {{"Digits", "Decision Tree", 2.0}, 0.15},
      };
  return *scores;
}

const std::map<std::string, double>& InsuranceBase() {
  static const auto* base = new std::map<std::string, double>{
      {"Decision Tree", 0.45},       {"Gaussian NB", 0.30},
      {"Gradient Boosting", 0.47},   {"K-Neighbors Classifier", 0.35},
      {"Linear SVC", 0.44},          {"Logistic Regression", 0.46},
      {"Random Forest", 0.55},
  };
  return *base;
}

}  // namespace

FunctionExecutor Fixture::MakeExecutor(std::size_t workers) const {
  auto fn = score;
  return FunctionExecutor(
      [fn](const Configuration& c) {
        RunResult r;
        r.score = fn(c);
        return r;
      },
      workers);
}

Fixture ClassifierFixture() {
  Fixture f;
  f.name = "classifier";
  f.universe = Universe({
      {"Dataset", PropertyKind::kCategorical, {Value("Iris"), Value("Digits")}},
      {"Estimator",
       PropertyKind::kCategorical,
       {Value("Logistic Regression"), Value("Decision Tree"),
        Value("Gradient Boosting")}},
      {"Library Version", PropertyKind::kCategorical, {Value(1.0), Value(2.0)}},
  });
  f.eval = {"score", 0.6, Direction::kGe};
  const Universe u = f.universe;
  f.score = [u](const Configuration& c) {
    const auto key = std::make_tuple(
        u.values(0)[c.at(0)].text(), u.values(1)[c.at(1)].text(),
        u.values(2)[c.at(2)].number());
    return ClassifierScores().at(key);
  };
  const std::tuple<const char*, const char*, double> seeds[] = {
      {"Iris", "Logistic Regression", 1.0},
      {"Digits", "Decision Tree", 1.0},
      {"Iris", "Gradient Boosting", 2.0},
  };
  int n = 0;
  for (const auto& [dataset, estimator, version] : seeds) {
    Instance inst;
    inst.config = Configuration::FromNamed(
        f.universe, {{"Dataset", Value(dataset)},
                     {"Estimator", Value(estimator)},
                     {"Library Version", Value(version)}});
    inst.score = f.score(inst.config);
    inst.outcome = f.eval.Evaluate(inst.score);
    inst.run_id = "seed-" + std::to_string(++n);
    inst.origin = Origin::kSeed;
    f.seeds.push_back(std::move(inst));
  }
  return f;
}

Fixture InsuranceFixture(double threshold) {
  Fixture f;
  f.name = threshold == 0.4 ? "insurance" : "insurance-strict";
  std::vector<Value> estimators;
  for (const auto& [name, base] : InsuranceBase()) estimators.emplace_back(name);
  f.universe = Universe({
      {"Estimator", PropertyKind::kCategorical, estimators},
      {"Scaler",
       PropertyKind::kCategorical,
       {Value("MinMax"), Value("None"), Value("Standard")}},
      {"Test Split", PropertyKind::kOrdered, {Value(0.2), Value(0.3)}},
  });
  f.eval = {"score", threshold, Direction::kGe};
  const Universe u = f.universe;
  f.score = [u](const Configuration& c) {
    const double base = InsuranceBase().at(u.values(0)[c.at(0)].text());
    const double scaler = 0.01 * (static_cast<double>(c.at(1)) - 1.0);
    const double split = c.at(2) == 0 ? 0.005 : -0.005;
    return base + scaler + split;
  };
  return f;
}

std::vector<std::string> FixtureNames() {
  return {"classifier", "insurance", "insurance-strict"};
}

Fixture FixtureByName(std::string_view name) {
  if (name == "classifier") return ClassifierFixture();
  if (name == "insurance") return InsuranceFixture(0.4);
  if (name == "insurance-strict") return InsuranceFixture(0.5);
  throw std::invalid_argument("unknown fixture \"" + std::string(name) + "\"");
}

}  // namespace pipedebug
