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

#ifndef PIPEDEBUG_PROBEGEN_H_
#define PIPEDEBUG_PROBEGEN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pipedebug/box.h"
#include "pipedebug/model.h"
#include "pipedebug/provenance.h"
#include "pipedebug/universe.h"

namespace pipedebug {

enum class DesignStrategy { kRandom, kCovering };

struct Design {
  std::vector<Configuration> configs;
  // Set when more configurations were requested than the universe holds;
  // `configs` is then the whole product.
  std::string warning;
};

// `n` distinct configurations. kRandom samples each property uniformly and
// rejects duplicates. kCovering greedily covers every property-value pair
// and then every pair of values of two properties, and fills up to `n` with
// random distinct configurations once coverage is complete. Deterministic
// in `seed`. Configurations already in `exclude` are never returned.
Design InitialDesign(const Universe& universe, std::size_t n,
                     DesignStrategy strategy, std::uint64_t seed,
                     const Evidence* exclude = nullptr);

// Rows of a greedy strength-2 covering array (no filling).
std::vector<Configuration> PairwiseCover(const Universe& universe,
                                         std::uint64_t seed,
                                         const Evidence* exclude = nullptr);

// Up to `k` untested configurations satisfying `suspect`, best first.
//
// The first probes are succeeding runs moved into the suspect, most recent
// first: values the suspect admits are kept and the others replaced by the
// most preferred admissible value. The rest follow a per-property
// preference order over the admissible values. Properties restricted by <=
// or > start at the admissible value closest to the threshold (ties to the
// smaller value). All other properties prefer values seen in SUCCEED
// instances (most recent first), then values never seen in a FAIL instance,
// then the rest in seeded random order. Configurations are ranked by the
// sum of their values' positions, with a seeded hash as tie-break. A
// smaller `k` always returns a prefix of a larger one. Configurations inside
// any `avoid` box are skipped. Returns an empty list iff every satisfying
// configuration outside `avoid` is already in `evidence`.
std::vector<Configuration> ProbesForSuspect(const Conjunction& suspect,
                                            const Universe& universe,
                                            const Evidence& evidence,
                                            std::size_t k, std::uint64_t seed,
                                            std::span<const Box> avoid = {});

}  // namespace pipedebug

#endif  // PIPEDEBUG_PROBEGEN_H_
