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


#ifndef PIPEDEBUG_SIMPLIFY_H_
#define PIPEDEBUG_SIMPLIFY_H_

#include <cstdint>

#include "pipedebug/model.h"
#include "pipedebug/universe.h"

namespace pipedebug {

// Universes up to this many configurations get the prime-cover pass.
inline constexpr std::uint64_t kSimplifyEnumerationLimit = std::uint64_t{1} << 16;

// Rewrites a DNF into a shorter one with the same satisfying configurations
// over `universe`.
//
//   1. Absorption: drop conjunctions whose satisfying set lies inside
//      another's.
//   2. Merge: two conjunctions that differ only on one property, where the
//      union of their admissible values is that property's whole universe,
//      become one with the property unconstrained. Repeated with absorption
//      until nothing changes.
//   3. On enumerable universes: grow each conjunction into a maximal box of
//      failing configurations without exceeding its predicate count, pick a
//      greedy cover (most uncovered configurations, then fewer predicates,
//      then canonical order) and drop redundant picks. Kept only if it is no
//      longer than the result of step 2.
//
// Every output conjunction is in shortest form and the list is sorted, so
// the result is canonical: equivalent inputs that reach the same boxes
// produce identical output, and Simplify(Simplify(e)) == Simplify(e).
// Unsatisfiable conjunctions are dropped.
Explanation Simplify(const Explanation& explanation, const Universe& universe);

// Total number of predicates.
std::size_t ExplanationSize(const Explanation& explanation);

}  // namespace pipedebug

#endif  // PIPEDEBUG_SIMPLIFY_H_
