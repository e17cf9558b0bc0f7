// Copyright 2026 The sdpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sdpc/admissibility.hpp"
#include "sdpc/primality.hpp"

namespace sdpc {

inline constexpr uint64_t kDefaultBudget = 100'000'000;
inline constexpr uint32_t kDefaultSieveLimit = 100'000;
inline constexpr uint64_t kDefaultSegmentSize = uint64_t{1} << 16;

/**
 * Candidates are x = t + k*q for k = k0, k0+1, ..., k0+budget-1 where k0 is
 * the first index with x >= start.
 */
struct ConstellationTask {
    TupleSystem sys;
    mpz_class start = 0;
    uint64_t budget = kDefaultBudget;
    uint32_t sieve_limit = kDefaultSieveLimit;
    std::vector<mpz_class> exclusions;
    // Optional extra acceptance test, applied after primality. Must be pure
    // and thread safe.
    std::function<bool(const mpz_class&)> filter;
};

struct SearchOptions {
    unsigned threads = 1;
    uint64_t segment_size = kDefaultSegmentSize;
    int prp_rounds = kDefaultPrpRounds;
};

struct SearchResult {
    std::optional<mpz_class> x;
    uint64_t examined = 0;
    // Verdicts for x + d_i, in offset order, when x was found.
    std::vector<PrimalityVerdict> verdicts;

    bool exhausted() const { return !x.has_value(); }
};

class InadmissibleError : public Error {
  public:
    explicit InadmissibleError(Obstruction o)
        : Error("inadmissible tuple system: " + o.describe()), obstruction(o) {}
    Obstruction obstruction;
};

void validate(const ConstellationTask& task);

// Index of the first candidate >= task.start.
uint64_t first_candidate_index(const ConstellationTask& task);

/**
 * Sieves candidates k in [lo, hi). A candidate survives unless some prime
 * p <= sieve_limit divides some x + d_i with |x + d_i| != p.
 */
std::vector<mpz_class> sieve_segment(const ConstellationTask& task, uint64_t lo, uint64_t hi);

/**
 * Smallest candidate x (not excluded, accepted by the filter if one is set)
 * with every |x + d_i| > 3 prime, or
 * exhausted after `budget` candidates. The answer does not depend on the
 * thread count or segment size. Throws InadmissibleError for inadmissible
 * systems.
 */
SearchResult next_constellation(const ConstellationTask& task, const SearchOptions& options = {});

}  // namespace sdpc
