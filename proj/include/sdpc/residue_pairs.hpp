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
#include <optional>
#include <vector>

#include "sdpc/modular.hpp"
#include "sdpc/rng.hpp"

namespace sdpc {

enum class Sign { Positive, Negative };

/**
 * Residue sets U, V mod p whose one-sided differences (U\V) - (V\U) cover
 * every nonzero class.
 *
 * `reserved` lists common residues of U and V that were kept free of set
 * elements so a later step targeting +p or -p can put both new elements in
 * the same class. A reserve stays listed after it is consumed; consumption is
 * tracked by `assigned_positive` / `assigned_negative`.
 */
struct PrimeCompatiblePair {
    uint32_t p;
    ResidueSet U;
    ResidueSet V;
    std::vector<uint32_t> reserved;
    std::optional<uint32_t> assigned_positive;
    std::optional<uint32_t> assigned_negative;

    const std::optional<uint32_t>& assigned(Sign s) const {
        return s == Sign::Positive ? assigned_positive : assigned_negative;
    }
    std::optional<uint32_t>& assigned(Sign s) {
        return s == Sign::Positive ? assigned_positive : assigned_negative;
    }

    // First reserve not yet consumed by either sign.
    std::optional<uint32_t> unused_reserve() const;

    bool operator==(const PrimeCompatiblePair&) const = default;
};

bool is_prime_compatible(const ResidueSet& U, const ResidueSet& V);

// Checks the difference cover and the reserved/assigned bookkeeping.
bool pair_invariants_hold(const PrimeCompatiblePair& pair);

/**
 * The pair alpha*U' + beta, alpha*V' + beta with U' = {0,1,2,p-1},
 * V' = {0,1,3,...,p-2}, 3*alpha = -10 and beta = alpha + 11 (mod p).
 * It puts 1 and 11 in U\V, 6 in V\U, and U and V share two residues,
 * both listed as reserves. Requires p >= 7.
 */
PrimeCompatiblePair explicit_pair(uint32_t p);

// Largest m with m < (p-1)/2 - log p / log(4/3). Negative when no set fits.
int64_t capacity_bound(uint64_t p);

struct ExtendResult {
    PrimeCompatiblePair pair;
    uint32_t attempts;  // 1 when the first random assignment worked
};

inline constexpr uint32_t kDefaultExtendAttempts = 10'000;

/**
 * Extends W (mod p) to a compatible pair with W inside both sides.
 *
 * Draw order, fixed for reproducibility: first `reserve_count` reserves, each
 * picked uniformly from the ascending list of residues outside W (and outside
 * earlier reserves); then, per attempt, one coin per residue outside
 * W + reserves in ascending order (heads -> U, tails -> V).
 */
ExtendResult randomized_extend(const ResidueSet& W, uint32_t reserve_count, SeededRng& rng,
                               uint32_t max_attempts = kDefaultExtendAttempts);

}  // namespace sdpc
