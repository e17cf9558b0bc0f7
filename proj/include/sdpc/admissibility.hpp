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
#include <string>
#include <vector>

#include "sdpc/modular.hpp"

namespace sdpc {

// x = t (mod q) with every x + d_i required to be a signed prime.
struct TupleSystem {
    CrtClass crt;
    std::vector<mpz_class> offsets;
};

/**
 * Builds a system from a bare modulus. Without `factors`, q is factored
 * directly, which is only supported up to 2^64.
 */
TupleSystem make_tuple_system(const mpz_class& q, const mpz_class& t, std::vector<mpz_class> offsets,
                              std::optional<std::vector<uint32_t>> factors = std::nullopt);

// Throws on repeated offsets or t outside [0, q).
void validate(const TupleSystem& sys);

enum class ObstructionKind { FixedPrimeDivides, CompleteResidueSystem };

struct Obstruction {
    uint32_t p;
    ObstructionKind kind;
    // For FixedPrimeDivides: the first i with p | t + d_i.
    std::optional<size_t> offset_index;

    std::string describe() const;
    bool operator==(const Obstruction&) const = default;
};

struct Admissibility {
    std::optional<Obstruction> obstruction;
    bool ok() const { return !obstruction.has_value(); }
};

/**
 * Local conditions for x = t (mod q) with all x + d_i prime:
 *   p | q:  p must not divide any t + d_i;
 *   p !| q: the d_i must not cover Z_p (only possible for p <= #offsets).
 * Returns the smallest obstructing prime, if any.
 */
Admissibility is_admissible(const TupleSystem& sys);

std::vector<uint64_t> distinct_prime_factors(uint64_t n);

}  // namespace sdpc
