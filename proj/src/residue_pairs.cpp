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

#include "sdpc/residue_pairs.hpp"

#include <algorithm>
#include <cmath>

namespace sdpc {

std::optional<uint32_t> PrimeCompatiblePair::unused_reserve() const {
    for (uint32_t r : reserved) {
        if (assigned_positive != r && assigned_negative != r) return r;
    }
    return std::nullopt;
}

bool is_prime_compatible(const ResidueSet& U, const ResidueSet& V) {
    if (U.modulus() != V.modulus()) {
        throw Error("is_prime_compatible: mismatched moduli " + std::to_string(U.modulus()) + " and " +
                    std::to_string(V.modulus()));
    }
    const uint32_t p = U.modulus();
    if (U.empty() || V.empty()) return false;

    const auto only_u = (U - V).members();
    const auto only_v = (V - U).members();
    std::vector<char> covered(p, 0);
    uint32_t remaining = p - 1;
    for (uint32_t u : only_u) {
        for (uint32_t v : only_v) {
            uint32_t z = u >= v ? u - v : u + p - v;
            if (!covered[z]) {
                covered[z] = 1;
                if (--remaining == 0) return true;
            }
        }
    }
    return remaining == 0;
}

bool pair_invariants_hold(const PrimeCompatiblePair& pair) {
    if (pair.U.modulus() != pair.p || pair.V.modulus() != pair.p) return false;
    if (!is_prime_compatible(pair.U, pair.V)) return false;
    if (pair.reserved.size() > 2) return false;
    const auto common = pair.U & pair.V;
    for (uint32_t r : pair.reserved) {
        if (!common.contains(r)) return false;
    }
    auto is_reserved = [&](const std::optional<uint32_t>& a) {
        return !a || std::find(pair.reserved.begin(), pair.reserved.end(), *a) != pair.reserved.end();
    };
    if (!is_reserved(pair.assigned_positive) || !is_reserved(pair.assigned_negative)) return false;
    if (pair.assigned_positive && pair.assigned_negative && *pair.assigned_positive == *pair.assigned_negative) {
        return false;
    }
    return true;
}

PrimeCompatiblePair explicit_pair(uint32_t p) {
    if (p < 7 || !is_prime_u64(p)) {
        throw Error("explicit_pair requires a prime p >= 7, got " + std::to_string(p));
    }
    const uint64_t alpha = mulmod(residue_of(int64_t{-10}, p), mod_inverse(3, p), p);
    const uint64_t beta = (alpha + 11) % p;

    ResidueSet base_u(p, {0, 1, 2, p - 1});
    ResidueSet base_v(p, {0, 1});
    for (uint32_t r = 3; r <= p - 2; r++) base_v.insert(r);

    PrimeCompatiblePair pair{p, linear_map_set(base_u, alpha, beta), linear_map_set(base_v, alpha, beta), {}, {}, {}};
    pair.reserved = (pair.U & pair.V).members();
    return pair;
}

int64_t capacity_bound(uint64_t p) {
    const double bound = (static_cast<double>(p) - 1.0) / 2.0 - std::log(static_cast<double>(p)) / std::log(4.0 / 3.0);
    return static_cast<int64_t>(std::ceil(bound)) - 1;
}

ExtendResult randomized_extend(const ResidueSet& W, uint32_t reserve_count, SeededRng& rng, uint32_t max_attempts) {
    const uint32_t p = W.modulus();
    if (reserve_count > 2) throw Error("reserve_count must be 0, 1 or 2");
    if (static_cast<int64_t>(W.size() + reserve_count) > capacity_bound(p)) {
        throw Error("W too large for p: |W| = " + std::to_string(W.size()) + ", reserve = " +
                    std::to_string(reserve_count) + ", capacity_bound(" + std::to_string(p) +
                    ") = " + std::to_string(capacity_bound(p)));
    }

    std::vector<uint32_t> candidates = (ResidueSet::full(p) - W).members();
    std::vector<uint32_t> reserves;
    for (uint32_t i = 0; i < reserve_count; i++) {
        size_t idx = rng.below(candidates.size());
        reserves.push_back(candidates[idx]);
        candidates.erase(candidates.begin() + static_cast<ptrdiff_t>(idx));
    }
    std::sort(reserves.begin(), reserves.end());

    ResidueSet common = W;
    for (uint32_t r : reserves) common.insert(r);
    const auto free_residues = (ResidueSet::full(p) - common).members();

    for (uint32_t attempt = 1; attempt <= max_attempts; attempt++) {
        ResidueSet U = common;
        ResidueSet V = common;
        for (uint32_t r : free_residues) {
            if (rng.coin()) {
                U.insert(r);
            } else {
                V.insert(r);
            }
        }
        if (is_prime_compatible(U, V)) {
            return {PrimeCompatiblePair{p, std::move(U), std::move(V), reserves, {}, {}}, attempt};
        }
    }
    throw Error("randomized_extend: no compatible assignment for p = " + std::to_string(p) + " after " +
                std::to_string(max_attempts) + " attempts");
}

}  // namespace sdpc
