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

#include "sdpc/admissibility.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace sdpc {

namespace {

uint64_t pollard_brent(uint64_t n) {
    if (n % 2 == 0) return 2;
    for (uint64_t c = 1;; c++) {
        auto f = [&](uint64_t x) { return (mulmod(x, x, n) + c) % n; };
        uint64_t x = 2, y = 2, d = 1;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_into(uint64_t n, std::set<uint64_t>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.insert(n);
        return;
    }
    uint64_t d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<uint64_t> distinct_prime_factors(uint64_t n) {
    std::set<uint64_t> out;
    for (uint64_t p = 2; p < 1000 && p * p <= n; p++) {
        if (n % p == 0) {
            out.insert(p);
            while (n % p == 0) n /= p;
        }
    }
    factor_into(n, out);
    return {out.begin(), out.end()};
}

std::string Obstruction::describe() const {
    if (kind == ObstructionKind::FixedPrimeDivides) {
        return "p=" + std::to_string(p) + " divides t+d_" + std::to_string(offset_index.value_or(0)) +
               " (fixed-prime-divides)";
    }
    return "p=" + std::to_string(p) + " offsets cover every residue (complete-residue-system)";
}

void validate(const TupleSystem& sys) {
    if (sys.crt.modulus < 1) throw Error("tuple system modulus must be positive");
    if (sys.crt.residue < 0 || sys.crt.residue >= sys.crt.modulus) throw Error("tuple system residue outside [0, q)");
    std::vector<mpz_class> sorted = sys.offsets;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error("tuple system offsets must be pairwise distinct");
    }
}

TupleSystem make_tuple_system(const mpz_class& q, const mpz_class& t, std::vector<mpz_class> offsets,
                              std::optional<std::vector<uint32_t>> factors) {
    TupleSystem sys;
    sys.crt.modulus = q;
    sys.crt.residue = t;
    sys.offsets = std::move(offsets);
    if (q < 1) throw Error("tuple system modulus must be positive");
    if (factors) {
        sys.crt.factors = *factors;
        std::sort(sys.crt.factors.begin(), sys.crt.factors.end());
        for (uint32_t p : sys.crt.factors) {
            if (!is_prime_u64(p) || q % p != 0) {
                throw Error("factor " + std::to_string(p) + " is not a prime divisor of q");
            }
        }
    } else {
        if (!q.fits_ulong_p()) throw Error("modulus above 2^64 needs an explicit factor list");
        for (uint64_t p : distinct_prime_factors(q.get_ui())) {
            if (p > UINT32_MAX) throw Error("prime factor of q exceeds 32 bits");
            sys.crt.factors.push_back(static_cast<uint32_t>(p));
        }
    }
    validate(sys);
    return sys;
}

Admissibility is_admissible(const TupleSystem& sys) {
    validate(sys);
    const size_t k = sys.offsets.size();

    std::vector<uint32_t> primes = sys.crt.factors;
    for (uint32_t p : primes_up_to(static_cast<uint32_t>(std::min<size_t>(k, UINT32_MAX)))) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

    for (uint32_t p : primes) {
        const bool divides_q = std::binary_search(sys.crt.factors.begin(), sys.crt.factors.end(), p);
        if (divides_q) {
            const uint64_t t_mod = residue_of(sys.crt.residue, p);
            for (size_t i = 0; i < k; i++) {
                if ((t_mod + residue_of(sys.offsets[i], p)) % p == 0) {
                    return {Obstruction{p, ObstructionKind::FixedPrimeDivides, i}};
                }
            }
        } else {
            std::vector<char> seen(p, 0);
            size_t distinct = 0;
            for (const auto& d : sys.offsets) {
                auto r = residue_of(d, p);
                if (!seen[r]) {
                    seen[r] = 1;
                    distinct++;
                }
            }
            if (distinct == p) return {Obstruction{p, ObstructionKind::CompleteResidueSystem, std::nullopt}};
        }
    }
    return {};
}

}  // namespace sdpc
