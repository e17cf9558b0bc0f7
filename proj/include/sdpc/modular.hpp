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
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace sdpc {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m);

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime_u64(uint64_t n);

// n mod m in [0, m), for any sign of n.
uint64_t residue_of(const mpz_class& n, uint64_t m);
uint64_t residue_of(int64_t n, uint64_t m);

// Inverse of a modulo the prime p. Throws if p | a.
uint64_t mod_inverse(int64_t a, uint64_t p);

/**
 * A subset of Z_p for a prime p, stored as a dense bit-vector.
 *
 * Members are always in [0, p). Set algebra requires equal moduli.
 */
class ResidueSet {
  public:
    explicit ResidueSet(uint32_t modulus);
    ResidueSet(uint32_t modulus, std::initializer_list<uint32_t> members);
    ResidueSet(uint32_t modulus, std::span<const uint32_t> members);

    // Reduces arbitrary integers modulo p.
    static ResidueSet from_values(uint32_t modulus, std::span<const mpz_class> values);
    static ResidueSet full(uint32_t modulus);

    uint32_t modulus() const { return modulus_; }
    bool contains(uint32_t r) const;
    size_t size() const;
    bool empty() const { return size() == 0; }
    std::vector<uint32_t> members() const;

    void insert(uint32_t r);
    void erase(uint32_t r);

    ResidueSet operator&(const ResidueSet& o) const;
    ResidueSet operator|(const ResidueSet& o) const;
    // Set difference.
    ResidueSet operator-(const ResidueSet& o) const;
    bool is_subset_of(const ResidueSet& o) const;

    bool operator==(const ResidueSet& o) const = default;

    std::string to_string() const;

  private:
    void check_same_modulus(const ResidueSet& o) const;

    uint32_t modulus_;
    std::vector<uint64_t> words_;
};

/**
 * x = residue (mod modulus); modulus is the product of the distinct primes in
 * `factors` (kept sorted so callers never need to refactor q).
 */
struct CrtClass {
    mpz_class modulus = 1;
    mpz_class residue = 0;
    std::vector<uint32_t> factors;
};

struct Congruence {
    uint64_t residue;
    uint32_t prime;
};

CrtClass crt_combine(std::span<const Congruence> constraints);

// { alpha*x + beta mod p : x in s }
ResidueSet linear_map_set(const ResidueSet& s, uint64_t alpha, uint64_t beta);

// Sieve of Eratosthenes, primes <= limit.
std::vector<uint32_t> primes_up_to(uint32_t limit);

}  // namespace sdpc
