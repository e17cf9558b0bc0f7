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

#include "sdpc/modular.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace sdpc {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    static constexpr uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (uint64_t p : kBases) {
        if (n % p == 0) return n == p;
    }
    if (n < 41 * 41) return true;

    uint64_t d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    for (uint64_t a : kBases) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; r++) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

uint64_t residue_of(const mpz_class& n, uint64_t m) {
    // mpz_fdiv_ui gives the non-negative remainder for either sign.
    if (m <= 0xFFFFFFFFul) return mpz_fdiv_ui(n.get_mpz_t(), m);
    mpz_class r;
    mpz_class mm;
    mpz_import(mm.get_mpz_t(), 1, 1, sizeof(m), 0, 0, &m);
    mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), mm.get_mpz_t());
    uint64_t out = 0;
    mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, r.get_mpz_t());
    return out;
}

uint64_t residue_of(int64_t n, uint64_t m) {
    if (n >= 0) return static_cast<uint64_t>(n) % m;
    uint64_t mag = static_cast<uint64_t>(-(n + 1)) + 1;
    uint64_t r = mag % m;
    return r == 0 ? 0 : m - r;
}

uint64_t mod_inverse(int64_t a, uint64_t p) {
    uint64_t ar = residue_of(a, p);
    if (ar == 0) throw Error("no inverse: " + std::to_string(a) + " is 0 mod " + std::to_string(p));
    // Extended Euclid on signed 128-bit to avoid overflow for p near 2^64.
    __int128 old_r = ar, r = p, old_s = 1, s = 0;
    while (r != 0) {
        __int128 q = old_r / r;
        __int128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw Error("no inverse: modulus not prime");
    __int128 inv = old_s % static_cast<__int128>(p);
    if (inv < 0) inv += p;
    return static_cast<uint64_t>(inv);
}

ResidueSet::ResidueSet(uint32_t modulus) : modulus_(modulus), words_((modulus + 63) / 64, 0) {
    if (!is_prime_u64(modulus)) {
        throw Error("residue set modulus " + std::to_string(modulus) + " is not prime");
    }
}

ResidueSet::ResidueSet(uint32_t modulus, std::initializer_list<uint32_t> members)
    : ResidueSet(modulus, std::span<const uint32_t>(members.begin(), members.size())) {}

ResidueSet::ResidueSet(uint32_t modulus, std::span<const uint32_t> members) : ResidueSet(modulus) {
    for (uint32_t r : members) insert(r);
}

ResidueSet ResidueSet::from_values(uint32_t modulus, std::span<const mpz_class> values) {
    ResidueSet s(modulus);
    for (const auto& v : values) s.insert(static_cast<uint32_t>(residue_of(v, modulus)));
    return s;
}

ResidueSet ResidueSet::full(uint32_t modulus) {
    ResidueSet s(modulus);
    for (uint32_t r = 0; r < modulus; r++) s.insert(r);
    return s;
}

bool ResidueSet::contains(uint32_t r) const {
    return r < modulus_ && ((words_[r / 64] >> (r % 64)) & 1);
}

size_t ResidueSet::size() const {
    size_t n = 0;
    for (uint64_t w : words_) n += std::popcount(w);
    return n;
}

std::vector<uint32_t> ResidueSet::members() const {
    std::vector<uint32_t> out;
    for (size_t i = 0; i < words_.size(); i++) {
        uint64_t w = words_[i];
        while (w) {
            int b = std::countr_zero(w);
            out.push_back(static_cast<uint32_t>(i * 64 + b));
            w &= w - 1;
        }
    }
    return out;
}

void ResidueSet::insert(uint32_t r) {
    if (r >= modulus_) {
        throw Error("residue " + std::to_string(r) + " out of range mod " + std::to_string(modulus_));
    }
    words_[r / 64] |= uint64_t{1} << (r % 64);
}

void ResidueSet::erase(uint32_t r) {
    if (r < modulus_) words_[r / 64] &= ~(uint64_t{1} << (r % 64));
}

void ResidueSet::check_same_modulus(const ResidueSet& o) const {
    if (modulus_ != o.modulus_) {
        throw Error("mismatched moduli " + std::to_string(modulus_) + " and " + std::to_string(o.modulus_));
    }
}

ResidueSet ResidueSet::operator&(const ResidueSet& o) const {
    check_same_modulus(o);
    ResidueSet out = *this;
    for (size_t i = 0; i < words_.size(); i++) out.words_[i] &= o.words_[i];
    return out;
}

ResidueSet ResidueSet::operator|(const ResidueSet& o) const {
    check_same_modulus(o);
    ResidueSet out = *this;
    for (size_t i = 0; i < words_.size(); i++) out.words_[i] |= o.words_[i];
    return out;
}

ResidueSet ResidueSet::operator-(const ResidueSet& o) const {
    check_same_modulus(o);
    ResidueSet out = *this;
    for (size_t i = 0; i < words_.size(); i++) out.words_[i] &= ~o.words_[i];
    return out;
}

bool ResidueSet::is_subset_of(const ResidueSet& o) const {
    check_same_modulus(o);
    for (size_t i = 0; i < words_.size(); i++) {
        if (words_[i] & ~o.words_[i]) return false;
    }
    return true;
}

std::string ResidueSet::to_string() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (uint32_t r : members()) {
        if (!first) os << ",";
        os << r;
        first = false;
    }
    os << "} mod " << modulus_;
    return os.str();
}

CrtClass crt_combine(std::span<const Congruence> constraints) {
    std::vector<Congruence> sorted(constraints.begin(), constraints.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Congruence& a, const Congruence& b) { return a.prime < b.prime; });

    CrtClass out;
    for (size_t i = 0; i < sorted.size(); i++) {
        const auto& c = sorted[i];
        if (!is_prime_u64(c.prime)) throw Error("crt modulus " + std::to_string(c.prime) + " is not prime");
        if (i > 0 && sorted[i - 1].prime == c.prime) {
            throw Error("duplicate crt modulus " + std::to_string(c.prime));
        }
        if (c.residue >= c.prime) {
            throw Error("crt residue " + std::to_string(c.residue) + " out of range mod " + std::to_string(c.prime));
        }
        // Lift: t' = t + q * k with k = (r - t) * q^-1 mod p.
        uint64_t t_mod = residue_of(out.residue, c.prime);
        uint64_t q_mod = residue_of(out.modulus, c.prime);
        uint64_t diff = (c.residue + c.prime - t_mod) % c.prime;
        uint64_t k = mulmod(diff, mod_inverse(static_cast<int64_t>(q_mod), c.prime), c.prime);
        out.residue += out.modulus * mpz_class(static_cast<unsigned long>(k));
        out.modulus *= static_cast<unsigned long>(c.prime);
        out.factors.push_back(c.prime);
    }
    return out;
}

ResidueSet linear_map_set(const ResidueSet& s, uint64_t alpha, uint64_t beta) {
    const uint64_t p = s.modulus();
    if (alpha % p == 0) throw Error("linear map with alpha = 0 mod p is not a bijection");
    ResidueSet out(s.modulus());
    for (uint32_t x : s.members()) {
        out.insert(static_cast<uint32_t>((mulmod(alpha % p, x, p) + beta % p) % p));
    }
    return out;
}

std::vector<uint32_t> primes_up_to(uint32_t limit) {
    std::vector<uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<size_t>(limit) + 1, false);
    for (uint64_t i = 2; i <= limit; i++) {
        if (composite[i]) continue;
        primes.push_back(static_cast<uint32_t>(i));
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

}  // namespace sdpc
