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

#include <doctest.h>

#include <random>

#include "sdpc/modular.hpp"

using namespace sdpc;

TEST_SUITE("modular") {

TEST_CASE("mod_inverse examples") {
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(mod_inverse(1, 13) == 1);
    CHECK(mod_inverse(3, 11) == 4);
    CHECK(mod_inverse(-1, 7) == 6);
    CHECK_THROWS_AS(mod_inverse(14, 7), Error);
    CHECK_THROWS_AS(mod_inverse(0, 5), Error);
}

TEST_CASE("mod_inverse is exact for every residue of every p <= 101") {
    for (uint32_t p : primes_up_to(101)) {
        for (int64_t a = 1; a < p; a++) {
            CHECK(mulmod(static_cast<uint64_t>(a), mod_inverse(a, p), p) == 1);
        }
    }
}

TEST_CASE("is_prime_u64 agrees with trial division below 10^5") {
    auto trial = [](uint64_t n) {
        if (n < 2) return false;
        for (uint64_t d = 2; d * d <= n; d++) {
            if (n % d == 0) return false;
        }
        return true;
    };
    for (uint64_t n = 0; n < 100'000; n++) REQUIRE(is_prime_u64(n) == trial(n));
    CHECK(is_prime_u64((uint64_t{1} << 61) - 1));
    CHECK_FALSE(is_prime_u64(3215031751ull));  // strong pseudoprime to bases 2,3,5,7
    CHECK(is_prime_u64(18446744073709551557ull));  // largest 64-bit prime
}

TEST_CASE("crt_combine examples") {
    std::vector<Congruence> c1{{1, 2}, {1, 3}, {0, 5}};
    auto r1 = crt_combine(c1);
    CHECK(r1.residue == 25);
    CHECK(r1.modulus == 30);
    CHECK(r1.factors == std::vector<uint32_t>{2, 3, 5});

    std::vector<Congruence> c2{{1, 2}};
    auto r2 = crt_combine(c2);
    CHECK(r2.residue == 1);
    CHECK(r2.modulus == 2);

    std::vector<Congruence> c3{{0, 2}, {0, 3}};
    auto r3 = crt_combine(c3);
    CHECK(r3.residue == 0);
    CHECK(r3.modulus == 6);
}

TEST_CASE("crt_combine errors") {
    std::vector<Congruence> dup{{1, 3}, {2, 3}};
    CHECK_THROWS_AS(crt_combine(dup), Error);
    std::vector<Congruence> range{{5, 5}};
    CHECK_THROWS_AS(crt_combine(range), Error);
    std::vector<Congruence> composite{{1, 9}};
    CHECK_THROWS_AS(crt_combine(composite), Error);
}

TEST_CASE("crt_combine round trips for moduli up to 10^30") {
    std::mt19937_64 gen(12345);
    const auto primes = primes_up_to(5000);
    const mpz_class cap("1000000000000000000000000000000");
    for (int trial = 0; trial < 300; trial++) {
        std::vector<uint32_t> pool = primes;
        std::shuffle(pool.begin(), pool.end(), gen);
        std::vector<Congruence> cs;
        mpz_class q = 1;
        for (uint32_t p : pool) {
            if (q * p > cap) break;
            q *= p;
            cs.push_back({gen() % p, p});
        }
        auto crt = crt_combine(cs);
        REQUIRE(crt.modulus == q);
        REQUIRE(crt.residue >= 0);
        REQUIRE(crt.residue < q);
        for (const auto& c : cs) REQUIRE(residue_of(crt.residue, c.prime) == c.residue);
    }
}

TEST_CASE("linear_map_set examples") {
    ResidueSet s(7, {0, 1, 2, 6});
    // direct evaluation of 6x + 3 mod 7
    ResidueSet expected(7);
    for (uint32_t x : {0u, 1u, 2u, 6u}) expected.insert((6 * x + 3) % 7);
    CHECK(linear_map_set(s, 6, 3) == expected);
    CHECK(expected == ResidueSet(7, {3, 2, 1, 4}));

    ResidueSet t(13, {0, 4, 5, 12});
    CHECK(linear_map_set(t, 1, 0) == t);
    CHECK(linear_map_set(ResidueSet(5, {0}), 2, 3) == ResidueSet(5, {3}));
    CHECK_THROWS_AS(linear_map_set(s, 7, 1), Error);
    CHECK_THROWS_AS(linear_map_set(s, 0, 1), Error);
}

TEST_CASE("linear_map_set is a bijection undone by its inverse map") {
    std::mt19937_64 gen(99);
    for (uint32_t p : primes_up_to(97)) {
        for (int trial = 0; trial < 20; trial++) {
            ResidueSet s(p);
            for (uint32_t r = 0; r < p; r++) {
                if (gen() % 3 == 0) s.insert(r);
            }
            const uint64_t alpha = 1 + gen() % (p - 1);
            const uint64_t beta = gen() % p;
            auto image = linear_map_set(s, alpha, beta);
            REQUIRE(image.size() == s.size());
            const uint64_t inv = mod_inverse(static_cast<int64_t>(alpha), p);
            const uint64_t back_beta = (p - mulmod(inv, beta, p)) % p;
            REQUIRE(linear_map_set(image, inv, back_beta) == s);
        }
    }
}

TEST_CASE("ResidueSet invariants") {
    CHECK_THROWS_AS(ResidueSet(9), Error);
    CHECK_THROWS_AS(ResidueSet(7, {7}), Error);
    ResidueSet a(11, {1, 2, 3});
    ResidueSet b(11, {3, 4});
    CHECK((a & b) == ResidueSet(11, {3}));
    CHECK((a | b) == ResidueSet(11, {1, 2, 3, 4}));
    CHECK((a - b) == ResidueSet(11, {1, 2}));
    CHECK_THROWS_AS(a & ResidueSet(13), Error);
    std::vector<mpz_class> values{-1, 12, 100};
    CHECK(ResidueSet::from_values(11, values) == ResidueSet(11, {10, 1}));
    CHECK(ResidueSet(131, {0, 64, 130}).members() == std::vector<uint32_t>{0, 64, 130});
}

TEST_CASE("residue_of handles signs and wide moduli") {
    CHECK(residue_of(int64_t{-1}, 7) == 6);
    CHECK(residue_of(int64_t{-14}, 7) == 0);
    CHECK(residue_of(INT64_MIN, 3) == 1);  // -2^63 = -9223372036854775808 = 1 mod 3
    CHECK(residue_of(mpz_class(-5), 3) == 1);
    const uint64_t big = 18446744073709551557ull;
    CHECK(residue_of(mpz_class("36893488147419103114"), big) == 0);  // 2 * big
}

}  // TEST_SUITE
