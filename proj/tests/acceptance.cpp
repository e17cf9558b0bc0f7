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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "sdpc/admissibility.hpp"
#include "sdpc/constellation.hpp"
#include "sdpc/construction.hpp"
#include "sdpc/residue_pairs.hpp"
#include "sdpc/state_io.hpp"

using namespace sdpc;

namespace {

struct Outcome {
    bool ok = true;
    std::string note;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            note = what;
        }
    }
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.ok = false;
        out.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.ok && secs > limit_s) {
        out.ok = false;
        out.note = "over time limit of " + std::to_string(static_cast<int>(limit_s)) + " s";
    }
    if (!out.ok) failures++;
    std::printf("[%s] %d %s (%.2f s)%s%s\n", out.ok ? "PASS" : "FAIL", id, name, secs, out.note.empty() ? "" : ": ",
                out.note.c_str());
    std::fflush(stdout);
}

bool trial_prime(long n) {
    n = std::labs(n);
    if (n < 2) return false;
    for (long d = 2; d * d <= n; d++) {
        if (n % d == 0) return false;
    }
    return true;
}

bool covers_units(const ResidueSet& U, const ResidueSet& V) {
    const uint32_t p = U.modulus();
    std::vector<bool> hit(p, false);
    for (uint32_t u : (U - V).members()) {
        for (uint32_t v : (V - U).members()) hit[(u + p - v) % p] = true;
    }
    for (uint32_t r = 1; r < p; r++) {
        if (!hit[r]) return false;
    }
    return true;
}

std::optional<Obstruction> brute_admissible(uint64_t q, uint64_t t, const std::vector<long>& d) {
    for (uint32_t p : primes_up_to(41)) {
        bool solvable = false;
        for (uint64_t k = 0; k < p && !solvable; k++) {
            const long x = static_cast<long>(t + k * q);
            solvable = std::none_of(d.begin(), d.end(), [&](long di) { return (x + di) % static_cast<long>(p) == 0; });
        }
        if (solvable) continue;
        if (q % p == 0) {
            for (size_t i = 0; i < d.size(); i++) {
                if ((static_cast<long>(t) + d[i]) % static_cast<long>(p) == 0) {
                    return Obstruction{p, ObstructionKind::FixedPrimeDivides, i};
                }
            }
        }
        return Obstruction{p, ObstructionKind::CompleteResidueSystem, std::nullopt};
    }
    return std::nullopt;
}

std::optional<long> naive_search(long q, long t, const std::vector<long>& d, long start, uint64_t budget) {
    long x = t;
    if (x < start) x += (start - t + q - 1) / q * q;
    for (uint64_t i = 0; i < budget; i++, x += q) {
        if (std::all_of(d.begin(), d.end(), [&](long di) { return std::labs(x + di) > 3 && trial_prime(x + di); })) {
            return x;
        }
    }
    return std::nullopt;
}

std::vector<ConstructionState> desk_states;

void initial_fidelity(Outcome& out) {
    auto s = initial_state(Config{});
    out.require(s.A == std::vector<mpz_class>{1, 11} && s.B == std::vector<mpz_class>{6}, "A or B differ");
    out.require(s.pairs.size() == 3, "managed primes are not exactly {2,3,5}");
    out.require(s.pairs.at(2).U == ResidueSet(2, {1}) && s.pairs.at(2).V == ResidueSet(2, {0}), "pair mod 2");
    out.require(s.pairs.at(3).U == ResidueSet(3, {1, 2}) && s.pairs.at(3).V == ResidueSet(3, {0}), "pair mod 3");
    out.require(s.pairs.at(5).U == ResidueSet(5, {0, 1, 2}) && s.pairs.at(5).V == ResidueSet(5, {1, 3, 4}),
                "pair mod 5");
    auto report = verify(s);
    out.require(report.passed(), "verify failed");
    out.require(report.shared_element == mpz_class(6), "5/-5 witnesses do not share 6");
}

void explicit_sweep(Outcome& out) {
    int count = 0;
    for (uint32_t p : primes_up_to(2000)) {
        if (p < 7) continue;
        auto pair = explicit_pair(p);
        auto only_u = pair.U - pair.V;
        auto only_v = pair.V - pair.U;
        const std::string at = " at p=" + std::to_string(p);
        out.require(only_u.contains(1), "1 not in U\\V" + at);
        out.require(only_u.contains(11 % p), "11 not in U\\V" + at);
        out.require(only_v.contains(6), "6 not in V\\U" + at);
        out.require((pair.U & pair.V).size() == 2, "|U&V| != 2" + at);
        out.require(covers_units(pair.U, pair.V), "difference cover incomplete" + at);
        count++;
    }
    out.note = std::to_string(count) + " primes";
}

void extend_statistics(Outcome& out) {
    int first_try = 0;
    uint32_t worst = 0;
    for (uint64_t trial = 0; trial < 100; trial++) {
        SeededRng rng(1000 + trial);
        ResidueSet W(101);
        while (W.size() < 20) W.insert(static_cast<uint32_t>(rng.below(101)));
        auto result = randomized_extend(W, 2, rng);
        out.require(is_prime_compatible(result.pair.U, result.pair.V), "incompatible pair");
        out.require(W.is_subset_of(result.pair.U & result.pair.V), "W not inside U&V");
        if (result.attempts == 1) first_try++;
        worst = std::max(worst, result.attempts);
    }
    out.require(first_try >= 90, "only " + std::to_string(first_try) + "/100 on the first attempt");
    if (out.ok) out.note = std::to_string(first_try) + "/100 first attempt, worst " + std::to_string(worst);
}

void admissibility_oracle(Outcome& out) {
    std::mt19937_64 gen(20260101);
    int cases = 0;
    while (cases < 12000) {
        const uint64_t q = std::array<uint64_t, 3>{2, 6, 30}[gen() % 3];
        const uint64_t t = gen() % q;
        const size_t size = 1 + gen() % 4;
        std::vector<long> d;
        while (d.size() < size) {
            const long v = static_cast<long>(gen() % 41) - 20;
            if (std::find(d.begin(), d.end(), v) == d.end()) d.push_back(v);
        }
        auto got = is_admissible(make_tuple_system(q, t, std::vector<mpz_class>(d.begin(), d.end())));
        if (got.obstruction != brute_admissible(q, t, d)) {
            out.require(false, "mismatch at case " + std::to_string(cases));
            return;
        }
        cases++;
    }
    out.note = std::to_string(cases) + " systems";
}

void search_oracle(Outcome& out) {
    ConstellationTask first{make_tuple_system(30, 25, {-6, -8, -18})};
    first.start = 19;
    out.require(next_constellation(first).x == mpz_class(25), "first step witness is not 25");

    std::mt19937_64 gen(77);
    int compared = 0;
    while (compared < 200) {
        const long q = std::array<long, 4>{1, 2, 6, 30}[gen() % 4];
        const long t = static_cast<long>(gen() % q);
        std::vector<long> d;
        const size_t size = 1 + gen() % 4;
        while (d.size() < size) {
            const long v = static_cast<long>(gen() % 41) - 20;
            if (std::find(d.begin(), d.end(), v) == d.end()) d.push_back(v);
        }
        ConstellationTask task{make_tuple_system(q, t, std::vector<mpz_class>(d.begin(), d.end()))};
        if (!is_admissible(task.sys).ok()) continue;
        task.start = static_cast<long>(gen() % 1000);
        task.budget = 1 + gen() % 100000;
        auto got = next_constellation(task, {.threads = 1, .segment_size = 1 + gen() % 5000});
        auto want = naive_search(q, t, d, task.start.get_si(), task.budget);
        if (want.has_value() != got.x.has_value() || (want && *got.x != *want)) {
            out.require(false, "disagreement with naive scan on task " + std::to_string(compared));
            return;
        }
        compared++;
    }

    const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
    ConstellationTask wide{make_tuple_system(30, 11, {0, 2, 6, 8})};  // prime quadruplets
    wide.start = mpz_class("100000000000");
    wide.budget = 50'000'000;
    auto one = next_constellation(wide, {.threads = 1});
    auto many = next_constellation(wide, {.threads = hw, .segment_size = 4096});
    out.require(one.x.has_value(), "quadruplet search exhausted");
    out.require(one.x == many.x && one.examined == many.examined, "thread counts disagree");
    if (out.ok) out.note = std::to_string(compared) + " tasks, 1 vs " + std::to_string(hw) + " threads agree";
}

void desk_construction(Outcome& out) {
    auto state = initial_state(Config{});
    desk_states.push_back(state);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::ostringstream log;

    // One run per target so every intermediate state is kept for criterion 8.
    const auto start = std::chrono::steady_clock::now();
    for (uint64_t target = 3; target <= 8; target++) {
        auto result = run(state, target, {.threads = hw});
        out.require(result.status == RunStatus::Complete, "exhausted: " + result.diagnostic);
        if (!out.ok) return;
        state = result.state;
        desk_states.push_back(state);
    }
    const double main_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(main_secs < 600, "coverage +-13 took over 10 minutes");
    auto report = verify(state);
    out.require(report.passed(), "verify failed");
    out.require(report.coverage >= 8, "coverage below +-13");
    out.require(!report.contains_probable, "probable-prime verdicts present");
    for (const auto& [r, w] : state.represented) {
        out.require(is_prime(r).status == PrimeStatus::CertifiedPrime, "uncertified difference " + r.get_str());
    }
    log << "coverage " << report.coverage << ", |A|=" << state.A.size() << ", max A " << state.A.back().get_str();

    // Stretch goal: +-17, +-19. Exhaustion is an acceptable outcome.
    const auto t0 = std::chrono::steady_clock::now();
    auto stretch = run(state, 12, {.threads = hw});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(verify(stretch.state).passed(), "stretch state failed verify");
    desk_states.push_back(stretch.state);
    if (stretch.status == RunStatus::Complete) {
        log << "; stretch reached coverage " << coverage(stretch.state);
    } else {
        log << "; stretch exhausted at coverage " << coverage(stretch.state) << " after " << static_cast<int>(secs)
            << " s (" << stretch.diagnostic << ")";
    }
    if (out.ok) out.note = log.str();
}

void bound_logic(Outcome& out) {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 1000; i++) {
        const uint64_t n = gen() % 100000;
        const uint64_t r = 5 + gen() % 1000000;
        const uint64_t reserve = gen() % 3;
        const double rhs = (static_cast<double>(r) - 1) / 2 - std::log(static_cast<double>(r)) / std::log(4.0 / 3.0);
        out.require(check_bound(n, r, reserve) == (static_cast<double>(2 * n + reserve) < rhs),
                    "check_bound mismatch at n=" + std::to_string(n) + " r=" + std::to_string(r));
    }
    const uint64_t k0 = compute_K(0);
    const uint64_t k2 = compute_K(2);
    out.require(compute_K(0) == k0 && compute_K(2) == k2, "compute_K not reproducible");
    out.require(k2 >= k0, "K(2) < K(0)");
    if (out.ok) out.note = "K(0)=" + std::to_string(k0) + ", K(2)=" + std::to_string(k2);
}

void persistence(Outcome& out) {
    out.require(!desk_states.empty(), "no states from criterion 6");
    for (const auto& s : desk_states) {
        const std::string first = save_state(s);
        auto loaded = load_state(first);
        out.require(verify(loaded).passed(), "reloaded state fails verify");
        out.require(save_state(loaded) == first, "second save differs");
    }
    if (out.ok) out.note = std::to_string(desk_states.size()) + " states";
}

}  // namespace

int main() {
    criterion(1, "initial-state fidelity", 1, initial_fidelity);
    criterion(2, "explicit pair sweep 7 <= p <= 2000", 60, explicit_sweep);
    criterion(3, "randomized extension statistics at p=101", 10, extend_statistics);
    criterion(4, "admissibility oracle equivalence", 60, admissibility_oracle);
    criterion(5, "search oracle equivalence and determinism", 60, search_oracle);
    criterion(6, "desk-scale construction to +-13", 1800, desk_construction);
    criterion(7, "bound and K logic", 10, bound_logic);
    criterion(8, "persistence idempotence", 60, persistence);
    return failures == 0 ? 0 : 1;
}
