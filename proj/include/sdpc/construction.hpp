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
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sdpc/admissibility.hpp"
#include "sdpc/constellation.hpp"
#include "sdpc/modular.hpp"
#include "sdpc/residue_pairs.hpp"

namespace sdpc {

// The n-th signed prime of 5, -5, 7, -7, 11, -11, ... (n >= 1).
int64_t signed_prime(uint64_t n);

// Inverse of signed_prime; throws if r is not a signed prime with |r| > 3.
uint64_t signed_prime_index(int64_t r);

// 2n + reserve < (r-1)/2 - log r / log(4/3)
bool check_bound(uint64_t n, uint64_t r, uint64_t reserve);

inline constexpr uint64_t kDefaultKScanLimit = 1'000'000;

/**
 * Smallest K such that check_bound(n, |r_n|, reserve) holds whenever
 * |r_n| >= K/2. Every n <= scan_limit is checked directly; beyond it the
 * bound p_m > m log m on the m-th prime shows the slack stays positive and
 * increasing. Throws if that tail argument does not close at scan_limit.
 */
uint64_t compute_K(uint64_t reserve, uint64_t scan_limit = kDefaultKScanLimit);

enum class Mode { Reduced, Faithful };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);

struct Config {
    Mode mode = Mode::Reduced;
    // Reduced mode manages pairs for primes below p_limit.
    uint32_t p_limit = 7;
    // Faithful mode manages pairs for primes below max(K, |r_{n+1}|).
    // K = 0 means "compute it" at initial_state.
    uint64_t K = 0;
    uint64_t k_scan_limit = kDefaultKScanLimit;
    uint32_t reserve_count = 2;
    uint64_t budget = kDefaultBudget;
    uint32_t sieve_limit = kDefaultSieveLimit;
    uint64_t segment_size = kDefaultSegmentSize;
    int prp_rounds = kDefaultPrpRounds;
    // Reject a witness when the enlarged sets would already leave one of the
    // next `lookahead` unrepresented targets inadmissible at an unmanaged prime.
    uint32_t lookahead = 4;
    uint64_t seed = 0;

    bool operator==(const Config&) const = default;
};

void validate(const Config& config);

struct Witness {
    mpz_class a;
    mpz_class b;
};

struct ConstructionState {
    uint64_t n = 0;  // index of the last signed prime processed
    std::vector<mpz_class> A;  // sorted
    std::vector<mpz_class> B;  // sorted
    std::map<uint32_t, PrimeCompatiblePair> pairs;
    // Every difference a - b, keyed by its value.
    std::map<mpz_class, Witness> represented;
    Config config;
    uint64_t draws = 0;  // rng draws consumed so far from config.seed
};

// Largest m with r_1, ..., r_m all represented.
uint64_t coverage(const ConstructionState& state);

// Exclusive bound on the primes that must carry a pair at the state's step.
uint64_t managed_limit(const ConstructionState& state);

ConstructionState initial_state(Config config);

struct StepPlan {
    int64_t target;
    // p -> (u_p, v_p): x = u_p and x - target = v_p (mod p).
    std::map<uint32_t, std::pair<uint32_t, uint32_t>> choices;
    // Set when |target| is a managed prime and one of its reserves was taken.
    std::optional<uint32_t> reserve_prime;
    CrtClass crt;
    std::vector<mpz_class> offsets;  // -b for b in B, then -target - a for a in A, deduplicated
    mpz_class min_x;

    TupleSystem system() const { return {crt, offsets}; }
};

struct AlreadyRepresented {};

std::variant<StepPlan, AlreadyRepresented> plan_step(const ConstructionState& state, int64_t target);

/**
 * Condition (iii): true when x would put an element into A or B twice, or
 * produce a difference that is already represented or appears twice among
 * the new ones.
 */
bool creates_coincidence(const ConstructionState& state, const StepPlan& plan, const mpz_class& x);

/**
 * Necessary condition for the next `horizon` unrepresented targets after
 * plan.target to remain plannable once x is added: their offset sets must
 * not cover Z_p for any unmanaged prime p. Adding elements only adds
 * offsets, so a failure here can never be repaired by later steps.
 */
bool keeps_future_admissible(const ConstructionState& state, const StepPlan& plan, const mpz_class& x,
                             uint32_t horizon);

// Adds x to A and x - target to B. Throws on any precondition or coincidence.
ConstructionState apply_step(const ConstructionState& state, const StepPlan& plan, const mpz_class& x);

ConstructionState extend_pairs(const ConstructionState& state);

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    uint64_t coverage = 0;
    bool contains_probable = false;
    std::optional<mpz_class> shared_element;  // common element of the +-5 witnesses

    bool passed() const;
    const CheckResult* find(std::string_view name) const;
};

VerifyReport verify(const ConstructionState& state);

struct StepRecord {
    uint64_t index;
    int64_t target;
    bool free;  // already represented, no search
    std::optional<mpz_class> x;
    uint64_t examined = 0;
    double seconds = 0;
    bool probable = false;  // some new difference is only a probable prime
};

enum class RunStatus { Complete, Exhausted };

struct RunResult {
    ConstructionState state;
    RunStatus status = RunStatus::Complete;
    std::vector<StepRecord> steps;
    std::string diagnostic;
};

struct RunOptions {
    unsigned threads = 1;
    std::function<void(const StepRecord&)> on_step;
};

/**
 * Steps until r_1..r_target are all represented or a search exhausts its
 * budget (the partial state is returned with a diagnostic). The returned
 * state always passes verify.
 */
RunResult run(ConstructionState state, uint64_t target, const RunOptions& options = {});

}  // namespace sdpc
