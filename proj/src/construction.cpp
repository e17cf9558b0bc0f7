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

#include "sdpc/construction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <set>

#include "sdpc/primality.hpp"
#include "sdpc/rng.hpp"

namespace sdpc {

namespace {

// Primes >= 5, grown on demand.
class MagnitudeTable {
  public:
    uint64_t at(uint64_t i) {
        std::lock_guard lock(mu_);
        while (i >= primes_.size()) grow();
        return primes_[i];
    }

    // Number of primes >= 5 that are <= v.
    uint64_t rank(uint64_t v) {
        std::lock_guard lock(mu_);
        while (primes_.empty() || primes_.back() < v) grow();
        return std::upper_bound(primes_.begin(), primes_.end(), v) - primes_.begin();
    }

  private:
    void grow() {
        limit_ = limit_ ? limit_ * 2 : 1 << 16;
        primes_.clear();
        for (uint32_t p : primes_up_to(static_cast<uint32_t>(limit_))) {
            if (p >= 5) primes_.push_back(p);
        }
    }

    std::mutex mu_;
    uint64_t limit_ = 0;
    std::vector<uint64_t> primes_;
};

MagnitudeTable& magnitudes() {
    static MagnitudeTable table;
    return table;
}

double bound_rhs(double r) { return (r - 1.0) / 2.0 - std::log(r) / std::log(4.0 / 3.0); }

void insert_sorted(std::vector<mpz_class>& v, const mpz_class& x) { v.insert(std::lower_bound(v.begin(), v.end(), x), x); }

bool contains_sorted(const std::vector<mpz_class>& v, const mpz_class& x) {
    return std::binary_search(v.begin(), v.end(), x);
}

Sign sign_of(int64_t r) { return r > 0 ? Sign::Positive : Sign::Negative; }

std::vector<mpz_class> plan_offsets(const ConstructionState& state, int64_t target) {
    // -b = -target - a exactly when a - b = -target; x - b and a - (x - target)
    // are then v and -v, so the tuple keeps a single offset.
    std::vector<mpz_class> offsets;
    auto add = [&](mpz_class d) {
        if (std::find(offsets.begin(), offsets.end(), d) == offsets.end()) offsets.push_back(std::move(d));
    };
    for (const auto& b : state.B) add(-b);
    for (const auto& a : state.A) add(mpz_class(-target) - a);
    return offsets;
}

}  // namespace

int64_t signed_prime(uint64_t n) {
    if (n < 1) throw Error("signed_prime index must be >= 1");
    const auto mag = static_cast<int64_t>(magnitudes().at((n - 1) / 2));
    return n % 2 == 1 ? mag : -mag;
}

uint64_t signed_prime_index(int64_t r) {
    const uint64_t mag = r < 0 ? static_cast<uint64_t>(-r) : static_cast<uint64_t>(r);
    if (mag < 5 || !is_prime_u64(mag)) throw Error(std::to_string(r) + " is not a signed prime with |r| > 3");
    const uint64_t m = magnitudes().rank(mag);
    return r > 0 ? 2 * m - 1 : 2 * m;
}

bool check_bound(uint64_t n, uint64_t r, uint64_t reserve) {
    if (r < 1) return false;
    return static_cast<double>(2 * n + reserve) < bound_rhs(static_cast<double>(r));
}

uint64_t compute_K(uint64_t reserve, uint64_t scan_limit) {
    if (scan_limit < 1) throw Error("compute_K: scan_limit must be positive");

    // Tail: for n > N, |r_n| = p_m with m >= n/2 + 2 and p_m > m log m.
    const double N = static_cast<double>(scan_limit);
    const double m = N / 2.0 + 2.0;
    const double lower = m * std::log(m);
    const double slack = bound_rhs(lower) - 2.0 * N - static_cast<double>(reserve);
    const double growth = (0.5 - 1.0 / (lower * std::log(4.0 / 3.0))) * (std::log(m) + 1.0) / 2.0 - 2.0;
    if (!(slack > 0 && growth > 0)) {
        throw Error("compute_K: scan inconclusive at scan_limit " + std::to_string(scan_limit) +
                    "; increase scan_limit");
    }

    uint64_t worst = 0;
    for (uint64_t n = 1; n <= scan_limit; n++) {
        const auto r = static_cast<uint64_t>(std::llabs(signed_prime(n)));
        if (!check_bound(n, r, reserve)) worst = std::max(worst, r);
    }
    return 2 * worst + 1;
}

std::string_view to_string(Mode m) { return m == Mode::Reduced ? "reduced" : "faithful"; }

Mode parse_mode(std::string_view s) {
    if (s == "reduced") return Mode::Reduced;
    if (s == "faithful") return Mode::Faithful;
    throw Error("unknown mode '" + std::string(s) + "'");
}

void validate(const Config& c) {
    if (c.mode == Mode::Reduced && c.p_limit < 7) throw Error("config: p_limit must be >= 7 in reduced mode");
    if (c.reserve_count > 2) throw Error("config: reserve_count must be 0, 1 or 2");
    if (c.budget < 1) throw Error("config: budget must be >= 1");
    if (c.sieve_limit < 2) throw Error("config: sieve_limit must be >= 2");
    if (c.segment_size < 1) throw Error("config: segment_size must be >= 1");
    if (c.prp_rounds < 1) throw Error("config: prp_rounds must be >= 1");
}

uint64_t coverage(const ConstructionState& state) {
    uint64_t m = 0;
    while (state.represented.count(mpz_class(signed_prime(m + 1)))) m++;
    return m;
}

uint64_t managed_limit(const ConstructionState& state) {
    if (state.config.mode == Mode::Reduced) return state.config.p_limit;
    const auto next = static_cast<uint64_t>(std::llabs(signed_prime(state.n + 1)));
    return std::max(state.config.K, next);
}

ConstructionState initial_state(Config config) {
    validate(config);
    if (config.mode == Mode::Faithful && config.K == 0) config.K = compute_K(config.reserve_count, config.k_scan_limit);

    ConstructionState s;
    s.config = config;
    s.n = 2;
    s.A = {1, 11};
    s.B = {6};
    s.pairs.emplace(2, PrimeCompatiblePair{2, ResidueSet(2, {1}), ResidueSet(2, {0}), {}, {}, {}});
    s.pairs.emplace(3, PrimeCompatiblePair{3, ResidueSet(3, {1, 2}), ResidueSet(3, {0}), {}, {}, {}});
    // 1 is common to U_5 and V_5 but already holds 1, 11 and 6, so nothing is reserved.
    s.pairs.emplace(5, PrimeCompatiblePair{5, ResidueSet(5, {0, 1, 2}), ResidueSet(5, {1, 3, 4}), {}, {}, {}});

    const uint64_t limit = managed_limit(s);
    if (limit > UINT32_MAX) throw Error("managed prime limit too large");
    for (uint32_t p : primes_up_to(static_cast<uint32_t>(limit - 1))) {
        if (p >= 7) s.pairs.emplace(p, explicit_pair(p));
    }

    s.represented.emplace(mpz_class(5), Witness{11, 6});
    s.represented.emplace(mpz_class(-5), Witness{1, 6});
    return s;
}

std::variant<StepPlan, AlreadyRepresented> plan_step(const ConstructionState& state, int64_t target) {
    signed_prime_index(target);  // validates target
    if (state.represented.count(mpz_class(target))) return AlreadyRepresented{};

    StepPlan plan;
    plan.target = target;
    const uint64_t mag = static_cast<uint64_t>(std::llabs(target));

    std::vector<Congruence> congruences;
    for (const auto& [p, pair] : state.pairs) {
        if (p == mag) {
            auto reserve = pair.unused_reserve();
            if (!reserve) throw Error("reserve exhausted for p = " + std::to_string(p));
            plan.choices[p] = {*reserve, *reserve};
            plan.reserve_prime = p;
            congruences.push_back({*reserve, p});
            continue;
        }
        const uint64_t r_mod = residue_of(target, p);
        const auto only_u = (pair.U - pair.V).members();
        const auto only_v = pair.V - pair.U;
        bool found = false;
        for (uint32_t u : only_u) {
            const auto v = static_cast<uint32_t>((u + p - r_mod) % p);
            if (only_v.contains(v)) {
                plan.choices[p] = {u, v};
                congruences.push_back({u, p});
                found = true;
                break;
            }
        }
        if (!found) throw Error("pair mod " + std::to_string(p) + " cannot represent " + std::to_string(target));
    }
    plan.crt = crt_combine(congruences);
    plan.offsets = plan_offsets(state, target);

    // Smallest x with x >= 1 and x - target >= 1. Coincidences are excluded
    // per candidate by creates_coincidence rather than by a threshold.
    plan.min_x = std::max<int64_t>(1, target + 1);

    if (auto verdict = is_admissible(plan.system()); !verdict.ok()) throw InadmissibleError(*verdict.obstruction);
    return plan;
}

bool creates_coincidence(const ConstructionState& state, const StepPlan& plan, const mpz_class& x) {
    const mpz_class r = plan.target;
    const mpz_class y = x - r;
    if (contains_sorted(state.A, x) || contains_sorted(state.B, x) || contains_sorted(state.A, y) ||
        contains_sorted(state.B, y)) {
        return true;
    }
    std::set<mpz_class> seen{r};
    auto clash = [&](const mpz_class& d) { return state.represented.count(d) || !seen.insert(d).second; };
    for (const auto& b : state.B) {
        if (clash(x - b)) return true;
    }
    for (const auto& a : state.A) {
        if (clash(a - y)) return true;
    }
    return false;
}

bool keeps_future_admissible(const ConstructionState& state, const StepPlan& plan, const mpz_class& x,
                             uint32_t horizon) {
    if (horizon == 0) return true;
    const mpz_class r = plan.target;
    const mpz_class y = x - r;

    std::set<mpz_class> fresh{r};
    for (const auto& b : state.B) fresh.insert(x - b);
    for (const auto& a : state.A) fresh.insert(a - y);
    auto represented = [&](int64_t t) { return state.represented.count(mpz_class(t)) || fresh.count(mpz_class(t)); };

    std::vector<mpz_class> A = state.A, B = state.B;
    A.push_back(x);
    B.push_back(y);

    uint32_t checked = 0;
    for (uint64_t j = signed_prime_index(plan.target) + 1; checked < horizon; j++) {
        const int64_t t = signed_prime(j);
        if (represented(t)) continue;
        checked++;

        std::set<mpz_class> offsets;
        for (const auto& b : B) offsets.insert(-b);
        for (const auto& a : A) offsets.insert(mpz_class(-t) - a);
        for (uint32_t p : primes_up_to(static_cast<uint32_t>(offsets.size()))) {
            if (state.pairs.count(p)) continue;
            std::vector<char> seen(p, 0);
            uint32_t distinct = 0;
            for (const auto& d : offsets) {
                auto res = residue_of(d, p);
                if (!seen[res]) {
                    seen[res] = 1;
                    distinct++;
                }
            }
            if (distinct == p) return false;
        }
    }
    return true;
}

ConstructionState apply_step(const ConstructionState& state, const StepPlan& plan, const mpz_class& x) {
    const mpz_class r = plan.target;
    if (state.represented.count(r)) throw Error("apply_step: " + r.get_str() + " is already represented");
    if (plan.offsets != plan_offsets(state, plan.target)) throw Error("apply_step: plan does not match state");
    if (x < 1) throw Error("apply_step: x must be positive");
    {
        mpz_class diff = x - plan.crt.residue;
        if (mpz_divisible_p(diff.get_mpz_t(), plan.crt.modulus.get_mpz_t()) == 0) {
            throw Error("apply_step: x is not in the planned residue class");
        }
    }
    if (x < plan.min_x) throw Error("apply_step: x is below the plan's minimum");
    const mpz_class y = x - r;
    if (contains_sorted(state.A, x)) throw Error("apply_step: x is already in A");
    if (y < 1 || contains_sorted(state.B, y)) throw Error("apply_step: x - r is already in B or not positive");

    std::vector<std::pair<mpz_class, Witness>> fresh;
    fresh.push_back({r, {x, y}});
    for (const auto& b : state.B) fresh.push_back({x - b, {x, b}});
    for (const auto& a : state.A) fresh.push_back({a - y, {a, y}});

    std::set<mpz_class> seen;
    for (const auto& [d, w] : fresh) {
        if (abs(d) <= 3 || !is_prime(d, state.config.prp_rounds).prime()) {
            throw Error("coincidence: difference " + d.get_str() + " is not a signed prime > 3");
        }
        if (state.represented.count(d) || !seen.insert(d).second) {
            throw Error("coincidence: difference " + d.get_str() + " would be represented twice");
        }
    }

    ConstructionState next = state;
    insert_sorted(next.A, x);
    insert_sorted(next.B, y);
    for (auto& [d, w] : fresh) next.represented.emplace(d, w);
    if (plan.reserve_prime) {
        auto& pair = next.pairs.at(*plan.reserve_prime);
        pair.assigned(sign_of(plan.target)) = plan.choices.at(*plan.reserve_prime).first;
    }
    next.n = std::max(next.n, signed_prime_index(plan.target));
    return next;
}

ConstructionState extend_pairs(const ConstructionState& state) {
    if (state.config.mode == Mode::Reduced) return state;
    const uint64_t limit = managed_limit(state);
    if (limit > UINT32_MAX) throw Error("managed prime limit too large");

    ConstructionState next = state;
    SeededRng rng(state.config.seed, state.draws);
    std::vector<mpz_class> elements = state.A;
    elements.insert(elements.end(), state.B.begin(), state.B.end());
    for (uint32_t p : primes_up_to(static_cast<uint32_t>(limit - 1))) {
        if (next.pairs.count(p)) continue;
        auto W = ResidueSet::from_values(p, elements);
        next.pairs.emplace(p, randomized_extend(W, state.config.reserve_count, rng).pair);
    }
    next.draws = rng.draws();
    return next;
}

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerifyReport::find(std::string_view name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

VerifyReport verify(const ConstructionState& state) {
    VerifyReport report;

    // 1. every difference is a signed prime > 3
    {
        CheckResult c{"differences-prime", true, ""};
        for (const auto& a : state.A) {
            for (const auto& b : state.B) {
                mpz_class d = a - b;
                auto v = is_prime(d, state.config.prp_rounds);
                if (abs(d) <= 3 || !v.prime()) {
                    if (c.passed) c.detail = a.get_str() + " - " + b.get_str() + " = " + d.get_str() + " is not a signed prime > 3";
                    c.passed = false;
                }
                if (v.status == PrimeStatus::ProbablePrime) report.contains_probable = true;
            }
        }
        if (c.passed) c.detail = report.contains_probable ? "all prime (some probable)" : "all certified prime";
        report.checks.push_back(c);
    }

    // 2. differences pairwise distinct
    std::map<mpz_class, Witness> actual;
    {
        CheckResult c{"differences-distinct", true, ""};
        for (const auto& a : state.A) {
            for (const auto& b : state.B) {
                if (!actual.emplace(a - b, Witness{a, b}).second && c.passed) {
                    c.passed = false;
                    c.detail = "difference " + mpz_class(a - b).get_str() + " has two representations";
                }
            }
        }
        if (c.passed) c.detail = std::to_string(actual.size()) + " distinct differences";
        report.checks.push_back(c);
    }

    // 3. residues of A, B inside U_p, V_p
    {
        CheckResult c{"residue-containment", true, ""};
        for (const auto& [p, pair] : state.pairs) {
            const bool ok = ResidueSet::from_values(p, state.A).is_subset_of(pair.U) &&
                            ResidueSet::from_values(p, state.B).is_subset_of(pair.V);
            if (!ok && c.passed) {
                c.passed = false;
                c.detail = "A or B leaves its residue set mod " + std::to_string(p);
            }
        }
        if (c.passed) c.detail = std::to_string(state.pairs.size()) + " managed primes";
        report.checks.push_back(c);
    }

    // 4. managed pairs are compatible, complete and keep their reserves free
    {
        CheckResult c{"pairs-compatible", true, ""};
        auto fail = [&](const std::string& why) {
            if (c.passed) c.detail = why;
            c.passed = false;
        };
        std::vector<mpz_class> elements = state.A;
        elements.insert(elements.end(), state.B.begin(), state.B.end());
        for (const auto& [p, pair] : state.pairs) {
            if (pair.p != p || !pair_invariants_hold(pair)) {
                fail("pair mod " + std::to_string(p) + " is not prime-compatible");
                continue;
            }
            const auto occupied = ResidueSet::from_values(p, elements);
            for (uint32_t res : pair.reserved) {
                if (pair.assigned_positive != res && pair.assigned_negative != res && occupied.contains(res)) {
                    fail("unused reserve " + std::to_string(res) + " mod " + std::to_string(p) + " is occupied");
                }
            }
        }
        const uint64_t limit = managed_limit(state);
        if (limit <= UINT32_MAX) {
            for (uint32_t p : primes_up_to(static_cast<uint32_t>(limit - 1))) {
                if (!state.pairs.count(p)) fail("no pair for managed prime " + std::to_string(p));
            }
        }
        if (c.passed) c.detail = "ok";
        report.checks.push_back(c);
    }

    // 5. the ledger is exactly the difference set and covers a prefix
    report.coverage = coverage(state);
    {
        CheckResult c{"representation-ledger", true, ""};
        if (state.represented.size() != actual.size()) {
            c.passed = false;
            c.detail = "ledger has " + std::to_string(state.represented.size()) + " entries, A-B has " +
                       std::to_string(actual.size());
        }
        for (const auto& [r, w] : state.represented) {
            if (!c.passed) break;
            if (w.a - w.b != r || !contains_sorted(state.A, w.a) || !contains_sorted(state.B, w.b)) {
                c.passed = false;
                c.detail = "witness for " + r.get_str() + " is inconsistent with A, B";
            }
        }
        if (c.passed && report.coverage < state.n) {
            c.passed = false;
            c.detail = "prefix r_1..r_" + std::to_string(report.coverage) + " is shorter than step " +
                       std::to_string(state.n);
        }
        if (c.passed && (state.A.size() > state.n || state.B.size() > state.n)) {
            c.passed = false;
            c.detail = "|A| or |B| exceeds n = " + std::to_string(state.n);
        }
        if (c.passed) c.detail = "covers r_1..r_" + std::to_string(report.coverage);
        report.checks.push_back(c);
    }

    // 6. the witnesses of 5 and -5 share an element
    {
        CheckResult c{"shared-5-witness", false, "5 or -5 is not represented"};
        auto pos = state.represented.find(mpz_class(5));
        auto neg = state.represented.find(mpz_class(-5));
        if (pos != state.represented.end() && neg != state.represented.end()) {
            for (const auto& u : {pos->second.a, pos->second.b}) {
                if (u == neg->second.a || u == neg->second.b) {
                    report.shared_element = u;
                    break;
                }
            }
            c.passed = report.shared_element.has_value();
            c.detail = c.passed ? "shared element " + report.shared_element->get_str() : "witnesses are disjoint";
        }
        report.checks.push_back(c);
    }
    return report;
}

RunResult run(ConstructionState state, uint64_t target, const RunOptions& options) {
    RunResult result;
    using clock = std::chrono::steady_clock;

    while (coverage(state) < target) {
        const uint64_t index = state.n + 1;
        const int64_t r = signed_prime(index);
        StepRecord record{index, r, false, std::nullopt};

        auto planned = plan_step(state, r);
        if (std::holds_alternative<AlreadyRepresented>(planned)) {
            state.n = index;
            state = extend_pairs(state);
            record.free = true;
            result.steps.push_back(record);
            if (options.on_step) options.on_step(record);
            continue;
        }
        const auto& plan = std::get<StepPlan>(planned);

        ConstellationTask task;
        task.sys = plan.system();
        task.start = plan.min_x;
        task.budget = state.config.budget;
        task.sieve_limit = state.config.sieve_limit;
        task.exclusions = state.A;
        task.exclusions.insert(task.exclusions.end(), state.B.begin(), state.B.end());
        task.filter = [&state, &plan](const mpz_class& x) {
            return !creates_coincidence(state, plan, x) && keeps_future_admissible(state, plan, x, state.config.lookahead);
        };

        SearchOptions search;
        search.threads = options.threads;
        search.segment_size = state.config.segment_size;
        search.prp_rounds = state.config.prp_rounds;

        const auto t0 = clock::now();
        auto found = next_constellation(task, search);
        record.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        record.examined = found.examined;

        if (found.exhausted()) {
            result.status = RunStatus::Exhausted;
            result.diagnostic = "search for r_" + std::to_string(index) + " = " + std::to_string(r) + " (" +
                                std::to_string(plan.offsets.size()) + " offsets, modulus " +
                                plan.crt.modulus.get_str() + ", start " + plan.min_x.get_str() +
                                ") exhausted its budget of " + std::to_string(state.config.budget) + " candidates";
            result.steps.push_back(record);
            if (options.on_step) options.on_step(record);
            break;
        }

        record.x = *found.x;
        record.probable = std::any_of(found.verdicts.begin(), found.verdicts.end(),
                                      [](const PrimalityVerdict& v) { return v.status == PrimeStatus::ProbablePrime; });
        state = extend_pairs(apply_step(state, plan, *found.x));
        result.steps.push_back(record);
        if (options.on_step) options.on_step(record);
    }

    auto report = verify(state);
    if (!report.passed()) {
        for (const auto& c : report.checks) {
            if (!c.passed) throw Error("run produced a state failing " + c.name + ": " + c.detail);
        }
    }
    result.state = std::move(state);
    return result;
}

}  // namespace sdpc
