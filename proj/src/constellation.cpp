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

#include "sdpc/constellation.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace sdpc {

namespace {

mpz_class ceil_div(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

constexpr uint32_t kNoRoot = UINT32_MAX;
constexpr uint32_t kEveryIndex = UINT32_MAX - 1;

/**
 * Per-task tables shared by every segment.
 *
 * roots[j * primes.size() + i] is the residue class of k (mod primes[i]) for
 * which primes[i] | x_k + d_j. Primes dividing q hit either every index
 * (kEveryIndex) or none (kNoRoot).
 */
class SieveContext {
  public:
    explicit SieveContext(const ConstellationTask& task) : task_(task) {
        validate(task);
        const uint32_t limit = task.sieve_limit;
        primes_ = primes_up_to(limit);
        small_prime_.assign(static_cast<size_t>(limit) + 1, 0);
        for (uint32_t p : primes_) small_prime_[p] = 1;

        const auto& q = task.sys.crt.modulus;
        const auto& t = task.sys.crt.residue;
        const size_t np = primes_.size();
        roots_.resize(task.sys.offsets.size() * np);
        for (size_t i = 0; i < np; i++) {
            const uint32_t p = primes_[i];
            const uint64_t q_mod = residue_of(q, p);
            const uint64_t t_mod = residue_of(t, p);
            const uint64_t q_inv = q_mod ? mod_inverse(static_cast<int64_t>(q_mod), p) : 0;
            for (size_t j = 0; j < task.sys.offsets.size(); j++) {
                const uint64_t base = (t_mod + residue_of(task.sys.offsets[j], p)) % p;
                uint32_t root;
                if (q_mod == 0) {
                    root = base == 0 ? kEveryIndex : kNoRoot;
                } else {
                    root = static_cast<uint32_t>(mulmod((p - base) % p, q_inv, p));
                }
                roots_[j * np + i] = root;
            }
        }

        // Index windows where |x + d_j| <= sieve_limit; only there can a value
        // equal its own sieving prime.
        const mpz_class lim = limit;
        for (const auto& d : task.sys.offsets) {
            mpz_class lo = ceil_div(-lim - t - d, q);
            mpz_class hi = floor_div(lim - t - d, q);
            if (lo < 0) lo = 0;
            if (hi < lo) {
                windows_.push_back({1, 0});
                continue;
            }
            uint64_t wlo = lo.fits_ulong_p() ? lo.get_ui() : UINT64_MAX;
            uint64_t whi = hi.fits_ulong_p() ? hi.get_ui() : UINT64_MAX;
            windows_.push_back({wlo, whi});
        }
    }

    // Survivor indices (absolute k) in [lo, hi).
    std::vector<uint64_t> sieve(uint64_t lo, uint64_t hi) const {
        std::vector<uint64_t> out;
        if (hi <= lo) return out;
        const uint64_t len = hi - lo;
        std::vector<uint8_t> composite(len, 0);
        std::vector<uint8_t> scratch;
        const size_t np = primes_.size();

        for (size_t j = 0; j < task_.sys.offsets.size(); j++) {
            const auto [wlo, whi] = windows_[j];
            const bool dirty = wlo <= whi && wlo < hi && whi >= lo;
            uint8_t* marks = composite.data();
            if (dirty) {
                scratch.assign(len, 0);
                marks = scratch.data();
            }

            const uint32_t* roots = roots_.data() + j * np;
            for (size_t i = 0; i < np; i++) {
                const uint32_t root = roots[i];
                if (root == kNoRoot) continue;
                if (root == kEveryIndex) {
                    std::fill(marks, marks + len, uint8_t{1});
                    continue;
                }
                const uint64_t p = primes_[i];
                uint64_t idx = (root + p - lo % p) % p;
                for (; idx < len; idx += p) marks[idx] = 1;
            }

            if (dirty) {
                // Forgive |x + d_j| = p: a prime value is hit only by itself.
                const uint64_t from = std::max(wlo, lo);
                const uint64_t to = std::min(whi, hi - 1);
                for (uint64_t k = from; k <= to; k++) {
                    mpz_class v = task_.sys.crt.residue + task_.sys.crt.modulus * mpz_class(k) + task_.sys.offsets[j];
                    const uint64_t mag = mpz_class(abs(v)).get_ui();
                    if (small_prime_[mag]) scratch[k - lo] = 0;
                }
                for (uint64_t idx = 0; idx < len; idx++) composite[idx] |= scratch[idx];
            }
        }

        for (uint64_t idx = 0; idx < len; idx++) {
            if (!composite[idx]) out.push_back(lo + idx);
        }
        return out;
    }

    mpz_class value_at(uint64_t k) const { return task_.sys.crt.residue + task_.sys.crt.modulus * mpz_class(k); }

  private:
    const ConstellationTask& task_;
    std::vector<uint32_t> primes_;
    std::vector<uint8_t> small_prime_;
    std::vector<uint32_t> roots_;
    std::vector<std::pair<uint64_t, uint64_t>> windows_;
};

// First survivor in the segment that passes primality, if any.
std::optional<SearchResult> scan_segment(const SieveContext& ctx, const ConstellationTask& task,
                                         const std::vector<mpz_class>& exclusions, uint64_t lo, uint64_t hi,
                                         int rounds) {
    for (uint64_t k : ctx.sieve(lo, hi)) {
        mpz_class x = ctx.value_at(k);
        if (std::binary_search(exclusions.begin(), exclusions.end(), x)) continue;
        std::vector<PrimalityVerdict> verdicts;
        bool good = true;
        for (const auto& d : task.sys.offsets) {
            mpz_class v = x + d;
            if (abs(v) <= 3) {
                good = false;
                break;
            }
            auto verdict = is_prime(v, rounds);
            if (!verdict.prime()) {
                good = false;
                break;
            }
            verdicts.push_back(std::move(verdict));
        }
        if (good && task.filter && !task.filter(x)) good = false;
        if (good) {
            SearchResult r;
            r.x = std::move(x);
            r.examined = k;  // absolute index; caller rebases
            r.verdicts = std::move(verdicts);
            return r;
        }
    }
    return std::nullopt;
}

}  // namespace

void validate(const ConstellationTask& task) {
    validate(task.sys);
    if (task.start < 0) throw Error("search start must be >= 0");
    if (task.budget < 1) throw Error("search budget must be >= 1");
    if (task.sieve_limit < 2) throw Error("sieve limit must be >= 2");
}

uint64_t first_candidate_index(const ConstellationTask& task) {
    const auto& q = task.sys.crt.modulus;
    const auto& t = task.sys.crt.residue;
    if (task.start <= t) return 0;
    mpz_class k = ceil_div(task.start - t, q);
    if (!k.fits_ulong_p()) throw Error("search start too far from the progression origin");
    return k.get_ui();
}

std::vector<mpz_class> sieve_segment(const ConstellationTask& task, uint64_t lo, uint64_t hi) {
    SieveContext ctx(task);
    std::vector<mpz_class> out;
    for (uint64_t k : ctx.sieve(lo, hi)) out.push_back(ctx.value_at(k));
    return out;
}

SearchResult next_constellation(const ConstellationTask& task, const SearchOptions& options) {
    validate(task);
    if (auto verdict = is_admissible(task.sys); !verdict.ok()) throw InadmissibleError(*verdict.obstruction);
    if (options.segment_size == 0) throw Error("segment size must be positive");

    SieveContext ctx(task);
    std::vector<mpz_class> exclusions = task.exclusions;
    std::sort(exclusions.begin(), exclusions.end());

    const uint64_t k0 = first_candidate_index(task);
    if (UINT64_MAX - k0 < task.budget) throw Error("search window overflows 64-bit index");
    const uint64_t end = k0 + task.budget;
    const uint64_t seg = options.segment_size;
    const uint64_t num_segments = (task.budget + seg - 1) / seg;

    std::atomic<uint64_t> next_segment{0};
    std::atomic<uint64_t> best_segment{UINT64_MAX};
    std::mutex mu;
    std::optional<SearchResult> best;
    std::exception_ptr failure;

    // Segments are claimed in increasing order; a worker stops claiming once a
    // witness exists in an earlier segment, so every segment below the best
    // one is always fully scanned.
    auto worker = [&]() {
        try {
            while (true) {
                const uint64_t s = next_segment.fetch_add(1);
                if (s >= num_segments || s > best_segment.load()) return;
                const uint64_t lo = k0 + s * seg;
                const uint64_t hi = std::min(end, lo + seg);
                auto found = scan_segment(ctx, task, exclusions, lo, hi, options.prp_rounds);
                if (!found) continue;
                std::lock_guard lock(mu);
                if (s < best_segment.load()) {
                    best_segment.store(s);
                    best = std::move(found);
                }
            }
        } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
            best_segment.store(0);
        }
    };

    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; i++) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    if (!best) {
        SearchResult r;
        r.examined = task.budget;
        return r;
    }
    best->examined = best->examined - k0 + 1;
    return *best;
}

}  // namespace sdpc
