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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdpc/admissibility.hpp"
#include "sdpc/constellation.hpp"
#include "sdpc/construction.hpp"
#include "sdpc/residue_pairs.hpp"
#include "sdpc/state_io.hpp"

using nlohmann::json;
using namespace sdpc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitVerifyFailed = 3;

mpz_class parse_mpz(const std::string& s) {
    mpz_class v;
    if (s.empty() || v.set_str(s, 10) != 0) throw Error("'" + s + "' is not an integer");
    return v;
}

std::vector<mpz_class> parse_mpz_list(const std::vector<std::string>& items) {
    std::vector<mpz_class> out;
    for (const auto& s : items) out.push_back(parse_mpz(s));
    return out;
}

std::string join(const std::vector<mpz_class>& v) {
    std::string out = "{";
    for (size_t i = 0; i < v.size(); i++) out += (i ? "," : "") + v[i].get_str();
    return out + "}";
}

std::string set_str(const std::vector<uint32_t>& v) {
    std::string out = "{";
    for (size_t i = 0; i < v.size(); i++) out += (i ? "," : "") + std::to_string(v[i]);
    return out + "}";
}

json report_json(const RunResult& result, const VerifyReport& report, uint64_t target) {
    json steps = json::array();
    for (const auto& s : result.steps) {
        steps.push_back(json{{"index", s.index},
                             {"r", s.target},
                             {"free", s.free},
                             {"x", s.x ? json(s.x->get_str()) : json(nullptr)},
                             {"examined", s.examined},
                             {"seconds", s.seconds},
                             {"probable", s.probable}});
    }
    json checks = json::array();
    for (const auto& c : report.checks) checks.push_back(json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return json{{"status", result.status == RunStatus::Complete ? "complete" : "exhausted"},
                {"target", target},
                {"coverage", report.coverage},
                {"size_A", result.state.A.size()},
                {"size_B", result.state.B.size()},
                {"steps", steps},
                {"verification", checks},
                {"verified", report.passed()},
                {"certification", report.contains_probable ? "contains-probable-primes" : "all-certified"},
                {"diagnostic", result.diagnostic}};
}

void print_checks(const VerifyReport& report) {
    for (const auto& c : report.checks) {
        std::printf("  [%s] %-22s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    }
}

struct RunFlags {
    uint64_t target = 4;
    std::string mode = "reduced";
    uint32_t p_limit = 7;
    uint64_t k = 0;
    uint64_t k_scan_limit = kDefaultKScanLimit;
    uint32_t reserve = 2;
    uint64_t seed = 0;
    uint64_t budget = kDefaultBudget;
    uint32_t sieve_limit = kDefaultSieveLimit;
    uint64_t segment_size = kDefaultSegmentSize;
    int prp_rounds = kDefaultPrpRounds;
    uint32_t lookahead = Config{}.lookahead;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string state_path;
    std::string out_path;
    std::string json_report;
    bool quiet = false;
};

int cmd_run(const RunFlags& f, CLI::App& app) {
    auto given = [&](const char* name) { return app.count(name) > 0; };

    ConstructionState state;
    const bool resume = !f.state_path.empty() && std::filesystem::exists(f.state_path);
    if (resume) {
        state = load_state_file(f.state_path);
        // Structural parameters are baked into the existing sets and pairs.
        auto reject = [&](const char* name, bool differs) {
            if (given(name) && differs) throw Error(std::string(name) + " cannot change when resuming a state");
        };
        reject("--mode", parse_mode(f.mode) != state.config.mode);
        reject("--p-limit", f.p_limit != state.config.p_limit);
        reject("--k", f.k != state.config.K);
        reject("--reserve", f.reserve != state.config.reserve_count);
        reject("--seed", f.seed != state.config.seed);
        if (given("--budget")) state.config.budget = f.budget;
        if (given("--sieve-limit")) state.config.sieve_limit = f.sieve_limit;
        if (given("--segment-size")) state.config.segment_size = f.segment_size;
        if (given("--prp-rounds")) state.config.prp_rounds = f.prp_rounds;
        if (given("--lookahead")) state.config.lookahead = f.lookahead;
        validate(state.config);
    } else {
        Config c;
        c.mode = parse_mode(f.mode);
        c.p_limit = f.p_limit;
        c.K = f.k;
        c.k_scan_limit = f.k_scan_limit;
        c.reserve_count = f.reserve;
        c.seed = f.seed;
        c.budget = f.budget;
        c.sieve_limit = f.sieve_limit;
        c.segment_size = f.segment_size;
        c.prp_rounds = f.prp_rounds;
        c.lookahead = f.lookahead;
        state = initial_state(c);
    }

    RunOptions options;
    options.threads = f.threads;
    if (!f.quiet) {
        options.on_step = [](const StepRecord& s) {
            if (s.free) {
                std::fprintf(stderr, "step %llu: r = %lld already represented\n",
                             static_cast<unsigned long long>(s.index), static_cast<long long>(s.target));
            } else if (s.x) {
                std::fprintf(stderr, "step %llu: r = %lld  x = %s  (%llu candidates, %.2f s)\n",
                             static_cast<unsigned long long>(s.index), static_cast<long long>(s.target),
                             s.x->get_str().c_str(), static_cast<unsigned long long>(s.examined), s.seconds);
            } else {
                std::fprintf(stderr, "step %llu: r = %lld  exhausted after %llu candidates (%.2f s)\n",
                             static_cast<unsigned long long>(s.index), static_cast<long long>(s.target),
                             static_cast<unsigned long long>(s.examined), s.seconds);
            }
        };
    }

    auto result = run(std::move(state), f.target, options);
    const auto report = verify(result.state);

    std::string out = f.out_path.empty() ? (f.state_path.empty() ? "sdpc-state.json" : f.state_path) : f.out_path;
    save_state_file(result.state, out);

    std::printf("status:        %s\n", result.status == RunStatus::Complete ? "complete" : "exhausted");
    std::printf("coverage:      r_1..r_%llu (target %llu)\n", static_cast<unsigned long long>(report.coverage),
                static_cast<unsigned long long>(f.target));
    std::printf("|A| = %zu, |B| = %zu\n", result.state.A.size(), result.state.B.size());
    std::printf("A = %s\n", join(result.state.A).c_str());
    std::printf("B = %s\n", join(result.state.B).c_str());
    std::printf("certification: %s\n", report.contains_probable ? "contains-probable-primes" : "all-certified");
    std::printf("verification:  %s\n", report.passed() ? "passed" : "FAILED");
    print_checks(report);
    if (!result.diagnostic.empty()) std::printf("diagnostic:    %s\n", result.diagnostic.c_str());
    std::printf("state written to %s\n", out.c_str());

    if (!f.json_report.empty()) {
        std::ofstream rep(f.json_report);
        rep << report_json(result, report, f.target).dump(2) << "\n";
        if (!rep) throw Error("cannot write " + f.json_report);
    }
    if (!report.passed()) return kExitError;
    return result.status == RunStatus::Complete ? kExitOk : kExitExhausted;
}

int cmd_verify(const std::string& path) {
    const auto state = load_state_file(path);
    const auto report = verify(state);
    std::printf("verification of %s: %s\n", path.c_str(), report.passed() ? "passed" : "FAILED");
    print_checks(report);
    std::printf("coverage: r_1..r_%llu, certification: %s\n", static_cast<unsigned long long>(report.coverage),
                report.contains_probable ? "contains-probable-primes" : "all-certified");
    return report.passed() ? kExitOk : kExitVerifyFailed;
}

int cmd_pair(uint32_t p, bool use_random, const std::vector<std::string>& w_items, uint32_t reserve, uint64_t seed) {
    PrimeCompatiblePair pair = use_random ? PrimeCompatiblePair{p, ResidueSet(p), ResidueSet(p), {}, {}, {}}
                                          : explicit_pair(p);
    uint32_t attempts = 0;
    if (use_random) {
        ResidueSet W(p);
        for (const auto& v : parse_mpz_list(w_items)) W.insert(static_cast<uint32_t>(residue_of(v, p)));
        SeededRng rng(seed);
        auto extended = randomized_extend(W, reserve, rng);
        pair = std::move(extended.pair);
        attempts = extended.attempts;
    }
    std::printf("p = %u\n", p);
    std::printf("U = %s\n", set_str(pair.U.members()).c_str());
    std::printf("V = %s\n", set_str(pair.V.members()).c_str());
    std::printf("U&V = %s\n", set_str((pair.U & pair.V).members()).c_str());
    std::printf("reserved = %s\n", set_str(pair.reserved).c_str());
    if (use_random) std::printf("attempts = %u\n", attempts);
    const bool ok = is_prime_compatible(pair.U, pair.V);
    std::printf("compatible = %s\n", ok ? "yes" : "no");
    return ok ? kExitOk : kExitError;
}

TupleSystem system_from_flags(const std::string& q, const std::string& t, const std::vector<std::string>& offsets,
                              const std::vector<uint32_t>& factors, bool have_factors) {
    return make_tuple_system(parse_mpz(q), parse_mpz(t), parse_mpz_list(offsets),
                             have_factors ? std::optional(factors) : std::nullopt);
}

int cmd_admissible(const TupleSystem& sys) {
    auto verdict = is_admissible(sys);
    if (verdict.ok()) {
        std::printf("admissible\n");
        return kExitOk;
    }
    std::printf("obstruction: %s\n", verdict.obstruction->describe().c_str());
    return kExitExhausted;
}

int cmd_search(ConstellationTask task, const SearchOptions& options) {
    auto result = next_constellation(task, options);
    if (result.exhausted()) {
        std::printf("exhausted after %llu candidates\n", static_cast<unsigned long long>(result.examined));
        return kExitExhausted;
    }
    std::printf("x = %s\n", result.x->get_str().c_str());
    std::printf("examined = %llu\n", static_cast<unsigned long long>(result.examined));
    for (const auto& v : result.verdicts) {
        std::printf("  %s %s\n", v.value.get_str().c_str(), std::string(to_string(v.status)).c_str());
    }
    return kExitOk;
}

int cmd_export(const std::string& path, const std::string& format, const std::string& out_path) {
    const auto state = load_state_file(path);
    struct Row {
        mpz_class a, b, d;
    };
    std::vector<Row> rows;
    for (const auto& a : state.A) {
        for (const auto& b : state.B) rows.push_back({a, b, a - b});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        int c = cmp(abs(x.d), abs(y.d));
        return c != 0 ? c < 0 : x.d < y.d;
    });

    std::ostringstream os;
    if (format == "csv") {
        os << "a,b,diff\n";
        for (const auto& r : rows) os << r.a.get_str() << "," << r.b.get_str() << "," << r.d.get_str() << "\n";
    } else {
        json doc;
        json a = json::array(), b = json::array(), diffs = json::array();
        for (const auto& x : state.A) a.push_back(x.get_str());
        for (const auto& x : state.B) b.push_back(x.get_str());
        for (const auto& r : rows) diffs.push_back(json{{"a", r.a.get_str()}, {"b", r.b.get_str()}, {"diff", r.d.get_str()}});
        doc["A"] = a;
        doc["B"] = b;
        doc["differences"] = diffs;
        os << doc.dump(2) << "\n";
    }
    if (out_path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream out(out_path);
        out << os.str();
        if (!out) throw Error("cannot write " + out_path);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Signed-prime difference sets: construct, verify and inspect"};
    app.require_subcommand(1);

    RunFlags rf;
    auto* run_cmd = app.add_subcommand("run", "Extend a construction until r_1..r_target are represented");
    run_cmd->add_option("--target", rf.target, "Coverage index to reach (r_1 = 5, r_2 = -5, ...)");
    run_cmd->add_option("--mode", rf.mode, "reduced or faithful")->check(CLI::IsMember({"reduced", "faithful"}));
    run_cmd->add_option("--p-limit", rf.p_limit, "Reduced mode: manage pairs for primes below this");
    run_cmd->add_option("--k", rf.k, "Faithful mode: use this K instead of computing it");
    run_cmd->add_option("--k-scan-limit", rf.k_scan_limit, "Faithful mode: scan length for computing K");
    run_cmd->add_option("--reserve", rf.reserve, "Reserved common residues per new pair (0-2)");
    run_cmd->add_option("--seed", rf.seed, "Seed for randomized pair extension");
    run_cmd->add_option("--budget", rf.budget, "Candidates per search step");
    run_cmd->add_option("--sieve-limit", rf.sieve_limit, "Largest sieving prime");
    run_cmd->add_option("--segment-size", rf.segment_size, "Candidates per sieve segment");
    run_cmd->add_option("--prp-rounds", rf.prp_rounds, "Probable-prime rounds above 2^64");
    run_cmd->add_option("--lookahead", rf.lookahead, "Future targets a witness must keep admissible (0 = greedy)");
    run_cmd->add_option("--threads", rf.threads, "Search worker threads");
    run_cmd->add_option("--state", rf.state_path, "State file; resumed when it exists");
    run_cmd->add_option("--out", rf.out_path, "Where to write the state (default: --state or sdpc-state.json)");
    run_cmd->add_option("--json-report", rf.json_report, "Also write a JSON run report here");
    run_cmd->add_flag("--quiet", rf.quiet, "No per-step progress on stderr");

    std::string verify_path;
    auto* verify_cmd = app.add_subcommand("verify", "Check every invariant of a state file");
    verify_cmd->add_option("--state", verify_path, "State file")->required();

    uint32_t pair_p = 0;
    bool pair_explicit = false, pair_random = false;
    std::vector<std::string> pair_w;
    uint32_t pair_reserve = 2;
    uint64_t pair_seed = 0;
    auto* pair_cmd = app.add_subcommand("pair", "Build a prime-compatible pair");
    pair_cmd->add_option("--p", pair_p, "Prime modulus")->required();
    auto* explicit_flag = pair_cmd->add_flag("--explicit", pair_explicit, "Linear-map construction (p >= 7)");
    auto* random_flag = pair_cmd->add_flag("--random", pair_random, "Randomized extension of W");
    explicit_flag->excludes(random_flag);
    pair_cmd->add_option("--w", pair_w, "Residues that must lie in both U and V")->delimiter(',');
    pair_cmd->add_option("--reserve", pair_reserve, "Reserved common residues (0-2)");
    pair_cmd->add_option("--seed", pair_seed, "Seed");

    std::string sys_q = "1", sys_t = "0";
    std::vector<std::string> sys_offsets;
    std::vector<uint32_t> sys_factors;
    auto add_system_flags = [&](CLI::App* cmd) {
        cmd->add_option("--q", sys_q, "Modulus q");
        cmd->add_option("--t", sys_t, "Residue t in [0, q)");
        cmd->add_option("--offsets", sys_offsets, "Offsets d_i, comma separated (use --offsets=-6,-8)")
            ->delimiter(',')
            ->required();
        cmd->add_option("--factors", sys_factors, "Prime factors of q (needed above 2^64)")->delimiter(',');
    };
    auto* adm_cmd = app.add_subcommand("admissible", "Decide the local conditions for x = t (mod q), x + d_i prime");
    add_system_flags(adm_cmd);

    std::string search_start = "0";
    uint64_t search_budget = kDefaultBudget;
    uint32_t search_sieve = kDefaultSieveLimit;
    std::vector<std::string> search_exclude;
    SearchOptions search_opts;
    search_opts.threads = std::max(1u, std::thread::hardware_concurrency());
    auto* search_cmd = app.add_subcommand("search", "Find the smallest x >= start with every x + d_i prime");
    add_system_flags(search_cmd);
    search_cmd->add_option("--start", search_start, "Smallest x to consider");
    search_cmd->add_option("--budget", search_budget, "Candidates to examine");
    search_cmd->add_option("--sieve-limit", search_sieve, "Largest sieving prime");
    search_cmd->add_option("--exclude", search_exclude, "Values of x to skip")->delimiter(',');
    search_cmd->add_option("--threads", search_opts.threads, "Worker threads");
    search_cmd->add_option("--segment-size", search_opts.segment_size, "Candidates per segment");
    search_cmd->add_option("--prp-rounds", search_opts.prp_rounds, "Probable-prime rounds above 2^64");

    std::string export_path, export_format = "csv", export_out;
    auto* export_cmd = app.add_subcommand("export", "Write A, B and the difference table");
    export_cmd->add_option("--state", export_path, "State file")->required();
    export_cmd->add_option("--format", export_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    export_cmd->add_option("--out", export_out, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(rf, *run_cmd);
        if (*verify_cmd) return cmd_verify(verify_path);
        if (*pair_cmd) {
            if (pair_explicit == pair_random) throw Error("pair: choose exactly one of --explicit or --random");
            return cmd_pair(pair_p, pair_random, pair_w, pair_reserve, pair_seed);
        }
        if (*adm_cmd) return cmd_admissible(system_from_flags(sys_q, sys_t, sys_offsets, sys_factors, adm_cmd->count("--factors")));
        if (*search_cmd) {
            ConstellationTask task;
            task.sys = system_from_flags(sys_q, sys_t, sys_offsets, sys_factors, search_cmd->count("--factors"));
            task.start = parse_mpz(search_start);
            task.budget = search_budget;
            task.sieve_limit = search_sieve;
            task.exclusions = parse_mpz_list(search_exclude);
            return cmd_search(std::move(task), search_opts);
        }
        if (*export_cmd) return cmd_export(export_path, export_format, export_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
