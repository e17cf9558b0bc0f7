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

#include "sdpc/state_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sdpc {

using nlohmann::json;

namespace {

json residues(const std::vector<uint32_t>& v) { return json(v); }

json integers(const std::vector<mpz_class>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(x.get_str());
    return out;
}

[[noreturn]] void schema_error(const std::string& what) { throw Error("state schema: " + what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
    return j.at(key);
}

mpz_class parse_integer(const json& j, const char* what) {
    if (!j.is_string()) schema_error(std::string(what) + " must be a decimal string");
    const auto& s = j.get_ref<const std::string&>();
    mpz_class v;
    if (s.empty() || v.set_str(s, 10) != 0) schema_error(std::string(what) + " '" + s + "' is not an integer");
    return v;
}

template <typename T>
T parse_unsigned(const json& j, const char* what) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<int64_t>() >= 0)) {
        schema_error(std::string(what) + " must be a non-negative integer");
    }
    return j.get<T>();
}

std::vector<mpz_class> parse_element_list(const json& j, const char* what) {
    if (!j.is_array()) schema_error(std::string(what) + " must be an array");
    std::vector<mpz_class> out;
    for (const auto& e : j) out.push_back(parse_integer(e, what));
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) schema_error(std::string(what) + " has duplicates");
    return out;
}

ResidueSet parse_residue_set(const json& j, uint32_t p, const char* what) {
    if (!j.is_array()) schema_error(std::string(what) + " must be an array");
    ResidueSet s(p);
    for (const auto& e : j) {
        auto r = parse_unsigned<uint64_t>(e, what);
        if (r >= p) schema_error(std::string(what) + " residue out of range");
        s.insert(static_cast<uint32_t>(r));
    }
    return s;
}

json config_json(const Config& c) {
    return json{{"mode", std::string(to_string(c.mode))},
                {"p_limit", c.p_limit},
                {"K", c.K},
                {"k_scan_limit", c.k_scan_limit},
                {"reserve_count", c.reserve_count},
                {"budget", c.budget},
                {"sieve_limit", c.sieve_limit},
                {"segment_size", c.segment_size},
                {"prp_rounds", c.prp_rounds},
                {"lookahead", c.lookahead}};
}

Config parse_config(const json& j) {
    Config c;
    const auto& mode = field(j, "mode");
    if (!mode.is_string()) schema_error("config.mode must be a string");
    try {
        c.mode = parse_mode(mode.get<std::string>());
    } catch (const Error& e) {
        schema_error(e.what());
    }
    c.p_limit = parse_unsigned<uint32_t>(field(j, "p_limit"), "config.p_limit");
    c.K = parse_unsigned<uint64_t>(field(j, "K"), "config.K");
    c.k_scan_limit = parse_unsigned<uint64_t>(field(j, "k_scan_limit"), "config.k_scan_limit");
    c.reserve_count = parse_unsigned<uint32_t>(field(j, "reserve_count"), "config.reserve_count");
    c.budget = parse_unsigned<uint64_t>(field(j, "budget"), "config.budget");
    c.sieve_limit = parse_unsigned<uint32_t>(field(j, "sieve_limit"), "config.sieve_limit");
    c.segment_size = parse_unsigned<uint64_t>(field(j, "segment_size"), "config.segment_size");
    c.prp_rounds = parse_unsigned<int>(field(j, "prp_rounds"), "config.prp_rounds");
    c.lookahead = parse_unsigned<uint32_t>(field(j, "lookahead"), "config.lookahead");
    try {
        validate(c);
    } catch (const Error& e) {
        schema_error(e.what());
    }
    return c;
}

}  // namespace

std::string save_state(const ConstructionState& state) {
    json doc;
    doc["format"] = kStateFormat;
    doc["version"] = kStateVersion;
    doc["n"] = state.n;
    doc["A"] = integers(state.A);
    doc["B"] = integers(state.B);

    json pairs = json::array();
    for (const auto& [p, pair] : state.pairs) {
        json assigned = json::object();
        if (pair.assigned_positive) assigned["+"] = *pair.assigned_positive;
        if (pair.assigned_negative) assigned["-"] = *pair.assigned_negative;
        pairs.push_back(json{{"p", p},
                             {"U", residues(pair.U.members())},
                             {"V", residues(pair.V.members())},
                             {"reserved", residues(pair.reserved)},
                             {"assigned", assigned}});
    }
    doc["pairs"] = pairs;

    json represented = json::array();
    for (const auto& [r, w] : state.represented) {
        represented.push_back(json{{"r", r.get_str()}, {"a", w.a.get_str()}, {"b", w.b.get_str()}});
    }
    doc["represented"] = represented;
    doc["config"] = config_json(state.config);
    doc["seed"] = state.config.seed;
    doc["draw_counter"] = state.draws;
    return doc.dump(2) + "\n";
}

ConstructionState load_state(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        schema_error(std::string("not valid JSON (") + e.what() + ")");
    }
    if (!doc.is_object()) schema_error("top level must be an object");
    const auto& format = field(doc, "format");
    if (!format.is_string() || format.get<std::string>() != kStateFormat) schema_error("format must be 'sdpc-state'");
    const auto& version = field(doc, "version");
    if (!version.is_number_integer() || version.get<int64_t>() != kStateVersion) {
        schema_error("unsupported version " + version.dump() + " (expected 1)");
    }

    ConstructionState s;
    s.config = parse_config(field(doc, "config"));
    s.config.seed = parse_unsigned<uint64_t>(field(doc, "seed"), "seed");
    s.draws = parse_unsigned<uint64_t>(field(doc, "draw_counter"), "draw_counter");
    s.n = parse_unsigned<uint64_t>(field(doc, "n"), "n");
    s.A = parse_element_list(field(doc, "A"), "A");
    s.B = parse_element_list(field(doc, "B"), "B");

    const auto& pairs = field(doc, "pairs");
    if (!pairs.is_array()) schema_error("pairs must be an array");
    for (const auto& pj : pairs) {
        const auto p64 = parse_unsigned<uint64_t>(field(pj, "p"), "pairs[].p");
        if (p64 > UINT32_MAX || !is_prime_u64(p64)) schema_error("pairs[].p " + std::to_string(p64) + " is not a prime");
        const auto p = static_cast<uint32_t>(p64);
        PrimeCompatiblePair pair{p, parse_residue_set(field(pj, "U"), p, "pairs[].U"),
                                 parse_residue_set(field(pj, "V"), p, "pairs[].V"), {}, {}, {}};
        const auto& reserved = field(pj, "reserved");
        if (!reserved.is_array() || reserved.size() > 2) schema_error("pairs[].reserved must be an array of <= 2");
        for (const auto& r : reserved) {
            auto v = parse_unsigned<uint64_t>(r, "pairs[].reserved");
            if (v >= p) schema_error("pairs[].reserved residue out of range");
            pair.reserved.push_back(static_cast<uint32_t>(v));
        }
        const auto& assigned = field(pj, "assigned");
        if (!assigned.is_object()) schema_error("pairs[].assigned must be an object");
        for (const auto& [key, value] : assigned.items()) {
            auto v = parse_unsigned<uint64_t>(value, "pairs[].assigned");
            if (v >= p) schema_error("pairs[].assigned residue out of range");
            if (key == "+") {
                pair.assigned_positive = static_cast<uint32_t>(v);
            } else if (key == "-") {
                pair.assigned_negative = static_cast<uint32_t>(v);
            } else {
                schema_error("pairs[].assigned keys must be '+' or '-'");
            }
        }
        if (!s.pairs.emplace(p, std::move(pair)).second) schema_error("duplicate pair for p = " + std::to_string(p));
    }

    const auto& represented = field(doc, "represented");
    if (!represented.is_array()) schema_error("represented must be an array");
    for (const auto& e : represented) {
        auto r = parse_integer(field(e, "r"), "represented[].r");
        Witness w{parse_integer(field(e, "a"), "represented[].a"), parse_integer(field(e, "b"), "represented[].b")};
        if (!s.represented.emplace(r, std::move(w)).second) schema_error("duplicate ledger entry " + r.get_str());
    }
    return s;
}

void save_state_file(const ConstructionState& state, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << save_state(state);
    if (!out) throw Error("write failed for " + path.string());
}

ConstructionState load_state_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_state(buf.str());
}

}  // namespace sdpc
