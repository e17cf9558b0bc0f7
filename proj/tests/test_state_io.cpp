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

#include <filesystem>
#include <json.hpp>

#include "sdpc/state_io.hpp"

using namespace sdpc;
using nlohmann::json;

namespace {

std::vector<ConstructionState> sample_states() {
    std::vector<ConstructionState> out;
    Config c;
    out.push_back(initial_state(c));
    out.push_back(run(initial_state(c), 4).state);

    Config wide;
    wide.p_limit = 12;
    wide.seed = 99;
    wide.lookahead = 2;
    out.push_back(run(initial_state(wide), 4).state);  // consumes a reserve mod 7

    Config faithful;
    faithful.mode = Mode::Faithful;
    faithful.K = 37;
    faithful.seed = 3;
    auto f = initial_state(faithful);
    f.n = signed_prime_index(-41);  // hand-set step counter, so this one does not verify
    out.push_back(extend_pairs(f));
    return out;
}

std::string mutate(const ConstructionState& s, const std::function<void(json&)>& edit) {
    json doc = json::parse(save_state(s));
    edit(doc);
    return doc.dump(2);
}

}  // namespace

TEST_SUITE("state_io") {

TEST_CASE("save and load round trip byte for byte") {
    for (const auto& s : sample_states()) {
        const std::string first = save_state(s);
        auto loaded = load_state(first);
        CHECK(verify(loaded).passed() == verify(s).passed());
        CHECK(loaded.config == s.config);
        CHECK(loaded.pairs == s.pairs);
        CHECK(loaded.A == s.A);
        CHECK(loaded.B == s.B);
        CHECK(loaded.n == s.n);
        CHECK(loaded.draws == s.draws);
        CHECK(save_state(loaded) == first);
    }
}

TEST_CASE("reserve assignment survives persistence") {
    auto states = sample_states();
    const auto& pair = states[2].pairs.at(7);
    REQUIRE(pair.assigned_positive);
    CHECK(load_state(save_state(states[2])).pairs.at(7).assigned_positive == pair.assigned_positive);
}

TEST_CASE("big integers are written as decimal strings") {
    auto s = initial_state(Config{});
    s.A.push_back(mpz_class("123456789012345678901234567890"));
    json doc = json::parse(save_state(s));
    CHECK(doc["A"][2] == "123456789012345678901234567890");
    CHECK(doc["format"] == "sdpc-state");
    CHECK(doc["version"] == 1);
}

TEST_CASE("file round trip") {
    auto path = std::filesystem::temp_directory_path() / "sdpc_state_io_test.json";
    auto s = initial_state(Config{});
    save_state_file(s, path);
    CHECK(save_state(load_state_file(path)) == save_state(s));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_state_file(path), Error);
}

TEST_CASE("schema errors") {
    auto s = initial_state(Config{});
    auto bad = [&](const std::function<void(json&)>& edit) {
        CHECK_THROWS_WITH_AS(load_state(mutate(s, edit)), doctest::Contains("state schema"), Error);
    };
    bad([](json& d) { d["version"] = 2; });
    bad([](json& d) { d["format"] = "other"; });
    bad([](json& d) { d.erase("A"); });
    bad([](json& d) { d["A"][0] = 1; });
    bad([](json& d) { d["A"][0] = "1x"; });
    bad([](json& d) { d["B"] = json::array({"6", "6"}); });
    bad([](json& d) { d["pairs"][0]["p"] = 4; });
    bad([](json& d) { d["pairs"][0]["U"] = json::array({5}); });
    bad([](json& d) { d["pairs"][1] = d["pairs"][0]; });
    bad([](json& d) { d["config"]["mode"] = "sideways"; });
    bad([](json& d) { d["config"]["p_limit"] = 3; });
    bad([](json& d) { d["n"] = -1; });
    bad([](json& d) { d["represented"][1] = d["represented"][0]; });
    CHECK_THROWS_WITH_AS(load_state("{not json"), doctest::Contains("state schema"), Error);
    CHECK_THROWS_AS(load_state("[]"), Error);
}

TEST_CASE("content errors load but fail verify") {
    auto s = initial_state(Config{});
    auto text = mutate(s, [](json& d) { d["A"] = json::array({"1", "7"}); });
    auto loaded = load_state(text);
    CHECK_FALSE(verify(loaded).passed());
}

}  // TEST_SUITE
