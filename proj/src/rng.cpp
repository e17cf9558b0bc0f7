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

#include "sdpc/rng.hpp"

namespace sdpc {

SeededRng::SeededRng(uint64_t seed, uint64_t draws) : seed_(seed), engine_(seed) {
    engine_.discard(draws);
    draws_ = draws;
}

uint64_t SeededRng::next() {
    draws_++;
    return engine_();
}

uint64_t SeededRng::below(uint64_t bound) {
    // Largest multiple of bound that fits; reject above it.
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    while (true) {
        uint64_t v = next();
        if (v <= limit) return v % bound;
    }
}

}  // namespace sdpc
