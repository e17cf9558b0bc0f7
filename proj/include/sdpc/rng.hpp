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
#include <random>

namespace sdpc {

/**
 * mt19937_64 that counts its draws, so a run can be persisted as
 * (seed, draws) and resumed by replaying the discard.
 *
 * Bounded draws use rejection on the raw 64-bit output; we avoid
 * std::uniform_int_distribution since its output is implementation defined.
 */
class SeededRng {
  public:
    explicit SeededRng(uint64_t seed = 0, uint64_t draws = 0);

    uint64_t next();
    // Uniform in [0, bound), bound >= 1.
    uint64_t below(uint64_t bound);
    bool coin() { return next() >> 63; }

    uint64_t seed() const { return seed_; }
    uint64_t draws() const { return draws_; }

  private:
    uint64_t seed_;
    uint64_t draws_ = 0;
    std::mt19937_64 engine_;
};

}  // namespace sdpc
