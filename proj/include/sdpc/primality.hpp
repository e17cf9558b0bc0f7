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

#include <string_view>

#include "sdpc/modular.hpp"

namespace sdpc {

enum class PrimeStatus { CertifiedPrime, ProbablePrime, Composite, UnitOrSmall };

std::string_view to_string(PrimeStatus s);

struct PrimalityVerdict {
    mpz_class value;
    PrimeStatus status;
    int rounds = 0;  // only meaningful for ProbablePrime

    bool prime() const { return status == PrimeStatus::CertifiedPrime || status == PrimeStatus::ProbablePrime; }
};

inline constexpr int kDefaultPrpRounds = 25;

// Sign is ignored. Exact below 2^64; above, a BPSW + Miller-Rabin probable prime test.
PrimalityVerdict is_prime(const mpz_class& n, int rounds = kDefaultPrpRounds);

}  // namespace sdpc
