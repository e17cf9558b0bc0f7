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

#include "sdpc/primality.hpp"

namespace sdpc {

std::string_view to_string(PrimeStatus s) {
    switch (s) {
        case PrimeStatus::CertifiedPrime: return "certified-prime";
        case PrimeStatus::ProbablePrime: return "probable-prime";
        case PrimeStatus::Composite: return "composite";
        case PrimeStatus::UnitOrSmall: return "unit-or-small";
    }
    return "?";
}

PrimalityVerdict is_prime(const mpz_class& n, int rounds) {
    mpz_class mag = abs(n);
    if (mag <= 1) return {n, PrimeStatus::UnitOrSmall};
    if (mag.fits_ulong_p()) {
        return {n, is_prime_u64(mag.get_ui()) ? PrimeStatus::CertifiedPrime : PrimeStatus::Composite};
    }
    int r = mpz_probab_prime_p(mag.get_mpz_t(), rounds);
    if (r == 0) return {n, PrimeStatus::Composite};
    return {n, PrimeStatus::ProbablePrime, rounds};
}

}  // namespace sdpc
