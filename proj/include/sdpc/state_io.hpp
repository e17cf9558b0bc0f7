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

#include <filesystem>
#include <string>

#include "sdpc/construction.hpp"

namespace sdpc {

inline constexpr const char* kStateFormat = "sdpc-state";
inline constexpr int kStateVersion = 1;

/**
 * JSON state document. Integers that may outgrow 64 bits (A, B, ledger
 * entries) are decimal strings; residues are plain numbers. Keys are emitted
 * in sorted order so equal states serialize to identical bytes.
 */
std::string save_state(const ConstructionState& state);

// Throws Error with a schema diagnostic on malformed input.
ConstructionState load_state(const std::string& text);

void save_state_file(const ConstructionState& state, const std::filesystem::path& path);
ConstructionState load_state_file(const std::filesystem::path& path);

}  // namespace sdpc
