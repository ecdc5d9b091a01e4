// Copyright 2026 The wse-di Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Named self-checks run by `wse_di verify`.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wse/chsh.hpp"
#include "wse/params.hpp"

namespace wse {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Decides S >= gamma * R.
using PassComparator = std::function<bool(std::uint64_t successes, std::uint64_t tests, const Threshold &gamma)>;

/// Threshold::passes.
PassComparator exact_comparator();

/// Compares `comparator` with exact integer arithmetic for every (S, R) with
/// R <= max_tests over a set of thresholds, ties included.
CheckResult gamma_tie_check(const PassComparator &comparator, std::uint64_t max_tests = 200);

struct VerifyOptions {
    std::uint64_t seed = 1;
    /// Extra setup whose CHSH bound is checked.
    std::optional<DeviceSetup> setup;
    PassComparator comparator = exact_comparator();
};

std::vector<CheckResult> run_verification(const VerifyOptions &options);

} // namespace wse
