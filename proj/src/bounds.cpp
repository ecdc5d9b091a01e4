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

#include "wse/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wse/chsh.hpp"
#include "wse/error.hpp"

namespace wse {

namespace {

constexpr double kDomainTol = 1e-12;

double clamp_unit(double x, const char *what) {
    require(x >= -kDomainTol && x <= 1.0 + kDomainTol, std::string(what) + ": argument must lie in [0, 1]");
    return std::clamp(x, 0.0, 1.0);
}

double clamp_chsh(double beta, const char *what) {
    require(beta >= 2.0 - kDomainTol && beta <= kTsirelsonBound + kDomainTol,
            std::string(what) + ": beta must lie in [2, 2 sqrt 2]");
    return std::clamp(beta, 2.0, kTsirelsonBound);
}

} // namespace

double entropy_rate_from_anticommutator(double x) {
    x = clamp_unit(x, "entropy_rate_from_anticommutator");
    return 1.0 - std::log2(1.0 + std::sqrt((1.0 + x) / 2.0));
}

double max_anticommutator_from_chsh(double beta) {
    beta = clamp_chsh(beta, "max_anticommutator_from_chsh");
    return std::clamp(beta / 4.0 * std::sqrt(std::max(0.0, 8.0 - beta * beta)), 0.0, 1.0);
}

double entropy_rate_from_chsh(double beta) {
    return entropy_rate_from_anticommutator(max_anticommutator_from_chsh(beta));
}

double min_entropy_rate_bounded(double beta, std::uint64_t dimension, std::uint64_t rounds) {
    require(dimension >= 1, "min_entropy_rate_bounded: dimension must be >= 1");
    require(rounds >= 1, "min_entropy_rate_bounded: rounds must be >= 1");
    return entropy_rate_from_chsh(beta) - std::log2(static_cast<double>(dimension)) / static_cast<double>(rounds);
}

NoisyStorage NoisyStorage::bounded_surrogate(std::uint64_t dimension) {
    require(dimension >= 1, "NoisyStorage: dimension must be >= 1");
    return NoisyStorage(Surrogate{std::log2(static_cast<double>(dimension))});
}

NoisyStorage NoisyStorage::tabulated(std::vector<double> table) {
    require(!table.empty(), "NoisyStorage: empty success-probability table");
    require(table.front() == 1.0, "NoisyStorage: success probability at 0 bits must be 1");
    for (std::size_t k = 0; k < table.size(); ++k) {
        require(table[k] > 0.0 && table[k] <= 1.0, "NoisyStorage: success probabilities must lie in (0, 1]");
        require(k == 0 || table[k] <= table[k - 1], "NoisyStorage: success probability must be non-increasing");
    }
    return NoisyStorage(std::move(table));
}

double NoisyStorage::success_probability(std::uint64_t bits) const {
    if (const auto *s = std::get_if<Surrogate>(&kind_)) {
        return std::min(1.0, std::exp2(s->log2_dimension - static_cast<double>(bits)));
    }
    const auto &table = std::get<Table>(kind_);
    return bits < table.size() ? table[bits] : table.back();
}

double min_entropy_rate_noisy(double eps_plus, std::uint64_t rounds, double epsilon, const NoisyStorage &storage) {
    require(rounds >= 1, "min_entropy_rate_noisy: rounds must be >= 1");
    require(epsilon > 0.0 && epsilon < 1.0, "min_entropy_rate_noisy: smoothing parameter must lie in (0, 1)");
    const double n = static_cast<double>(rounds);
    const double arg = std::floor(n * entropy_rate_from_anticommutator(eps_plus) - std::log2(1.0 / epsilon));
    if (arg <= 0.0) {
        return 0.0;
    }
    const double p = storage.success_probability(static_cast<std::uint64_t>(arg));
    return std::max(0.0, -std::log2(p) / n);
}

double live_win_max(double t) {
    t = clamp_unit(t, "live_win_max");
    return 0.5 + std::sqrt(1.0 + t) / (2.0 * std::numbers::sqrt2);
}

double test_win_max(double t) {
    t = clamp_unit(t, "test_win_max");
    return 0.5 + (std::sqrt(1.0 + t) + std::sqrt(1.0 - t)) / (4.0 * std::numbers::sqrt2);
}

TradeoffPoint tradeoff_point(double t) { return {t, live_win_max(t), test_win_max(t)}; }

std::vector<TradeoffPoint> tradeoff_curve(std::size_t samples) {
    require(samples >= 2, "tradeoff_curve: need at least 2 samples");
    std::vector<TradeoffPoint> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = i + 1 == samples ? 1.0 : static_cast<double>(i) / static_cast<double>(samples - 1);
        out.push_back(tradeoff_point(t));
    }
    return out;
}

bool is_admissible(double p_live, double p_test, double tol) {
    if (p_live < 0.0 || p_test < 0.0 || p_live > 1.0 + tol || p_test > 1.0 + tol) {
        return false;
    }
    // live_win_max is increasing and test_win_max decreasing in t, so take the
    // smallest t that reaches p_live and compare the test probability there.
    double t = 0.0;
    const double excess = (p_live - 0.5) * 2.0 * std::numbers::sqrt2;
    if (excess > 1.0) {
        t = excess * excess - 1.0;
    }
    if (t > 1.0 + tol) {
        return false;
    }
    return p_test <= test_win_max(std::min(t, 1.0)) + tol;
}

} // namespace wse
