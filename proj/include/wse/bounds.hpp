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

// Closed-form security bounds for memoryless devices and the live/test
// trade-off curve. All logarithms are base 2.

#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace wse {

/// Per-round min-entropy against a classical adversary, as a function of the
/// absolute effective anticommutator x in [0,1]:
///   1 - log2(1 + sqrt((1 + x) / 2)).
double entropy_rate_from_anticommutator(double x);

/// Largest eps_plus compatible with CHSH value beta in [2, 2 sqrt 2]:
///   (beta / 4) sqrt(8 - beta^2).
/// Inverse of chsh_bound() on that interval.
double max_anticommutator_from_chsh(double beta);

/// Memoryless min-entropy rate certified by beta in [2, 2 sqrt 2]; zero at
/// beta = 2 and strictly increasing.
double entropy_rate_from_chsh(double beta);

/// Min-entropy rate against an adversary with quantum memory of dimension d
/// after n rounds: rate(beta) - log2(d) / n. Non-positive means insecure.
double min_entropy_rate_bounded(double beta, std::uint64_t dimension, std::uint64_t rounds);

/// Success probability of sending k classical bits through the adversary's
/// storage channel. Non-increasing in k, equal to 1 at k = 0.
class NoisyStorage {
  public:
    /// min(1, d / 2^k): the channel that stores a d-dimensional system perfectly.
    static NoisyStorage bounded_surrogate(std::uint64_t dimension);
    /// table[k] for k < size; table.back() beyond. Validated: table[0] == 1,
    /// entries in (0, 1], non-increasing.
    static NoisyStorage tabulated(std::vector<double> table);

    double success_probability(std::uint64_t bits) const;

  private:
    struct Surrogate {
        double log2_dimension;
    };
    using Table = std::vector<double>;
    explicit NoisyStorage(std::variant<Surrogate, Table> kind) : kind_(std::move(kind)) {}
    std::variant<Surrogate, Table> kind_;
};

struct BoundedStorage {
    std::uint64_t dimension = 1;
};

using StorageModel = std::variant<BoundedStorage, NoisyStorage>;

/// Smooth min-entropy rate against noisy storage:
///   -(1/n) log2 P_succ(floor(n * rate(eps_plus) - log2(1/epsilon))),
/// with the floor argument clamped at 0 (which yields 0).
double min_entropy_rate_noisy(double eps_plus, std::uint64_t rounds, double epsilon, const NoisyStorage &storage);

/// Optimal live-round winning probability at anticommutator t:
///   1/2 + sqrt(1 + t) / (2 sqrt 2).
double live_win_max(double t);

/// Optimal test-round (CHSH) winning probability at anticommutator t:
///   1/2 + (sqrt(1 + t) + sqrt(1 - t)) / (4 sqrt 2).
double test_win_max(double t);

struct TradeoffPoint {
    double t = 0.0;
    double p_live = 0.0;
    double p_test = 0.0;
};

TradeoffPoint tradeoff_point(double t);

/// `samples` points with t uniform on [0, 1], ascending.
std::vector<TradeoffPoint> tradeoff_curve(std::size_t samples);

/// Whether (p_live, p_test) lies on or below the trade-off curve (within tol).
bool is_admissible(double p_live, double p_test, double tol = 1e-12);

} // namespace wse
