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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace wse {

/// SplitMix64 (Steele, Lea & Flood 2014): state advances by the 64-bit
/// golden-ratio increment and each output is the Stafford "Mix13" finalizer
/// of the state. Outputs depend only on (seed, draw index), so independent
/// streams are derived by hashing (master seed, stream index) into a seed.
///
/// All derived quantities (uniform doubles, Bernoulli draws, normals) are
/// computed here rather than with <random> distributions so that results are
/// bit-identical across standard library implementations.
class SplitMix64 {
  public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    /// Stream `index` of master seed `master`; streams for distinct indices
    /// are statistically independent.
    static SplitMix64 stream(std::uint64_t master, std::uint64_t index) noexcept;

    static std::uint64_t mix(std::uint64_t z) noexcept;

    std::uint64_t next() noexcept {
        state_ += kGamma;
        return mix(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// True with probability p (p outside [0,1] saturates).
    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Fair bit.
    unsigned bit() noexcept { return static_cast<unsigned>(next() >> 63); }

    /// Uniform on {0, ..., n-1}; n > 0.
    std::uint64_t below(std::uint64_t n) noexcept;

    /// Standard normal via Box-Muller (one variate per call).
    double normal() noexcept;

    std::uint64_t state() const noexcept { return state_; }

  private:
    std::uint64_t state_;
};

/// Worker count for internal parallel loops: hardware concurrency, capped by
/// the WSE_DI_THREADS environment variable when it is set to a positive int.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Indices are
/// split into contiguous blocks; body must not share mutable state across
/// indices.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &body);

} // namespace wse
