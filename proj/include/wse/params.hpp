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

#include <cstdint>
#include <string>
#include <string_view>

namespace wse {

/// CHSH pass threshold held as an exact rational num/den, so that the pass
/// test S >= gamma * R is decided by integer cross-multiplication and ties
/// at the threshold always pass.
class Threshold {
  public:
    /// Accepts "0.85", "1", "3/4". At most 18 fractional digits.
    static Threshold parse(std::string_view text);
    /// Shortest decimal that round-trips to `value` (so 0.85 becomes 17/20).
    static Threshold from_double(double value);

    std::uint64_t numerator() const noexcept { return num_; }
    std::uint64_t denominator() const noexcept { return den_; }
    double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// successes >= threshold * tests, exactly. tests == 0 passes.
    bool passes(std::uint64_t successes, std::uint64_t tests) const noexcept;

    /// "num/den" in lowest terms.
    std::string str() const;

    friend bool operator==(const Threshold &, const Threshold &) = default;

  private:
    Threshold(std::uint64_t num, std::uint64_t den);
    std::uint64_t num_ = 3;
    std::uint64_t den_ = 4;
};

/// Protocol parameters: test probability q in [0,1], CHSH threshold gamma in
/// [3/4, 1], and number of rounds n.
struct TestParams {
    double q = 0.5;
    Threshold gamma = Threshold::parse("0.85");
    std::uint64_t rounds = 1;

    /// Throws ValidationError on out-of-range fields.
    void validate() const;
};

/// Validates q in [0,1] and gamma in [3/4, 1].
void validate_test_probability(double q);
void validate_threshold(double gamma);

} // namespace wse
