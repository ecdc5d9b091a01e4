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

#include "wse/params.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numeric>

#include "wse/error.hpp"

namespace wse {

namespace {

std::uint64_t parse_digits(std::string_view digits, std::string_view original) {
    std::uint64_t value = 0;
    const auto *end = digits.data() + digits.size();
    const auto res = std::from_chars(digits.data(), end, value);
    require(res.ec == std::errc() && res.ptr == end, "Threshold: cannot parse '" + std::string(original) + "'");
    return value;
}

} // namespace

Threshold::Threshold(std::uint64_t num, std::uint64_t den) {
    require(den > 0, "Threshold: zero denominator");
    require(num <= den, "Threshold: value must not exceed 1");
    const std::uint64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Threshold Threshold::parse(std::string_view text) {
    require(!text.empty(), "Threshold: empty value");
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        return Threshold(parse_digits(text.substr(0, slash), text), parse_digits(text.substr(slash + 1), text));
    }
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        return Threshold(parse_digits(text, text), 1);
    }
    const auto int_part = text.substr(0, dot);
    auto frac_part = text.substr(dot + 1);
    while (!frac_part.empty() && frac_part.back() == '0') {
        frac_part.remove_suffix(1);
    }
    require(frac_part.size() <= 18, "Threshold: at most 18 fractional digits supported");
    std::uint64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) {
        den *= 10;
    }
    const std::uint64_t whole = int_part.empty() ? 0 : parse_digits(int_part, text);
    const std::uint64_t frac = frac_part.empty() ? 0 : parse_digits(frac_part, text);
    require(whole <= 1, "Threshold: value must not exceed 1");
    return Threshold(whole * den + frac, den);
}

Threshold Threshold::from_double(double value) {
    require(std::isfinite(value) && value >= 0.0 && value <= 1.0, "Threshold: value must lie in [0, 1]");
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
    require(res.ec == std::errc(), "Threshold: cannot format value");
    return parse(std::string_view(buf.data(), static_cast<std::size_t>(res.ptr - buf.data())));
}

bool Threshold::passes(std::uint64_t successes, std::uint64_t tests) const noexcept {
    __extension__ using Wide = unsigned __int128;
    return static_cast<Wide>(successes) * den_ >= static_cast<Wide>(num_) * tests;
}

std::string Threshold::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

void validate_test_probability(double q) {
    require(std::isfinite(q) && q >= 0.0 && q <= 1.0, "test probability q must lie in [0, 1]");
}

void validate_threshold(double gamma) {
    require(std::isfinite(gamma) && gamma >= 0.75 && gamma <= 1.0, "threshold gamma must lie in [3/4, 1]");
}

void TestParams::validate() const {
    validate_test_probability(q);
    require(gamma.numerator() * 4 >= gamma.denominator() * 3 && gamma.numerator() <= gamma.denominator(),
            "threshold gamma must lie in [3/4, 1]");
}

} // namespace wse
