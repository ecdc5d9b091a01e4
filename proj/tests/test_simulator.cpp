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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "wse/alpha_min.hpp"
#include "wse/bounds.hpp"
#include "wse/error.hpp"
#include "wse/json_io.hpp"
#include "wse/simulator.hpp"

using namespace wse;
using Catch::Matchers::WithinAbs;

namespace {

TestParams params(double q, const char *gamma, std::uint64_t n) {
    TestParams p;
    p.q = q;
    p.gamma = Threshold::parse(gamma);
    p.rounds = n;
    return p;
}

// |observed/trials - p| within `sigmas` binomial standard deviations.
bool within_band(std::uint64_t observed, std::uint64_t trials, double p, double sigmas = 3.0) {
    const double n = static_cast<double>(trials);
    const double sd = std::sqrt(p * (1.0 - p) / n);
    return std::abs(static_cast<double>(observed) / n - p) <= sigmas * sd + 1e-12;
}

} // namespace

TEST_CASE("thresholds compare exactly", "[simulator][threshold]") {
    const auto g = Threshold::parse("0.85");
    CHECK(g.numerator() == 17);
    CHECK(g.denominator() == 20);
    CHECK(g.passes(17, 20));
    CHECK_FALSE(g.passes(16, 20));
    CHECK(g.passes(0, 0));
    CHECK(Threshold::parse("3/4") == Threshold::parse("0.75"));
    CHECK(Threshold::from_double(0.85) == g);
    CHECK(Threshold::parse("1").passes(5, 5));
    CHECK_FALSE(Threshold::parse("1").passes(4, 5));
    CHECK(Threshold::parse("7/9").str() == "7/9");
    CHECK_THROWS_AS(Threshold::parse("1.5"), ValidationError);
    CHECK_THROWS_AS(Threshold::parse("abc"), ValidationError);
    CHECK_THROWS_AS(Threshold::parse("1/0"), ValidationError);
    CHECK_THROWS_AS(Threshold::parse("3/2"), ValidationError);
    CHECK_THROWS_AS(Threshold::parse("2"), ValidationError);
    CHECK_THROWS_AS(params(0.5, "0.7", 1).validate(), ValidationError);
    CHECK_THROWS_AS(params(1.5, "0.8", 1).validate(), ValidationError);
}

TEST_CASE("transcripts satisfy their counter identities", "[simulator]") {
    const auto strat = optimal_curve_strategy(0.5, 0.85);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto tr = run_sequential_attack(params(0.5, "0.85", 30), *strat, seed);
        CHECK(tr.counters_consistent());
        std::uint64_t r = 0, s = 0;
        bool h = true;
        for (const auto &rec : tr.rounds) {
            if (rec.q == 1) {
                REQUIRE(rec.t.has_value());
                REQUIRE(rec.y.has_value());
                CHECK_FALSE(rec.guess.has_value());
                ++r;
                s += ((rec.x ^ *rec.y) == (rec.theta & *rec.t)) ? 1 : 0;
            } else {
                REQUIRE(rec.guess.has_value());
                CHECK_FALSE(rec.t.has_value());
                h = h && *rec.guess == rec.x;
            }
        }
        CHECK(tr.r_n == r);
        CHECK(tr.s_n == s);
        CHECK(tr.h_n == h);
        CHECK(tr.passed == (20 * s >= 17 * r));
        CHECK(tr.failed == (tr.passed && h));
    }
}

TEST_CASE("no test rounds passes vacuously", "[simulator]") {
    const auto strat = classical_endpoint_strategy();
    const auto tr = run_sequential_attack(params(0.0, "0.9", 5), *strat, 3);
    CHECK(tr.r_n == 0);
    CHECK(tr.no_test_rounds);
    CHECK(tr.passed);
    CHECK(tr.failed);
    CHECK(tr.f_chsh() == "-");
    CHECK(std::isnan(tr.f_chsh_value()));
}

TEST_CASE("strategy contract", "[simulator]") {
    CHECK_THROWS_AS(FixedLawStrategy({1.2, 0.5}, false), ValidationError);
    CHECK_THROWS_AS(FixedLawStrategy({0.5, -0.1}, false), ValidationError);
    CHECK_THROWS_AS(FixedLawStrategy({1.0, 1.0}, true), ValidationError);
    CHECK_NOTHROW(FixedLawStrategy({1.0, 1.0}, false));

    // Perfect but inadmissible devices always fail at gamma = 1.
    const FixedLawStrategy perfect({1.0, 1.0}, false);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        CHECK(run_sequential_attack(params(0.5, "1", 25), perfect, seed).failed);
    }
    const auto rep = monte_carlo_failure(params(0.5, "1", 25), perfect, 200, 1);
    CHECK(rep.failures == 200);
    CHECK_FALSE(rep.claims_admissible);
    CHECK_FALSE(rep.law_admissible);
    CHECK(rep.bound_violated);
}

TEST_CASE("runs are deterministic", "[simulator]") {
    const auto strat = optimal_curve_strategy(0.5, 0.85);
    const auto p = params(0.5, "0.85", 40);
    const auto a = run_sequential_attack(p, *strat, 99);
    const auto b = run_sequential_attack(p, *strat, 99);
    CHECK(transcript_to_jsonl(a) == transcript_to_jsonl(b));
    CHECK(transcript_to_jsonl(a) != transcript_to_jsonl(run_sequential_attack(p, *strat, 100)));

    const auto r1 = monte_carlo_failure(p, *strat, 3000, 5, 1);
    const auto r4 = monte_carlo_failure(p, *strat, 3000, 5, 4);
    CHECK(report_to_json(r1).dump() == report_to_json(r4).dump());
}

TEST_CASE("transcript serialization", "[simulator][json]") {
    const auto strat = classical_endpoint_strategy();
    const auto tr = run_sequential_attack(params(0.5, "0.85", 3), *strat, 1);
    const std::string text = transcript_to_jsonl(tr);
    std::size_t lines = 0;
    for (char c : text) {
        lines += c == '\n' ? 1 : 0;
    }
    CHECK(lines == 4);
    const auto footer = Json::parse(text.substr(text.rfind('\n', text.size() - 2) + 1));
    CHECK(footer["footer"] == true);
    CHECK(footer["r_n"] == tr.r_n);
    CHECK(footer["gamma"] == "17/20");
}

TEST_CASE("fixed laws are reproduced empirically", "[simulator][statistics]") {
    for (double t : {0.0, 0.4, 1.0}) {
        const auto strat = curve_strategy(t);
        const auto law = *strat->stationary_law();
        std::uint64_t tests = 0, wins = 0, lives = 0, correct = 0;
        SplitMix64 rng(1234);
        const auto tr = run_sequential_attack(params(0.5, "0.75", 200000), *strat, rng);
        for (const auto &rec : tr.rounds) {
            if (rec.q == 1) {
                ++tests;
                wins += rec.test_won() ? 1 : 0;
            } else {
                ++lives;
                correct += rec.guess_correct() ? 1 : 0;
            }
        }
        CHECK(within_band(wins, tests, law.p_test_win));
        CHECK(within_band(correct, lives, law.p_live_correct));
        CHECK(within_band(tests, tests + lives, 0.5));
    }
}

TEST_CASE("quantum round models", "[simulator][quantum]") {
    for (double theta : {0.3, 1.0, std::numbers::pi / 2}) {
        const auto law = bisector_model(theta).law();
        CHECK_THAT(law.p_live_correct, WithinAbs(0.5 + 0.5 * std::sqrt((1.0 + std::cos(theta)) / 2.0), 1e-12));
        CHECK_THAT(law.p_test_win, WithinAbs(0.5 + std::sqrt(1.0 + std::sin(theta)) / 4.0, 1e-12));
        CHECK(is_admissible(law.p_live_correct, law.p_test_win, 1e-9));
    }

    const QuantumStrategy strat(bisector_model(std::numbers::pi / 2));
    const double expect = 0.5 + 0.5 / std::numbers::sqrt2;
    std::uint64_t tests = 0, wins = 0, lives = 0, correct = 0;
    const auto tr = run_sequential_attack(params(0.5, "0.75", 100000), strat, 777);
    for (const auto &rec : tr.rounds) {
        if (rec.q == 1) {
            ++tests;
            wins += rec.test_won() ? 1 : 0;
        } else {
            ++lives;
            correct += rec.guess_correct() ? 1 : 0;
        }
    }
    CHECK(within_band(wins, tests, expect));
    CHECK(within_band(correct, lives, expect));
    CHECK(tr.counters_consistent());

    CHECK_THROWS_AS(QuantumRoundModel(ideal_setup(), qubit_observable(0, 0, 1), {{{0, 0}}}), ValidationError);
    CHECK_THROWS_AS(QuantumRoundModel(ideal_setup(), qubit_observable(0, 0, 1), {{{0, 2}}, {{1, 1}}}),
                    ValidationError);
}

TEST_CASE("quantum models load from JSON", "[simulator][json]") {
    Json j = setup_to_json(saturating_setup(1.0));
    j["live_measurement"] = matrix_to_json(bisector_observable(1.0).matrix());
    const auto m = quantum_model_from_json(j);
    const auto ref = bisector_model(1.0).law();
    CHECK_THAT(m.law().p_live_correct, WithinAbs(ref.p_live_correct, 1e-15));
    CHECK_THAT(m.law().p_test_win, WithinAbs(ref.p_test_win, 1e-15));
}

TEST_CASE("Wilson interval", "[simulator]") {
    const auto zero = wilson_interval(0, 100);
    CHECK(zero.low == 0.0);
    CHECK(zero.high > 0.0);
    const auto all = wilson_interval(100, 100);
    CHECK_THAT(all.high, WithinAbs(1.0, 1e-15));
    // Written out for 30 of 100 at z = 2.5758293035489004.
    const double z = 2.5758293035489004, n = 100.0, p = 0.3;
    const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
    const double half = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
    const auto mid = wilson_interval(30, 100);
    CHECK_THAT(mid.low, WithinAbs(centre - half, 1e-14));
    CHECK_THAT(mid.high, WithinAbs(centre + half, 1e-14));
    CHECK_THROWS_AS(wilson_interval(1, 0), ValidationError);
}

TEST_CASE("Monte-Carlo failure estimates", "[simulator][montecarlo]") {
    const auto p = params(0.5, "0.85", 20);
    const auto strat = optimal_curve_strategy(0.5, 0.85);
    const auto rep = monte_carlo_failure(p, *strat, 20000, 11);
    CHECK(rep.failures <= rep.passes);
    CHECK(rep.p_hat == static_cast<double>(rep.failures) / 20000.0);
    CHECK_THAT(rep.p_pass_hat * rep.conditional_rate, WithinAbs(rep.p_hat, 1e-15));
    CHECK(rep.ci_low <= rep.p_hat);
    CHECK(rep.p_hat <= rep.ci_high);
    CHECK_THAT(rep.bound, WithinAbs(std::pow(optimal_decay_rate(0.5, 0.85).alpha_min, 20.0), 1e-15));
    const double sd = std::sqrt(rep.bound * (1.0 - rep.bound) / 20000.0);
    CHECK(rep.p_hat <= rep.bound + 3.0 * sd);
    CHECK_FALSE(rep.bound_violated);
    CHECK(rep.law_admissible);

    CHECK_THROWS_AS(monte_carlo_failure(p, *strat, 0, 1), ValidationError);

    const auto trivial = monte_carlo_failure(params(0.5, "3/4", 20), *classical_endpoint_strategy(), 2000, 2);
    CHECK_THAT(trivial.bound, WithinAbs(1.0, 1e-7));
    CHECK_FALSE(trivial.bound_violated);

    // Classical endpoint, high threshold, long run: failure is rare.
    const auto rare = monte_carlo_failure(params(0.5, "0.9", 100), *classical_endpoint_strategy(), 10000, 3);
    CHECK(rare.ci_high <= rare.bound);
}

TEST_CASE("one round matches the closed-form convolution", "[simulator][montecarlo]") {
    // F = (test round won) or (live round guessed), for gamma > 0.
    const FixedLawStrategy strat({0.9, 0.6}, false);
    const double q = 0.3;
    const double exact = q * 0.6 + (1.0 - q) * 0.9;
    const std::uint64_t trials = 100000;
    const auto rep = monte_carlo_failure(params(q, "0.8", 1), strat, trials, 21);
    CHECK(within_band(rep.failures, trials, exact));
}

TEST_CASE("recursion audit", "[simulator][audit]") {
    const auto p = params(0.5, "0.85", 12);
    const auto strat = optimal_curve_strategy(0.5, 0.85);
    const auto audit = recursion_audit(p, *strat, 40000, 8);
    CHECK(audit.base_case_ok);
    CHECK(audit.support_ok);
    CHECK(audit.identity_ok);
    CHECK(audit.ansatz_ok);
    // Rounds 0..n, nine grid points each.
    CHECK(audit.rows.size() == 13 * 9);
    for (const auto &row : audit.rows) {
        if (row.x > (1.0 - 0.85) * static_cast<double>(row.round) + 1e-6) {
            CHECK(row.tail == 0.0);
        }
    }
    CHECK_THROWS_AS(recursion_audit(p, *strat, 0, 1), ValidationError);
}

TEST_CASE("honest runs are correct", "[simulator][honest]") {
    const auto forced = run_honest(std::vector<unsigned>{0}, std::vector<unsigned>{0}, 5);
    CHECK(forced.index_set == std::vector<std::size_t>{0});
    CHECK(forced.bob[0] == forced.x[0]);
    CHECK(forced.correct);

    double size_sum = 0.0;
    std::uint64_t off = 0, off_agree = 0;
    bool all_correct = true;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        const auto run = run_honest(8, seed);
        all_correct = all_correct && run.correct;
        size_sum += static_cast<double>(run.index_set.size());
        for (std::size_t j = 0; j < 8; ++j) {
            if (run.theta[j] != run.theta_prime[j]) {
                ++off;
                off_agree += run.bob[j] == run.x[j] ? 1 : 0;
            }
        }
    }
    CHECK(all_correct);
    const double mean = size_sum / 10000.0;
    CHECK(std::abs(mean - 4.0) <= 3.0 * std::sqrt(2.0 / 10000.0));
    CHECK(within_band(off_agree, off, 0.5));
}

TEST_CASE("honest Bob's index set is uniform", "[simulator][honest]") {
    for (std::uint64_t n = 1; n <= 4; ++n) {
        const auto d = honest_bob_uniformity(n);
        CHECK(d.uniform_for_every_basis);
        REQUIRE(d.probabilities.size() == (std::size_t{1} << n));
        for (double v : d.probabilities) {
            CHECK(v == std::ldexp(1.0, -static_cast<int>(n)));
        }
    }
    CHECK_THROWS_AS(honest_bob_uniformity(5), ValidationError);
}
