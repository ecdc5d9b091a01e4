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

#include "oracles.hpp"
#include "wse/error.hpp"
#include "wse/guessing.hpp"
#include "wse/json_io.hpp"

using namespace wse;
using Catch::Matchers::WithinAbs;

namespace {

using Vars = std::vector<std::size_t>;

// Independent (Theta1) advice for round one of the two-round counterexample.
JointDistribution two_round_counterexample() {
    return JointDistribution::product(JointDistribution::uniform({2}, {"theta1"}),
                                      sequential_counterexample_distribution());
}

} // namespace

TEST_CASE("joint distributions validate their table", "[guessing]") {
    CHECK_THROWS_AS(JointDistribution({2, 0}, {}), ValidationError);
    CHECK_THROWS_AS(JointDistribution({2}, {0.5}), ValidationError);
    CHECK_THROWS_AS(JointDistribution({2}, {0.6, 0.6}), ValidationError);
    CHECK_THROWS_AS(JointDistribution({2}, {1.5, -0.5}), ValidationError);
    CHECK_THROWS_AS(JointDistribution({2}, {0.5, 0.5}, {"a", "b"}), ValidationError);

    const JointDistribution p({2, 3}, {0.1, 0.2, 0.3, 0.1, 0.2, 0.1});
    CHECK(p.flat_index(Vars{1, 2}) == 5);
    CHECK(p.values_of(4) == Vars{1, 1});
    const auto m = p.marginal(Vars{1});
    CHECK_THAT(m.table()[0], WithinAbs(0.2, 1e-15));
    CHECK_THAT(m.table()[1], WithinAbs(0.4, 1e-15));
    CHECK_THAT(m.table()[2], WithinAbs(0.4, 1e-15));
    const auto swapped = p.marginal(Vars{1, 0});
    CHECK_THAT(swapped.probability(Vars{2, 0}), WithinAbs(p.probability(Vars{0, 2}), 1e-15));
}

TEST_CASE("classical guessing probability", "[guessing]") {
    const auto indep = JointDistribution::uniform({4, 3});
    CHECK_THAT(pguess_classical(indep).p_guess, WithinAbs(0.25, 1e-15));
    CHECK_THAT(pguess_classical(indep).h_min, WithinAbs(2.0, 1e-15));

    const JointDistribution equal({3, 3}, {0.2, 0, 0, 0, 0.5, 0, 0, 0, 0.3});
    CHECK(pguess_classical(equal).p_guess == 1.0);
    CHECK(pguess_classical(equal).h_min == 0.0);

    // One basis bit as advice for one of the two bits.
    const auto c = sequential_counterexample_distribution();
    CHECK(pguess_classical(c, Vars{1}, Vars{0}).p_guess == 0.5);
    CHECK(pguess_classical(c, Vars{1, 2}, Vars{0}).p_guess == 0.5);
    CHECK(pguess_classical(c, Vars{1}, Vars{}).p_guess == 0.5);
}

TEST_CASE("argmax ties pick the lowest index", "[guessing]") {
    const auto u = JointDistribution::uniform({3, 2});
    const auto r = pguess_classical(u);
    for (const auto &[advice, guess] : r.strategy) {
        CHECK(guess == Assignment{0});
    }
    CHECK_THAT(replay_strategy(u, Vars{0}, Vars{1}, r.strategy), WithinAbs(r.p_guess, 1e-15));
}

TEST_CASE("guessing agrees with exhaustive enumeration", "[guessing][oracle]") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = oracle::random_table(rng, {1 + rng.below(3), 1 + rng.below(3), 1 + rng.below(2)});
        const auto r = pguess_classical(p, Vars{0}, Vars{1, 2});
        CHECK_THAT(r.p_guess, WithinAbs(oracle::pguess_enumerate(p, Vars{0}, Vars{1, 2}), 1e-14));
        CHECK_THAT(replay_strategy(p, Vars{0}, Vars{1, 2}, r.strategy), WithinAbs(r.p_guess, 1e-14));

        const double with = pguess_classical(p, Vars{0}, Vars{1}).p_guess;
        const double without = pguess_classical(p, Vars{0}, Vars{}).p_guess;
        CHECK(with >= without - 1e-15);
        CHECK(without >= 1.0 / static_cast<double>(p.alphabet_sizes()[0]) - 1e-15);
    }
    // Independence removes the advantage.
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = oracle::random_table(rng, {3});
        const auto y = oracle::random_table(rng, {2});
        const auto p = JointDistribution::product(x, y);
        CHECK_THAT(pguess_classical(p).p_guess, WithinAbs(pguess_classical(x, Vars{0}, Vars{}).p_guess, 1e-15));
    }
}

TEST_CASE("guessing with postmeasurement information", "[guessing]") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto xy = oracle::random_table(rng, {2, 2});
        const auto k = oracle::random_table(rng, {3});
        const auto p = JointDistribution::product(xy, k);
        CHECK_THAT(pguess_postmeas_classical(p).p_guess, WithinAbs(pguess_classical(xy).p_guess, 1e-14));
    }
    const auto ex = anticommutator_counterexample();
    CHECK(pguess_postmeas_classical(ex.table).p_guess == 1.0);
}

TEST_CASE("the anticommutator counterexample", "[guessing]") {
    const auto ex = anticommutator_counterexample();
    CHECK(ex.eps_eff == 0.0);
    CHECK(ex.eps_plus == 1.0);
    CHECK(pguess_postmeas_classical(ex.table).p_guess == 1.0);
    CHECK(pguess_classical(ex.table, Vars{0}, Vars{1}).p_guess == 0.75);
    // Every entry is dyadic.
    for (double v : ex.table.table()) {
        CHECK(v * 8.0 == std::floor(v * 8.0));
    }
}

TEST_CASE("sequential guessing", "[guessing]") {
    SplitMix64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = oracle::random_table(rng, {3, 2});
        CHECK_THAT(pguess_sequential(p, Vars{0}, Vars{1}).p_guess, WithinAbs(pguess_classical(p).p_guess, 1e-15));
    }

    // Independent rounds multiply.
    for (int trial = 0; trial < 20; ++trial) {
        const auto r1 = oracle::random_table(rng, {2, 2});
        const auto r2 = oracle::random_table(rng, {3, 2});
        const auto p = JointDistribution::product(r1, r2);
        CHECK_THAT(pguess_sequential(p, Vars{0, 2}, Vars{1, 3}).p_guess,
                   WithinAbs(pguess_classical(r1).p_guess * pguess_classical(r2).p_guess, 1e-14));
    }

    const auto c = two_round_counterexample();
    const auto r = pguess_sequential(c, Vars{2, 3}, Vars{0, 1});
    CHECK(r.p_guess == 0.375);
    CHECK(replay_sequential(c, Vars{2, 3}, Vars{0, 1}, r.strategy) == 0.375);
    CHECK(oracle::pguess_sequential_enumerate(c, Vars{2, 3}, Vars{0, 1}) == 0.375);
    CHECK(pguess_classical(c, Vars{2, 3}, Vars{0, 1}).p_guess == 0.5);
    CHECK(oracle::pguess_enumerate(c, Vars{2, 3}, Vars{0, 1}) == 0.5);
}

TEST_CASE("sequential guessing agrees with exhaustive enumeration", "[guessing][oracle]") {
    SplitMix64 rng(44);
    for (int trial = 0; trial < 500; ++trial) {
        // (x1, x2, y1, y2).
        const auto p = oracle::random_table(rng, {2, 1 + rng.below(3), 1 + rng.below(2), 2});
        const double seq = pguess_sequential(p, Vars{0, 1}, Vars{2, 3}).p_guess;
        CHECK_THAT(seq, WithinAbs(oracle::pguess_sequential_enumerate(p, Vars{0, 1}, Vars{2, 3}), 1e-14));
        CHECK(seq <= pguess_classical(p, Vars{0, 1}, Vars{2, 3}).p_guess + 1e-15);
    }
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = oracle::random_table(rng, {2, 2, 2, 2, 2, 2});
        const Vars xs{0, 2, 4};
        const Vars ys{1, 3, 5};
        const auto r = pguess_sequential(p, xs, ys);
        CHECK_THAT(r.p_guess, WithinAbs(oracle::pguess_sequential_enumerate(p, xs, ys), 1e-14));
        CHECK_THAT(replay_sequential(p, xs, ys, r.strategy), WithinAbs(r.p_guess, 1e-14));
    }
}

TEST_CASE("sequential state guard", "[guessing]") {
    const auto big = JointDistribution::uniform(std::vector<std::size_t>(20, 2));
    Vars xs, ys;
    for (std::size_t j = 0; j < 10; ++j) {
        xs.push_back(2 * j);
        ys.push_back(2 * j + 1);
    }
    CHECK_THAT(pguess_sequential(big, xs, ys).p_guess, WithinAbs(std::pow(0.5, 10), 1e-15));
    // One round with 3163 x 3163 histories is just over the limit.
    const auto huge = JointDistribution::uniform({3163, 3163});
    CHECK_THROWS_AS(pguess_sequential(huge, Vars{0}, Vars{1}), ValidationError);
}

TEST_CASE("conditioning identity", "[guessing]") {
    const auto c = two_round_counterexample();
    const auto r = conditioning_identity_check(c, Vars{2, 3}, Vars{0, 1});
    CHECK(r.sequential == 0.375);
    CHECK(r.prefix_success == 0.5);
    CHECK(r.last_round_conditional == 0.75);
    CHECK(r.holds);
    CHECK(r.prefix_optimum == 0.5);

    SplitMix64 rng(45);
    for (int trial = 0; trial < 50; ++trial) {
        const auto r1 = oracle::random_table(rng, {2, 2});
        const auto r2 = oracle::random_table(rng, {2, 2});
        const auto p = JointDistribution::product(r1, r2);
        const auto rep = conditioning_identity_check(p, Vars{0, 2}, Vars{1, 3});
        CHECK(rep.holds);
        CHECK(rep.holds_with_prefix_optimum);
    }
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = oracle::random_table(rng, {2, 2, 2, 2});
        CHECK(conditioning_identity_check(p, Vars{0, 1}, Vars{2, 3}).holds);
    }

    // The unconditional prefix optimum can differ from Pr[S].
    const JointDistribution skew({2, 2}, {0.3, 0.3, 0.0, 0.4});
    const JointDistribution trivial({1, 1}, {1.0});
    const auto p = JointDistribution::product(skew, JointDistribution::product(trivial, trivial));
    const auto rep = conditioning_identity_check(p, Vars{0, 1}, Vars{2, 3});
    CHECK_THAT(rep.sequential, WithinAbs(0.4, 1e-15));
    CHECK_THAT(rep.prefix_optimum, WithinAbs(0.6, 1e-15));
    CHECK(rep.holds);
    CHECK_FALSE(rep.holds_with_prefix_optimum);
}

TEST_CASE("min-entropy is additive on products", "[guessing][property]") {
    SplitMix64 rng(46);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_table(rng, {1 + rng.below(3), 1 + rng.below(3)});
        const auto b = oracle::random_table(rng, {1 + rng.below(3), 1 + rng.below(3)});
        const auto p = JointDistribution::product(a, b);
        const double joint = pguess_classical(p, Vars{0, 2}, Vars{1, 3}).h_min;
        CHECK_THAT(joint, WithinAbs(pguess_classical(a).h_min + pguess_classical(b).h_min, 1e-10));
    }
}

TEST_CASE("Born-rule tables", "[guessing]") {
    const auto s = ideal_setup();
    const auto t = born_rule_table(s.rho_ab(), 2, s.a(0), s.a(1), binary_measurement(s.a(0)));
    // Bob measuring sigma_z on |Phi+> learns x exactly in basis 0.
    CHECK_THAT(t.probability(Vars{0, 0, 0}), WithinAbs(0.25, 1e-15));
    CHECK_THAT(t.probability(Vars{0, 0, 1}), WithinAbs(0.0, 1e-15));
    CHECK_THAT(t.probability(Vars{1, 1, 0}), WithinAbs(0.125, 1e-15));
    CHECK_THAT(pguess_postmeas_classical(t).p_guess, WithinAbs(0.75, 1e-15));
}

TEST_CASE("postmeasurement bound on random classical adversaries", "[guessing][property]") {
    SplitMix64 rng(47);
    double min_gap = 1.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t nk = 2 + rng.below(3);
        std::vector<double> w(nk);
        std::vector<DensityMatrix> states;
        double total = 0.0;
        for (auto &v : w) {
            v = rng.uniform() + 1e-3;
            total += v;
            states.push_back(random_state(rng, 2, 1));
        }
        for (auto &v : w) {
            v /= total;
        }
        const auto rho = classical_quantum_state(w, states);
        const auto a0 = random_qubit_observable(rng);
        const auto a1 = random_qubit_observable(rng);
        const auto table = born_rule_table(rho, 2, a0, a1, computational_basis_measurement(nk));
        const double eps = absolute_effective_anticommutator(a0, a1, partial_trace(rho, 2, nk, Subsystem::A));
        const double gap = postmeasurement_guess_bound(eps) - pguess_postmeas_classical(table).p_guess;
        CHECK(gap >= -1e-9);
        min_gap = std::min(min_gap, gap);
    }
    // Entangled qubit pairs with a random projective Bob measurement.
    for (int trial = 0; trial < 200; ++trial) {
        const auto rho = random_state(rng, 4, 1);
        const auto a0 = random_qubit_observable(rng);
        const auto a1 = random_qubit_observable(rng);
        const auto b = random_qubit_observable(rng, false);
        const auto table = born_rule_table(rho, 2, a0, a1, binary_measurement(b));
        const double eps = absolute_effective_anticommutator(a0, a1, partial_trace(rho, 2, 2, Subsystem::A));
        CHECK(pguess_postmeas_classical(table).p_guess <= postmeasurement_guess_bound(eps) + 1e-9);
    }
    CHECK(min_gap >= -1e-9);
}

TEST_CASE("bisector measurement saturates the postmeasurement bound", "[guessing]") {
    for (int i = 1; i <= 20; ++i) {
        const double theta = (std::numbers::pi / 2) * i / 20.0;
        const auto s = saturating_setup(theta);
        const auto table = born_rule_table(s.rho_ab(), 2, s.a(0), s.a(1), binary_measurement(bisector_observable(theta)));
        const double eps = absolute_effective_anticommutator(s.a(0), s.a(1), s.rho_a());
        CHECK_THAT(pguess_postmeas_classical(table).p_guess, WithinAbs(postmeasurement_guess_bound(eps), 1e-6));
    }
}

TEST_CASE("distributions round-trip through JSON with exact strings", "[guessing][json]") {
    const auto j = Json::parse(R"({"alphabets":[2,2],"probabilities":["3/8","0.125","1/4",0.25]})");
    const auto p = distribution_from_json(j);
    CHECK(p.table()[0] == 0.375);
    CHECK(p.table()[1] == 0.125);
    const auto back = distribution_from_json(distribution_to_json(p));
    CHECK(back.table() == p.table());
    CHECK_THROWS_AS(distribution_from_json(Json::parse(R"({"alphabets":[2],"probabilities":["1/0",1]})")),
                    ValidationError);
    CHECK_THROWS_AS(distribution_from_json(Json::parse(R"({"alphabets":[2],"probabilities":["x",1]})")),
                    ValidationError);
}
