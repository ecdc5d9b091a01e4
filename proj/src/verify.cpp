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

#include "wse/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wse/alpha_min.hpp"
#include "wse/bounds.hpp"
#include "wse/guessing.hpp"
#include "wse/simulator.hpp"

namespace wse {

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

CheckResult check(std::string name, bool ok, std::string detail) { return {std::move(name), ok, std::move(detail)}; }

CheckResult exact_value(std::string name, double got, double want) {
    return check(std::move(name), got == want, "value=" + fmt(got));
}

void bounds_checks(std::vector<CheckResult> &out) {
    const double h0 = entropy_rate_from_anticommutator(0.0);
    out.push_back(check("bounds.h0=0.2284", std::abs(h0 - 0.2284) <= 1e-4, "value=" + fmt(h0)));

    const double f2 = entropy_rate_from_chsh(2.0);
    const double fmax = entropy_rate_from_chsh(kTsirelsonBound);
    out.push_back(check("bounds.f_endpoints", f2 == 0.0 && fmax == h0, "f(2)=" + fmt(f2) + " f(max)=" + fmt(fmax)));

    bool increasing = true;
    double prev = f2;
    for (int i = 1; i <= 200; ++i) {
        const double beta = 2.0 + (kTsirelsonBound - 2.0) * i / 200.0;
        const double f = entropy_rate_from_chsh(beta);
        increasing = increasing && f > prev;
        prev = f;
    }
    out.push_back(check("bounds.f_increasing", increasing, "200 points"));
}

void chsh_checks(std::vector<CheckResult> &out, std::uint64_t seed) {
    const double ideal = chsh_value(ideal_setup());
    out.push_back(check("chsh.ideal=2sqrt2", std::abs(ideal - kTsirelsonBound) <= 1e-10, "value=" + fmt(ideal)));

    SplitMix64 rng = SplitMix64::stream(seed, 1);
    double worst = 1e300;
    for (int i = 0; i < 1000; ++i) {
        worst = std::min(worst, verify_beta_eps_bound(random_qubit_setup(rng)).slack);
    }
    out.push_back(check("chsh.random_slack", worst >= -1e-9, "min_slack=" + fmt(worst)));

    double widest = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double theta = std::numbers::pi / 2.0 * i / 50.0;
        widest = std::max(widest, verify_beta_eps_bound(saturating_setup(theta)).slack);
    }
    out.push_back(check("chsh.saturation", widest <= 1e-6, "max_slack=" + fmt(widest)));
}

void guessing_checks(std::vector<CheckResult> &out, std::uint64_t seed) {
    SplitMix64 rng = SplitMix64::stream(seed, 2);
    double worst = 1e300;
    for (int i = 0; i < 200; ++i) {
        const DensityMatrix rho = random_state(rng, 4);
        const Observable a0 = random_qubit_observable(rng);
        const Observable a1 = random_qubit_observable(rng);
        const Observable bob = random_qubit_observable(rng, false);
        const double eps = absolute_effective_anticommutator(a0, a1, partial_trace(rho, 2, 2, Subsystem::A));
        const double p = pguess_postmeas_classical(born_rule_table(rho, 2, a0, a1, binary_measurement(bob))).p_guess;
        worst = std::min(worst, postmeasurement_guess_bound(eps) - p);
    }
    out.push_back(check("guessing.postmeas_bound", worst >= -1e-9, "min_gap=" + fmt(worst)));

    double widest = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double theta = std::numbers::pi / 2.0 * i / 20.0;
        const DeviceSetup s = saturating_setup(theta);
        const double eps = absolute_effective_anticommutator(s.a(0), s.a(1), s.rho_a());
        const double p = pguess_postmeas_classical(
                             born_rule_table(s.rho_ab(), 2, s.a(0), s.a(1), binary_measurement(bisector_observable(theta))))
                             .p_guess;
        widest = std::max(widest, std::abs(postmeasurement_guess_bound(eps) - p));
    }
    out.push_back(check("guessing.bisector_saturation", widest <= 1e-6, "max_gap=" + fmt(widest)));

    const auto ex = anticommutator_counterexample();
    out.push_back(exact_value("appendixA.eps_eff=0", ex.eps_eff, 0.0));
    out.push_back(exact_value("appendixA.eps_plus=1", ex.eps_plus, 1.0));
    out.push_back(exact_value("appendixA.pguess_KTheta=1", pguess_postmeas_classical(ex.table).p_guess, 1.0));
    const std::size_t x[] = {0};
    const std::size_t th[] = {1};
    out.push_back(exact_value("appendixA.pguess_Theta=3/4", pguess_classical(ex.table, x, th).p_guess, 0.75));

    const JointDistribution c = sequential_counterexample_distribution();
    const std::size_t both[] = {1, 2};
    const std::size_t basis[] = {0};
    out.push_back(exact_value("appendixC.general=1/2", pguess_classical(c, both, basis).p_guess, 0.5));
    // Round one carries an independent uniform basis bit as its advice.
    const JointDistribution c1 = JointDistribution::product(JointDistribution::uniform({2}, {"theta1"}), c);
    const std::size_t xs[] = {2, 3};
    const std::size_t ys[] = {0, 1};
    out.push_back(exact_value("appendixC.sequential=3/8", pguess_sequential(c1, xs, ys).p_guess, 0.375));
    const ConditioningReport cr = conditioning_identity_check(c1, xs, ys);
    out.push_back(check("appendixC.conditioning", cr.holds && cr.prefix_success == 0.5 &&
                                                      cr.last_round_conditional == 0.75,
                        "Pr[S]=" + fmt(cr.prefix_success) + " conditional=" + fmt(cr.last_round_conditional)));
}

void alpha_checks(std::vector<CheckResult> &out) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            const double q = i / 19.0;
            const double gamma = 0.75 + 0.25 * j / 19.0;
            worst = std::max(worst, std::abs(decay_rate(q, gamma, 0.0) - 1.0));
        }
    }
    out.push_back(check("alpha.g0=1", worst <= 1e-12, "max_dev=" + fmt(worst)));

    double edge = 0.0;
    for (double q : {0.0, 0.3, 0.7, 1.0}) {
        edge = std::max(edge, std::abs(optimal_decay_rate(q, 0.75).alpha_min - 1.0));
    }
    for (double gamma : {0.75, 0.8, 0.9, 1.0}) {
        edge = std::max(edge, std::abs(optimal_decay_rate(0.0, gamma).alpha_min - 1.0));
    }
    out.push_back(check("alpha.edges=1", edge <= 1e-9, "max_dev=" + fmt(edge)));

    double highest = 0.0;
    for (int i = 1; i <= 9; ++i) {
        for (int j = 76; j <= 99; ++j) {
            highest = std::max(highest, optimal_decay_rate(i / 10.0, j / 100.0).alpha_min);
        }
    }
    out.push_back(check("alpha.security_region", highest < 1.0 - 1e-6, "max_alpha=" + fmt(highest)));

    double taylor = 0.0;
    for (double q : {0.0, 0.25, 0.5, 0.9}) {
        for (double gamma : {0.75, 0.85, 0.9, 1.0}) {
            taylor = std::max(taylor, std::abs(decay_slope_at_zero(q, gamma) - decay_slope_closed_form(q, gamma)));
        }
    }
    out.push_back(check("alpha.taylor", taylor <= 1e-4, "max_dev=" + fmt(taylor)));
}

void honest_checks(std::vector<CheckResult> &out, std::uint64_t seed) {
    bool uniform = true;
    for (std::uint64_t n = 1; n <= 4; ++n) {
        const auto d = honest_bob_uniformity(n);
        uniform = uniform && d.uniform_for_every_basis;
        for (double p : d.probabilities) {
            uniform = uniform && p == std::ldexp(1.0, -static_cast<int>(n));
        }
    }
    out.push_back(check("honest.uniformity", uniform, "n<=4"));

    bool correct = true;
    for (std::uint64_t i = 0; i < 200; ++i) {
        correct = correct && run_honest(16, SplitMix64::mix(seed + i)).correct;
    }
    out.push_back(check("honest.correctness", correct, "200 runs"));
}

} // namespace

PassComparator exact_comparator() {
    return [](std::uint64_t s, std::uint64_t r, const Threshold &gamma) { return gamma.passes(s, r); };
}

CheckResult gamma_tie_check(const PassComparator &comparator, std::uint64_t max_tests) {
    std::uint64_t mismatches = 0;
    std::uint64_t ties = 0;
    std::string first;
    for (const char *g : {"3/4", "0.76", "0.8", "0.85", "0.9", "0.95", "0.99", "1", "7/9"}) {
        const Threshold gamma = Threshold::parse(g);
        for (std::uint64_t r = 0; r <= max_tests; ++r) {
            for (std::uint64_t s = 0; s <= r; ++s) {
                const std::uint64_t lhs = s * gamma.denominator();
                const std::uint64_t rhs = gamma.numerator() * r;
                ties += lhs == rhs ? 1 : 0;
                if (comparator(s, r, gamma) != (lhs >= rhs)) {
                    if (mismatches++ == 0) {
                        first = " first: S=" + std::to_string(s) + " R=" + std::to_string(r) + " gamma=" + g;
                    }
                }
            }
        }
    }
    return check("threshold.gamma_tie", mismatches == 0,
                 "ties=" + std::to_string(ties) + " mismatches=" + std::to_string(mismatches) + first);
}

std::vector<CheckResult> run_verification(const VerifyOptions &options) {
    std::vector<CheckResult> out;
    bounds_checks(out);
    chsh_checks(out, options.seed);
    guessing_checks(out, options.seed);
    alpha_checks(out);
    honest_checks(out, options.seed);
    out.push_back(gamma_tie_check(options.comparator));
    if (options.setup) {
        const ChshReport rep = verify_beta_eps_bound(*options.setup);
        out.push_back(check("setup.chsh_bound", rep.slack >= -1e-9,
                            "beta=" + fmt(rep.beta) + " eps_plus=" + fmt(rep.eps_plus) + " slack=" + fmt(rep.slack)));
    }
    return out;
}

} // namespace wse
