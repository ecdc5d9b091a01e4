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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "wse/alpha_min.hpp"
#include "wse/bounds.hpp"
#include "wse/chsh.hpp"
#include "wse/cli.hpp"
#include "wse/guessing.hpp"
#include "wse/simulator.hpp"

using namespace wse;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

using Vars = std::vector<std::size_t>;

Outcome trusted_rate_anchor() {
    const double h0 = entropy_rate_from_anticommutator(0.0);
    return {std::abs(h0 - 0.2284) <= 1e-4, "h(0)=" + fmt(h0)};
}

Outcome rate_curve() {
    const double f2 = entropy_rate_from_chsh(2.0);
    bool increasing = true;
    double prev = f2;
    for (int i = 1; i <= 200; ++i) {
        const double beta = 2.0 + (kTsirelsonBound - 2.0) * i / 200.0;
        const double f = entropy_rate_from_chsh(beta);
        increasing = increasing && f > prev;
        prev = f;
    }
    const double top = entropy_rate_from_chsh(kTsirelsonBound);
    const double h0 = entropy_rate_from_anticommutator(0.0);
    return {f2 == 0.0 && increasing && std::abs(top - h0) <= 1e-12,
            "f(2)=" + fmt(f2) + " increasing=" + (increasing ? "yes" : "no") + " f(2sqrt2)-h(0)=" + fmt(top - h0)};
}

Outcome chsh_bound_validity() {
    SplitMix64 rng(20240601);
    double min_slack = 1e9;
    for (int i = 0; i < 1000; ++i) {
        min_slack = std::min(min_slack, verify_beta_eps_bound(random_qubit_setup(rng)).slack);
    }
    double max_sat = -1e9;
    for (int i = 1; i <= 50; ++i) {
        max_sat = std::max(max_sat, verify_beta_eps_bound(saturating_setup((std::numbers::pi / 2) * i / 50.0)).slack);
    }
    return {min_slack >= -1e-9 && max_sat <= 1e-6,
            "random min slack=" + fmt(min_slack) + " saturating max slack=" + fmt(max_sat)};
}

Outcome postmeasurement_bound() {
    SplitMix64 rng(20240602);
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
        min_gap = std::min(min_gap, postmeasurement_guess_bound(eps) - pguess_postmeas_classical(table).p_guess);
    }
    double worst_sat = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double theta = (std::numbers::pi / 2) * i / 50.0;
        const auto s = saturating_setup(theta);
        const auto table = born_rule_table(s.rho_ab(), 2, s.a(0), s.a(1), binary_measurement(bisector_observable(theta)));
        const double eps = absolute_effective_anticommutator(s.a(0), s.a(1), s.rho_a());
        worst_sat =
            std::max(worst_sat, std::abs(pguess_postmeas_classical(table).p_guess - postmeasurement_guess_bound(eps)));
    }
    return {min_gap >= -1e-9 && worst_sat <= 1e-6,
            "random min gap=" + fmt(min_gap) + " bisector max deviation=" + fmt(worst_sat)};
}

Outcome anticommutator_example() {
    const auto ex = anticommutator_counterexample();
    const double with_k = pguess_postmeas_classical(ex.table).p_guess;
    const double without_k = pguess_classical(ex.table, Vars{0}, Vars{1}).p_guess;
    const double enum_with_k = oracle::pguess_enumerate(ex.table, Vars{0}, Vars{1, 2});
    const double enum_without_k = oracle::pguess_enumerate(ex.table, Vars{0}, Vars{1});
    const bool ok = ex.eps_eff == 0.0 && ex.eps_plus == 1.0 && with_k == 1.0 && without_k == 0.75 &&
                    enum_with_k == 1.0 && enum_without_k == 0.75;
    return {ok, "eps_eff=" + fmt(ex.eps_eff) + " eps_plus=" + fmt(ex.eps_plus) + " p(X|K,Theta)=" + fmt(with_k) +
                    " p(X|Theta)=" + fmt(without_k)};
}

Outcome sequential_example() {
    const auto c = JointDistribution::product(JointDistribution::uniform({2}, {"theta1"}),
                                              sequential_counterexample_distribution());
    const Vars xs{2, 3}, ys{0, 1}, basis2{1};
    const double general = oracle::pguess_enumerate(c, xs, basis2);
    const double general_full = oracle::pguess_enumerate(c, xs, ys);
    const double sequential = oracle::pguess_sequential_enumerate(c, xs, ys);
    const double lib_general = pguess_classical(c, xs, basis2).p_guess;
    const double lib_sequential = pguess_sequential(c, xs, ys).p_guess;
    const auto cond = conditioning_identity_check(c, xs, ys);
    const bool ok = general == 0.5 && general_full == 0.5 && sequential == 0.375 && lib_general == 0.5 &&
                    lib_sequential == 0.375 && cond.holds && cond.prefix_success == 0.5 &&
                    cond.last_round_conditional == 0.75 && cond.sequential == cond.prefix_success * cond.last_round_conditional;
    return {ok, "general=" + fmt(general) + " sequential=" + fmt(sequential) + " Pr[S]=" + fmt(cond.prefix_success) +
                    " conditional=" + fmt(cond.last_round_conditional)};
}

Outcome decay_machinery() {
    double g0 = 0.0;
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            g0 = std::max(g0, std::abs(decay_rate(i / 19.0, 0.75 + 0.25 * j / 19.0, 0.0) - 1.0));
        }
    }
    SplitMix64 rng(20240607);
    double closed = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double q = rng.uniform();
        const double gamma = 0.75 + 0.25 * rng.uniform();
        const double k = 5.0 * rng.uniform();
        closed = std::max(closed, std::abs(decay_rate(q, gamma, k) - oracle::grid_max_over_t(q, gamma, k, 10000)));
    }
    double slope = 0.0;
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (double gamma : {0.75, 0.8, 0.85, 0.9, 0.95, 1.0}) {
            slope = std::max(slope, std::abs(decay_slope_at_zero(q, gamma) - (0.75 - gamma) * q));
        }
    }
    double golden = 0.0;
    for (double q : {0.1, 0.5, 0.9}) {
        for (double gamma : {0.76, 0.85, 0.95}) {
            golden = std::max(golden, std::abs(optimal_decay_rate(q, gamma).alpha_min - oracle::alpha_min_grid(q, gamma)));
        }
    }
    return {g0 <= 1e-12 && closed <= 1e-7 && slope <= 1e-4 && golden <= 1e-7,
            "|g(0)-1|=" + fmt(g0) + " closed-vs-grid=" + fmt(closed) + " slope=" + fmt(slope) +
                " golden-vs-grid=" + fmt(golden)};
}

Outcome security_region() {
    double edge = 0.0;
    for (int i = 0; i <= 20; ++i) {
        edge = std::max(edge, std::abs(optimal_decay_rate(0.0, 0.75 + 0.25 * i / 20.0).alpha_min - 1.0));
        edge = std::max(edge, std::abs(optimal_decay_rate(i / 20.0, 0.75).alpha_min - 1.0));
    }
    double highest = 0.0;
    for (int i = 1; i <= 9; ++i) {
        for (int j = 0; j <= 23; ++j) {
            highest = std::max(highest, optimal_decay_rate(i / 10.0, 0.76 + 0.01 * j).alpha_min);
        }
    }
    return {edge <= 1e-9 && highest < 1.0 - 1e-6, "edge deviation=" + fmt(edge) + " interior max=" + fmt(highest)};
}

Outcome monte_carlo() {
    TestParams p;
    p.q = 0.5;
    p.gamma = Threshold::parse("0.85");
    p.rounds = 20;
    bool ok = true;
    std::string detail;
    const auto classical = classical_endpoint_strategy();
    const auto optimal = optimal_curve_strategy(0.5, 0.85);
    for (const AttackStrategy *s : {classical.get(), optimal.get()}) {
        const auto rep = monte_carlo_failure(p, *s, 100000, 20240609);
        const bool counts = rep.failures <= rep.passes &&
                            rep.p_hat == static_cast<double>(rep.failures) / static_cast<double>(rep.trials) &&
                            std::abs(rep.p_pass_hat * rep.conditional_rate - rep.p_hat) <= 1e-15 &&
                            rep.conditional_rate ==
                                static_cast<double>(rep.failures) / static_cast<double>(rep.passes);
        ok = ok && rep.ci_high <= rep.bound && counts;
        detail += s->name() + ": p_hat=" + fmt(rep.p_hat) + " ci_high=" + fmt(rep.ci_high) + " ";
        if (s == optimal.get()) {
            detail += "bound=" + fmt(rep.bound);
        }
    }
    return {ok, detail};
}

Outcome honest_protocol() {
    bool correct = true;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        correct = correct && run_honest(8, seed).correct;
    }
    bool uniform = true;
    for (std::uint64_t n = 1; n <= 4; ++n) {
        const auto d = honest_bob_uniformity(n);
        uniform = uniform && d.uniform_for_every_basis;
        for (double v : d.probabilities) {
            uniform = uniform && v == std::ldexp(1.0, -static_cast<int>(n));
        }
    }
    return {correct && uniform, std::string("agreement on I: ") + (correct ? "100%" : "broken") +
                                    ", index sets uniform: " + (uniform ? "yes" : "no")};
}

Outcome additivity() {
    SplitMix64 rng(20240611);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_table(rng, {1 + rng.below(4), 1 + rng.below(4)});
        const auto b = oracle::random_table(rng, {1 + rng.below(4), 1 + rng.below(4)});
        const auto p = JointDistribution::product(a, b);
        const double joint = pguess_classical(p, Vars{0, 2}, Vars{1, 3}).h_min;
        worst = std::max(worst, std::abs(joint - pguess_classical(a).h_min - pguess_classical(b).h_min));
    }
    return {worst <= 1e-10, "max deviation=" + fmt(worst)};
}

std::string cli_output(const std::vector<std::string> &args, int &code) {
    std::ostringstream out, err;
    code = run_cli(args, out, err);
    return out.str();
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path();
    const auto cfg = dir / "wse_di_acceptance.cfg";
    std::ofstream(cfg) << "trials = 3000\nn = 15\nq = 0.4\ngamma = 0.8\nseed = 77\n";
    const std::vector<std::vector<std::string>> commands{
        {"bounds"},
        {"bounds", "--format", "json"},
        {"tradeoff"},
        {"alpha-min"},
        {"simulate", "--config", cfg.string()},
        {"simulate", "--config", cfg.string(), "--strategy", "quantum", "--format", "csv"},
        {"verify", "--seed", "5"},
    };
    bool ok = true;
    std::size_t bytes = 0;
    for (const auto &args : commands) {
        int c1 = 0, c2 = 0;
        const std::string a = cli_output(args, c1);
        const std::string b = cli_output(args, c2);
        ok = ok && c1 == 0 && c2 == 0 && !a.empty() && a == b;
        bytes += a.size();
    }
    std::filesystem::remove(cfg);
    return {ok, std::to_string(commands.size()) + " commands replayed, " + std::to_string(bytes) + " bytes compared"};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"trusted-rate anchor", trusted_rate_anchor},
        {"rate curve endpoints and monotonicity", rate_curve},
        {"CHSH bound validity and tightness", chsh_bound_validity},
        {"postmeasurement guessing bound and saturation", postmeasurement_bound},
        {"anticommutator counterexample", anticommutator_example},
        {"sequential-guessing counterexample", sequential_example},
        {"decay-rate machinery", decay_machinery},
        {"security region", security_region},
        {"Monte-Carlo failure versus bound", monte_carlo},
        {"honest correctness and index-set uniformity", honest_protocol},
        {"min-entropy additivity", additivity},
        {"CLI determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2zu %s: %s (%.2fs)\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        failures += o.passed ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
