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

#include "wse/simulator.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "wse/alpha_min.hpp"
#include "wse/bounds.hpp"
#include "wse/error.hpp"
#include "wse/rng.hpp"

namespace wse {

bool RoundRecord::test_won() const {
    require(q == 1 && t.has_value() && y.has_value(), "RoundRecord: not a test round");
    return (x ^ *y) == (theta & *t);
}

bool RoundRecord::guess_correct() const {
    require(q == 0 && guess.has_value(), "RoundRecord: not a live round");
    return *guess == x;
}

std::string Transcript::f_chsh() const {
    if (r_n == 0) {
        return "-";
    }
    return std::to_string(s_n) + "/" + std::to_string(r_n);
}

double Transcript::f_chsh_value() const {
    if (r_n == 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return static_cast<double>(s_n) / static_cast<double>(r_n);
}

bool Transcript::counters_consistent() const {
    std::uint64_t r = 0;
    std::uint64_t s = 0;
    bool h = true;
    for (const auto &rec : rounds) {
        const bool is_test = rec.q == 1;
        if (is_test != (rec.t.has_value() && rec.y.has_value()) ||
            is_test == (rec.k.has_value() || rec.guess.has_value())) {
            return false;
        }
        if (is_test) {
            ++r;
            s += rec.test_won() ? 1 : 0;
        } else if (!rec.guess_correct()) {
            h = false;
        }
    }
    const bool pass = gamma.passes(s, r);
    return r == r_n && s == s_n && pass == passed && h == h_n && failed == (pass && h) && no_test_rounds == (r == 0);
}

QuantumRoundModel::QuantumRoundModel(DeviceSetup setup, Observable live, std::vector<std::array<unsigned, 2>> guess_table)
    : setup_(std::make_shared<const DeviceSetup>(std::move(setup))),
      live_(std::make_shared<const Observable>(std::move(live))), guess_table_(std::move(guess_table)) {
    require(live_->dim() == setup_->dim_b(), "QuantumRoundModel: live observable must act on Bob's system");
    require(guess_table_.size() == 2, "QuantumRoundModel: guess table needs one row per live outcome");
    for (const auto &row : guess_table_) {
        require(row[0] <= 1 && row[1] <= 1, "QuantumRoundModel: guesses must be bits");
    }
    const auto &rho = setup_->rho_ab();
    const auto prob = [&](const HermitianOperator &ea, const HermitianOperator &eb) {
        const double v = expectation(tensor(ea, eb), rho);
        require(v >= -1e-12, "QuantumRoundModel: negative probability");
        return std::max(0.0, v);
    };
    for (unsigned th = 0; th < 2; ++th) {
        live_joint_[th].assign(4, 0.0);
        for (unsigned x = 0; x < 2; ++x) {
            const HermitianOperator ea = setup_->a(th).effect(x);
            for (unsigned k = 0; k < 2; ++k) {
                live_joint_[th][x * 2 + k] = prob(ea, live_->effect(k));
            }
            for (unsigned t = 0; t < 2; ++t) {
                for (unsigned y = 0; y < 2; ++y) {
                    test_joint_[th * 2 + t][x * 2 + y] = prob(ea, setup_->b(t).effect(y));
                }
            }
        }
    }
}

RoundLaw QuantumRoundModel::law() const {
    RoundLaw law;
    for (unsigned th = 0; th < 2; ++th) {
        for (unsigned x = 0; x < 2; ++x) {
            for (unsigned k = 0; k < 2; ++k) {
                if (guess_table_[k][th] == x) {
                    law.p_live_correct += 0.5 * live_joint_[th][x * 2 + k];
                }
            }
            for (unsigned t = 0; t < 2; ++t) {
                for (unsigned y = 0; y < 2; ++y) {
                    if ((x ^ y) == (th & t)) {
                        law.p_test_win += 0.25 * test_joint_[th * 2 + t][x * 2 + y];
                    }
                }
            }
        }
    }
    return law;
}

namespace {

void check_law(const RoundLaw &law, bool claims_admissible) {
    require(law.p_live_correct >= 0.0 && law.p_live_correct <= 1.0 && law.p_test_win >= 0.0 && law.p_test_win <= 1.0,
            "attack strategy: round probabilities must lie in [0, 1]");
    require(!claims_admissible || is_admissible(law.p_live_correct, law.p_test_win, 1e-12),
            "attack strategy: claims admissibility but lies above the trade-off curve");
}

std::size_t sample_index(SplitMix64 &rng, const double *weights, std::size_t count) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        acc += weights[i];
        if (u < acc) {
            return i;
        }
    }
    // Rounding left u above the total; take the last outcome with weight.
    for (std::size_t i = count; i-- > 0;) {
        if (weights[i] > 0.0) {
            return i;
        }
    }
    return count - 1;
}

struct Outcome {
    std::uint64_t r = 0;
    std::uint64_t s = 0;
    bool h = true;
};

using RoundSink = std::function<void(const RoundRecord &)>;

Outcome simulate(const TestParams &params, const AttackStrategy &strategy, SplitMix64 &rng, const RoundSink &sink) {
    Outcome out;
    Memory memory = 0;
    for (std::uint64_t j = 0; j < params.rounds; ++j) {
        const RoundModel model = strategy.next_round(j, memory);
        RoundRecord rec;
        rec.q = rng.bernoulli(params.q) ? 1 : 0;
        rec.theta = rng.bit();
        if (const auto *law = std::get_if<RoundLaw>(&model)) {
            check_law(*law, strategy.claims_admissible());
            if (rec.q == 1) {
                rec.t = rng.bit();
                rec.x = rng.bit();
                const bool win = rng.bernoulli(law->p_test_win);
                rec.y = rec.x ^ (rec.theta & *rec.t) ^ (win ? 0U : 1U);
            } else {
                rec.x = rng.bit();
                const bool correct = rng.bernoulli(law->p_live_correct);
                rec.guess = correct ? rec.x : 1U - rec.x;
                rec.k = *rec.guess;
            }
        } else {
            const auto &qm = std::get<QuantumRoundModel>(model);
            if (rec.q == 1) {
                rec.t = rng.bit();
                const std::size_t idx = sample_index(rng, qm.test_joint()[rec.theta * 2 + *rec.t].data(), 4);
                rec.x = static_cast<unsigned>(idx / 2);
                rec.y = static_cast<unsigned>(idx % 2);
            } else {
                const auto &joint = qm.live_joint()[rec.theta];
                const std::size_t idx = sample_index(rng, joint.data(), joint.size());
                rec.x = static_cast<unsigned>(idx / 2);
                rec.k = idx % 2;
                rec.guess = qm.guess_table()[*rec.k][rec.theta];
            }
        }
        if (rec.q == 1) {
            ++out.r;
            out.s += rec.test_won() ? 1 : 0;
        } else if (!rec.guess_correct()) {
            out.h = false;
        }
        strategy.observe(rec, memory);
        if (sink) {
            sink(rec);
        }
    }
    return out;
}

} // namespace

FixedLawStrategy::FixedLawStrategy(RoundLaw law, bool claims_admissible, std::string name)
    : law_(law), claims_(claims_admissible), name_(std::move(name)) {
    check_law(law_, claims_);
}

std::unique_ptr<AttackStrategy> curve_strategy(double t) {
    const TradeoffPoint p = tradeoff_point(t);
    return std::make_unique<FixedLawStrategy>(RoundLaw{p.p_live, p.p_test}, true, "curve");
}

std::unique_ptr<AttackStrategy> classical_endpoint_strategy() {
    return std::make_unique<FixedLawStrategy>(RoundLaw{1.0, 0.75}, true, "classical");
}

std::unique_ptr<AttackStrategy> optimal_curve_strategy(double q, double gamma) {
    const AlphaResult a = optimal_decay_rate(q, gamma);
    const TradeoffPoint p = tradeoff_point(a.t_star);
    return std::make_unique<FixedLawStrategy>(RoundLaw{p.p_live, p.p_test}, true, "optimal");
}

QuantumStrategy::QuantumStrategy(QuantumRoundModel model, std::string name)
    : model_(std::move(model)), name_(std::move(name)) {}

QuantumRoundModel bisector_model(double theta) {
    return QuantumRoundModel(saturating_setup(theta), bisector_observable(theta), {{{0, 0}}, {{1, 1}}});
}

Transcript run_sequential_attack(const TestParams &params, const AttackStrategy &strategy, SplitMix64 &rng) {
    params.validate();
    Transcript tr;
    tr.gamma = params.gamma;
    tr.rounds.reserve(params.rounds);
    const Outcome out = simulate(params, strategy, rng, [&](const RoundRecord &rec) { tr.rounds.push_back(rec); });
    tr.r_n = out.r;
    tr.s_n = out.s;
    tr.h_n = out.h;
    tr.passed = params.gamma.passes(out.s, out.r);
    tr.failed = tr.passed && tr.h_n;
    tr.no_test_rounds = out.r == 0;
    return tr;
}

Transcript run_sequential_attack(const TestParams &params, const AttackStrategy &strategy, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return run_sequential_attack(params, strategy, rng);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    require(trials >= 1 && successes <= trials, "wilson_interval: need 0 <= successes <= trials, trials >= 1");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MonteCarloReport monte_carlo_failure(const TestParams &params, const AttackStrategy &strategy, std::uint64_t trials,
                                     std::uint64_t seed, unsigned workers) {
    params.validate();
    require(trials >= 1, "monte_carlo_failure: trials must be >= 1");
    MonteCarloReport rep;
    rep.strategy = strategy.name();
    rep.params = params;
    rep.seed = seed;
    rep.trials = trials;
    rep.claims_admissible = strategy.claims_admissible();
    rep.law = strategy.stationary_law();
    rep.law_admissible = rep.law && is_admissible(rep.law->p_live_correct, rep.law->p_test_win, 1e-12);

    std::vector<unsigned char> outcome(trials, 0);
    parallel_for(trials, workers == 0 ? worker_count() : workers, [&](std::size_t i) {
        SplitMix64 rng = SplitMix64::stream(seed, i);
        const Outcome o = simulate(params, strategy, rng, {});
        const bool pass = params.gamma.passes(o.s, o.r);
        outcome[i] = static_cast<unsigned char>((pass ? 1 : 0) | (o.h ? 2 : 0) | (o.r == 0 ? 4 : 0));
    });
    for (auto o : outcome) {
        rep.passes += (o & 1) ? 1 : 0;
        rep.failures += (o & 3) == 3 ? 1 : 0;
        rep.no_test_trials += (o & 4) ? 1 : 0;
    }

    const double n = static_cast<double>(trials);
    rep.p_hat = static_cast<double>(rep.failures) / n;
    const Interval ci = wilson_interval(rep.failures, trials);
    rep.ci_low = ci.low;
    rep.ci_high = ci.high;
    rep.p_pass_hat = static_cast<double>(rep.passes) / n;
    rep.conditional_rate = rep.passes > 0 ? static_cast<double>(rep.failures) / static_cast<double>(rep.passes) : 0.0;
    const AlphaResult a = optimal_decay_rate(params.q, params.gamma.value());
    rep.alpha_min = a.alpha_min;
    rep.k_star = a.k_star;
    rep.bound = failure_bound(params);
    rep.bound_violated = rep.ci_low > rep.bound;
    return rep;
}

RecursionAudit recursion_audit(const TestParams &params, const AttackStrategy &strategy, std::uint64_t trials,
                               std::uint64_t seed) {
    params.validate();
    require(trials >= 1, "recursion_audit: trials must be >= 1");
    const double gamma = params.gamma.value();
    const std::uint64_t n = params.rounds;
    const AlphaResult a = optimal_decay_rate(params.q, gamma);

    // Offset keeps grid points off the lattice of attainable margins.
    constexpr double kOffset = 1.4e-9;
    std::vector<double> grid;
    for (double x : {-2.0, -1.0, -0.5, -0.2, 0.0, 0.1, 0.2, 0.5, 1.0}) {
        grid.push_back(x + kOffset);
    }
    const double up = 1.0 - gamma;
    const double down = gamma;
    // Each audited x needs its three shifted points at the previous round.
    std::vector<double> points;
    for (double x : grid) {
        for (double p : {x, x - up, x + down}) {
            points.push_back(p);
        }
    }
    const std::size_t np = points.size();

    // count[l][i] = #trials with X_l >= points[i] and H_l.
    std::vector<std::vector<std::uint64_t>> count(n + 1, std::vector<std::uint64_t>(np, 0));
    std::uint64_t base = 0;
    std::uint64_t outside = 0;
    std::uint64_t live = 0, live_ok = 0, tests = 0, test_wins = 0;

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        SplitMix64 rng = SplitMix64::stream(seed, trial);
        std::uint64_t r = 0, s = 0;
        bool h = true;
        const auto tally = [&](std::uint64_t l) {
            const double margin = static_cast<double>(s) - gamma * static_cast<double>(r);
            if (!h) {
                return;
            }
            for (std::size_t i = 0; i < np; ++i) {
                if (margin >= points[i]) {
                    ++count[l][i];
                }
            }
            if (margin > up * static_cast<double>(l) + 1e-9) {
                ++outside;
            }
        };
        base += (h && s == 0 && r == 0) ? 1 : 0;
        tally(0);
        std::uint64_t l = 0;
        simulate(params, strategy, rng, [&](const RoundRecord &rec) {
            if (rec.q == 1) {
                ++tests;
                ++r;
                if (rec.test_won()) {
                    ++test_wins;
                    ++s;
                }
            } else {
                ++live;
                if (rec.guess_correct()) {
                    ++live_ok;
                } else {
                    h = false;
                }
            }
            tally(++l);
        });
    }

    RecursionAudit audit;
    audit.trials = trials;
    audit.k = a.k_star;
    audit.alpha = a.alpha_min;
    const double total_rounds = static_cast<double>(trials * n);
    audit.q_hat = n > 0 ? static_cast<double>(tests) / total_rounds : 0.0;
    audit.p_live_hat = live > 0 ? static_cast<double>(live_ok) / static_cast<double>(live) : 0.0;
    audit.p_test_hat = tests > 0 ? static_cast<double>(test_wins) / static_cast<double>(tests) : 0.0;
    audit.base_case_ok = base == trials;
    audit.support_ok = outside == 0;
    audit.identity_ok = true;
    audit.ansatz_ok = true;

    const double nt = static_cast<double>(trials);
    const auto freq = [&](std::uint64_t l, std::size_t i) { return static_cast<double>(count[l][i]) / nt; };
    const auto sd = [&](double p) { return std::sqrt(std::max(p * (1.0 - p), 1.0 / nt) / nt); };
    const auto sd_rate = [&](double p, std::uint64_t m) {
        return m > 0 ? std::sqrt(std::max(p * (1.0 - p), 1.0 / static_cast<double>(m)) / static_cast<double>(m)) : 0.0;
    };
    const double w_live = 1.0 - audit.q_hat;
    const double w_win = audit.q_hat * audit.p_test_hat;
    const double w_loss = audit.q_hat * (1.0 - audit.p_test_hat);
    const double sd_q = n > 0 ? sd_rate(audit.q_hat, trials * n) : 0.0;
    const double sd_pl = sd_rate(audit.p_live_hat, live);
    const double sd_pt = sd_rate(audit.p_test_hat, tests);

    for (std::uint64_t l = 0; l <= n; ++l) {
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const std::size_t i = 3 * g;
            AuditRow row;
            row.round = l;
            row.x = grid[g];
            row.tail = freq(l, i);
            row.ansatz = std::pow(a.alpha_min, static_cast<double>(l)) * std::exp(-a.k_star * grid[g]);
            row.tail_sigma = sd(row.tail);
            row.ansatz_ok = row.tail <= row.ansatz + 3.0 * row.tail_sigma;
            if (l < n) {
                const double f0 = freq(l, i);
                const double f_win = freq(l, i + 1);
                const double f_loss = freq(l, i + 2);
                row.lhs = freq(l + 1, i);
                row.rhs = w_live * audit.p_live_hat * f0 + w_win * f_win + w_loss * f_loss;
                // Triangle-inequality bound on the spread of lhs - rhs.
                row.sigma = sd(row.lhs) + w_live * audit.p_live_hat * sd(f0) + w_win * sd(f_win) + w_loss * sd(f_loss) +
                            sd_q * (f0 + f_win + f_loss) + sd_pl * f0 + sd_pt * (f_win + f_loss);
                row.identity_ok = std::abs(row.lhs - row.rhs) <= 3.0 * row.sigma;
            } else {
                row.identity_ok = true;
            }
            audit.identity_ok = audit.identity_ok && row.identity_ok;
            audit.ansatz_ok = audit.ansatz_ok && row.ansatz_ok;
            audit.rows.push_back(row);
        }
    }
    return audit;
}

namespace {

// Pr[x, y] for Alice in basis theta and Bob in basis theta' on |Phi+>.
std::array<double, 4> honest_joint(unsigned theta, unsigned theta_prime) {
    static const std::array<Observable, 2> basis{Observable(pauli_z()), Observable(pauli_x())};
    static const DensityMatrix rho = phi_plus();
    std::array<double, 4> out{};
    for (unsigned x = 0; x < 2; ++x) {
        for (unsigned y = 0; y < 2; ++y) {
            out[x * 2 + y] =
                std::max(0.0, expectation(tensor(basis[theta].effect(x), basis[theta_prime].effect(y)), rho));
        }
    }
    return out;
}

} // namespace

HonestRun run_honest(const std::vector<unsigned> &theta, const std::vector<unsigned> &theta_prime, std::uint64_t seed) {
    require(!theta.empty() && theta.size() == theta_prime.size(), "run_honest: need equal-length basis strings");
    std::array<std::array<double, 4>, 4> joint{};
    for (unsigned a = 0; a < 2; ++a) {
        for (unsigned b = 0; b < 2; ++b) {
            joint[a * 2 + b] = honest_joint(a, b);
        }
    }
    SplitMix64 rng(seed);
    HonestRun run;
    run.theta = theta;
    run.theta_prime = theta_prime;
    run.correct = true;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        require(theta[j] <= 1 && theta_prime[j] <= 1, "run_honest: bases must be bits");
        const std::size_t idx = sample_index(rng, joint[theta[j] * 2 + theta_prime[j]].data(), 4);
        run.x.push_back(static_cast<unsigned>(idx / 2));
        run.bob.push_back(static_cast<unsigned>(idx % 2));
        if (theta[j] == theta_prime[j]) {
            run.index_set.push_back(j);
            run.x_on_index_set.push_back(run.x.back());
            run.correct = run.correct && run.bob.back() == run.x.back();
        }
    }
    return run;
}

HonestRun run_honest(std::uint64_t n, std::uint64_t seed) {
    require(n >= 1, "run_honest: n must be >= 1");
    SplitMix64 rng = SplitMix64::stream(seed, 0);
    std::vector<unsigned> theta(n), theta_prime(n);
    for (std::uint64_t j = 0; j < n; ++j) {
        theta[j] = rng.bit();
        theta_prime[j] = rng.bit();
    }
    return run_honest(theta, theta_prime, SplitMix64::mix(seed));
}

IndexSetDistribution honest_bob_uniformity(std::uint64_t n) {
    require(n >= 1 && n <= 4, "honest_bob_uniformity: n must lie in [1, 4]");
    const std::uint64_t m = std::uint64_t{1} << n;
    IndexSetDistribution out;
    out.n = n;
    out.probabilities.assign(m, 0.0);
    out.uniform_for_every_basis = true;
    for (std::uint64_t theta = 0; theta < m; ++theta) {
        std::vector<std::uint64_t> counts(m, 0);
        for (std::uint64_t theta_prime = 0; theta_prime < m; ++theta_prime) {
            // Bit j of the mask is set iff the bases agree in round j.
            const std::uint64_t mask = ~(theta ^ theta_prime) & (m - 1);
            ++counts[mask];
        }
        for (std::uint64_t s = 0; s < m; ++s) {
            out.uniform_for_every_basis = out.uniform_for_every_basis && counts[s] == 1;
            out.probabilities[s] += static_cast<double>(counts[s]) / static_cast<double>(m * m);
        }
    }
    return out;
}

} // namespace wse
