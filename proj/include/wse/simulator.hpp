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

// Round-level simulation of the protocol: honest runs, sequential attacks and
// Monte-Carlo estimates of the failure probability.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wse/chsh.hpp"
#include "wse/params.hpp"

namespace wse {

/// One protocol round. Test fields are set iff q == 1, live fields iff q == 0.
struct RoundRecord {
    unsigned q = 0;
    unsigned theta = 0;
    unsigned x = 0;
    std::optional<unsigned> t;
    std::optional<unsigned> y;
    std::optional<std::size_t> k;
    std::optional<unsigned> guess;

    /// x xor y == theta and t.
    bool test_won() const;
    /// guess == x.
    bool guess_correct() const;

    friend bool operator==(const RoundRecord &, const RoundRecord &) = default;
};

struct Transcript {
    std::vector<RoundRecord> rounds;
    std::uint64_t r_n = 0;
    std::uint64_t s_n = 0;
    Threshold gamma = Threshold::parse("0.85");
    bool passed = false;
    bool h_n = false;
    bool failed = false;
    /// r_n == 0: the threshold check passes vacuously.
    bool no_test_rounds = false;

    /// "s/r", or "-" when r_n == 0.
    std::string f_chsh() const;
    /// s_n / r_n, or NaN when r_n == 0.
    double f_chsh_value() const;
    /// Recomputes every counter from the rounds.
    bool counters_consistent() const;
};

/// Per-round law of a probabilistic attack.
struct RoundLaw {
    double p_live_correct = 0.0;
    double p_test_win = 0.0;
};

/// Born-rule model of one round: the device setup answers test rounds, Bob
/// measures `live` on his half in live rounds and guesses guess_table[k][theta].
class QuantumRoundModel {
  public:
    QuantumRoundModel(DeviceSetup setup, Observable live, std::vector<std::array<unsigned, 2>> guess_table);

    const DeviceSetup &setup() const noexcept { return *setup_; }
    const Observable &live() const noexcept { return *live_; }
    const std::vector<std::array<unsigned, 2>> &guess_table() const noexcept { return guess_table_; }

    /// Pr[x, k | theta] in live rounds, index [theta][x * K + k].
    const std::array<std::vector<double>, 2> &live_joint() const noexcept { return live_joint_; }
    /// Pr[x, y | theta, t], index [theta * 2 + t][x * 2 + y].
    const std::array<std::array<double, 4>, 4> &test_joint() const noexcept { return test_joint_; }

    /// Exact per-round law implied by the Born rule.
    RoundLaw law() const;

  private:
    std::shared_ptr<const DeviceSetup> setup_;
    std::shared_ptr<const Observable> live_;
    std::vector<std::array<unsigned, 2>> guess_table_;
    std::array<std::vector<double>, 2> live_joint_;
    std::array<std::array<double, 4>, 4> test_joint_{};
};

using RoundModel = std::variant<RoundLaw, QuantumRoundModel>;

/// Strategy memory, owned by a single run.
using Memory = std::uint64_t;

/// Bob's sequential attack. Implementations are immutable and shared across
/// worker threads; per-run state lives in Memory.
class AttackStrategy {
  public:
    virtual ~AttackStrategy() = default;
    virtual std::string name() const = 0;
    virtual RoundModel next_round(std::uint64_t round, Memory &memory) const = 0;
    /// Called after every round with the completed record.
    virtual void observe(const RoundRecord &, Memory &) const {}
    /// A claiming strategy must stay on or below the trade-off curve.
    virtual bool claims_admissible() const { return true; }
    /// Set when every round follows the same law.
    virtual std::optional<RoundLaw> stationary_law() const { return std::nullopt; }
};

class FixedLawStrategy : public AttackStrategy {
  public:
    /// Throws on probabilities outside [0, 1], or above the curve while
    /// claiming admissibility.
    FixedLawStrategy(RoundLaw law, bool claims_admissible = true, std::string name = "fixed");
    std::string name() const override { return name_; }
    RoundModel next_round(std::uint64_t, Memory &) const override { return law_; }
    bool claims_admissible() const override { return claims_; }
    std::optional<RoundLaw> stationary_law() const override { return law_; }

  private:
    RoundLaw law_;
    bool claims_;
    std::string name_;
};

/// (p_L(t), p_T(t)) on the trade-off curve.
std::unique_ptr<AttackStrategy> curve_strategy(double t);
/// t = 1: always guesses right, wins tests with 3/4.
std::unique_ptr<AttackStrategy> classical_endpoint_strategy();
/// Curve point t*(k*) of the optimal tilt for (q, gamma).
std::unique_ptr<AttackStrategy> optimal_curve_strategy(double q, double gamma);

class QuantumStrategy : public AttackStrategy {
  public:
    explicit QuantumStrategy(QuantumRoundModel model, std::string name = "quantum");
    std::string name() const override { return name_; }
    RoundModel next_round(std::uint64_t, Memory &) const override { return model_; }
    std::optional<RoundLaw> stationary_law() const override { return model_.law(); }
    const QuantumRoundModel &model() const noexcept { return model_; }

  private:
    QuantumRoundModel model_;
    std::string name_;
};

/// Saturating setup for angle theta with Bob measuring the bisector of
/// Alice's two directions in live rounds and guessing his outcome.
QuantumRoundModel bisector_model(double theta);

Transcript run_sequential_attack(const TestParams &params, const AttackStrategy &strategy, std::uint64_t seed);
/// Same draws as run_sequential_attack from an explicit generator.
Transcript run_sequential_attack(const TestParams &params, const AttackStrategy &strategy, SplitMix64 &rng);

inline constexpr double kWilsonZ99 = 2.5758293035489004;

struct MonteCarloReport {
    std::string strategy;
    TestParams params;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    std::uint64_t passes = 0;
    std::uint64_t no_test_trials = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double bound = 1.0;
    double alpha_min = 1.0;
    double k_star = 0.0;
    double p_pass_hat = 0.0;
    /// failures / passes, 0 when nothing passed.
    double conditional_rate = 0.0;
    bool claims_admissible = true;
    /// Stationary round law, when the strategy has one.
    std::optional<RoundLaw> law;
    /// The law lies on or below the trade-off curve.
    bool law_admissible = false;
    /// ci_low > bound.
    bool bound_violated = false;
};

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Wilson score interval for `successes` out of `trials`.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ99);

/// Trial i draws from SplitMix64::stream(seed, i); counts are reduced in
/// trial order, so the report does not depend on the worker count.
MonteCarloReport monte_carlo_failure(const TestParams &params, const AttackStrategy &strategy, std::uint64_t trials,
                                     std::uint64_t seed, unsigned workers = 0);

struct AuditRow {
    std::uint64_t round = 0;
    double x = 0.0;
    /// Pr[X_{l+1} >= x and H_{l+1}].
    double lhs = 0.0;
    /// Branch-weighted combination of the round-l frequencies.
    double rhs = 0.0;
    double sigma = 0.0;
    bool identity_ok = false;
    /// Pr[X_l >= x and H_l] against alpha^l e^{-k x}.
    double tail = 0.0;
    double ansatz = 0.0;
    double tail_sigma = 0.0;
    bool ansatz_ok = false;
};

struct RecursionAudit {
    std::uint64_t trials = 0;
    double k = 0.0;
    double alpha = 1.0;
    double q_hat = 0.0;
    double p_live_hat = 0.0;
    double p_test_hat = 0.0;
    std::vector<AuditRow> rows;
    /// Pr[X_0 >= 0 and H_0] == 1.
    bool base_case_ok = false;
    /// Pr[X_l > (1 - gamma) l] == 0 for every l.
    bool support_ok = false;
    bool identity_ok = false;
    bool ansatz_ok = false;
};

/// Checks the one-step recursion of the margin X_l = S_l - gamma R_l and the
/// exponential tail ansatz at the optimal tilt, empirically within 3 sigma.
RecursionAudit recursion_audit(const TestParams &params, const AttackStrategy &strategy, std::uint64_t trials,
                               std::uint64_t seed);

struct HonestRun {
    std::vector<unsigned> x;
    std::vector<unsigned> theta;
    std::vector<unsigned> theta_prime;
    std::vector<unsigned> bob;
    std::vector<std::size_t> index_set;
    std::vector<unsigned> x_on_index_set;
    /// Bob's bits equal Alice's on the index set.
    bool correct = false;
};

/// Ideal devices: Alice measures sigma_z / sigma_x on her half of |Phi+>, Bob
/// measures in the basis theta'.
HonestRun run_honest(std::uint64_t n, std::uint64_t seed);
/// Fixed basis strings.
HonestRun run_honest(const std::vector<unsigned> &theta, const std::vector<unsigned> &theta_prime, std::uint64_t seed);

struct IndexSetDistribution {
    std::uint64_t n = 0;
    /// Pr[I = S] indexed by bitmask of S, from uniformly drawn theta and theta'.
    std::vector<double> probabilities;
    /// For every fixed theta, each subset has probability exactly 2^{-n}.
    bool uniform_for_every_basis = false;
};

/// Exact enumeration, n <= 4.
IndexSetDistribution honest_bob_uniformity(std::uint64_t n);

} // namespace wse
