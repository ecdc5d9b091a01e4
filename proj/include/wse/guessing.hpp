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

// Exact guessing probabilities of classical variables from classical advice.

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wse/chsh.hpp"
#include "wse/matrix.hpp"

namespace wse {

/// Probability table over a tuple of finite variables. Row-major: the first
/// variable varies slowest.
class JointDistribution {
  public:
    JointDistribution(std::vector<std::size_t> alphabet_sizes, std::vector<double> table,
                      std::vector<std::string> names = {});

    static JointDistribution uniform(std::vector<std::size_t> alphabet_sizes, std::vector<std::string> names = {});
    /// Independent joint of a and b; variables of a come first.
    static JointDistribution product(const JointDistribution &a, const JointDistribution &b);

    std::size_t arity() const noexcept { return sizes_.size(); }
    const std::vector<std::size_t> &alphabet_sizes() const noexcept { return sizes_; }
    const std::vector<double> &table() const noexcept { return table_; }
    const std::vector<std::string> &names() const noexcept { return names_; }

    std::size_t flat_index(std::span<const std::size_t> values) const;
    std::vector<std::size_t> values_of(std::size_t flat) const;
    double probability(std::span<const std::size_t> values) const;

    /// Distribution of the listed variables, in the listed order.
    JointDistribution marginal(std::span<const std::size_t> vars) const;

  private:
    std::vector<std::size_t> sizes_;
    std::vector<double> table_;
    std::vector<std::string> names_;
};

using Assignment = std::vector<std::size_t>;

struct GuessReport {
    double p_guess = 0.0;
    double h_min = 0.0;
    /// Advice values to guessed values. For sequential guessing the key is
    /// an advice prefix y_1..y_j and the value holds the single guess for x_j.
    std::map<Assignment, Assignment> strategy;
};

/// max_f Pr[X = f(Y)] where X and Y are tuples of variables of p. Ties pick
/// the lowest flat index of X.
GuessReport pguess_classical(const JointDistribution &p, std::span<const std::size_t> x_vars,
                             std::span<const std::size_t> y_vars);
/// Two-variable table: guess variable 0 from variable 1.
GuessReport pguess_classical(const JointDistribution &p);

/// Table over (X, Y, K): guess X from the pair (K, Y).
GuessReport pguess_postmeas_classical(const JointDistribution &p);

/// Pr[X = f(Y)] for a given strategy; unlisted advice values count as wrong.
double replay_strategy(const JointDistribution &p, std::span<const std::size_t> x_vars,
                       std::span<const std::size_t> y_vars, const std::map<Assignment, Assignment> &strategy);

inline constexpr double kSequentialStateLimit = 1e7;

/// max over f_1..f_n of Pr[X_j = f_j(Y_1..Y_j) for all j], where x_vars[j] and
/// y_vars[j] name the variables of round j. Exact backward induction over
/// (advice prefix, guess prefix) states; throws if their count exceeds
/// kSequentialStateLimit.
GuessReport pguess_sequential(const JointDistribution &p, std::span<const std::size_t> x_vars,
                              std::span<const std::size_t> y_vars);

/// Pr[X_j = f_j(Y_1..Y_j) for all j] for a sequential strategy as returned
/// by pguess_sequential.
double replay_sequential(const JointDistribution &p, std::span<const std::size_t> x_vars,
                         std::span<const std::size_t> y_vars, const std::map<Assignment, Assignment> &strategy);

struct ConditioningReport {
    /// Sequential optimum over all n rounds.
    double sequential = 0.0;
    /// Sequential optimum over the first n-1 rounds alone.
    double prefix_optimum = 0.0;
    /// Pr[S], S = the first n-1 guesses of the optimal n-round strategy succeed.
    double prefix_success = 0.0;
    /// p_guess(X_n | Y_1..Y_n, S).
    double last_round_conditional = 0.0;
    /// |sequential - prefix_success * last_round_conditional| <= 1e-10.
    bool holds = false;
    /// The same with prefix_optimum in place of prefix_success.
    bool holds_with_prefix_optimum = false;
};

/// Requires n >= 2 rounds.
ConditioningReport conditioning_identity_check(const JointDistribution &p, std::span<const std::size_t> x_vars,
                                               std::span<const std::size_t> y_vars);

/// Two-round table over (basis2, x1, x2) of the sequential counterexample.
JointDistribution sequential_counterexample_distribution();

/// Measurement on Bob's side given by its effects.
using Measurement = std::vector<HermitianOperator>;

Measurement binary_measurement(const Observable &o);
Measurement computational_basis_measurement(std::size_t dim);

/// Pr[X = x, Theta = th, K = k] = 1/2 tr[(E^{A_th}_x (x) M_k) rho_AB] as a table
/// over (X, Theta, K) with a uniform basis choice.
JointDistribution born_rule_table(const DensityMatrix &rho_ab, std::size_t dim_a, const Observable &a0,
                                  const Observable &a1, const Measurement &bob);

/// sum_k p_k rho_k (x) |k><k| with K as the second factor.
DensityMatrix classical_quantum_state(std::span<const double> weights, std::span<const DensityMatrix> states);

/// 1/2 + 1/2 sqrt((1 + eps_plus)/2).
double postmeasurement_guess_bound(double eps_plus);

struct AnticommutatorCounterexample {
    DensityMatrix rho_ak;
    Observable a0;
    Observable a1;
    double eps_eff;
    double eps_plus;
    /// Over (X, Theta, K) with K read in the computational basis.
    JointDistribution table;
};

/// Four-dimensional example with vanishing effective anticommutator whose
/// outcome is still fully determined by a classical register.
AnticommutatorCounterexample anticommutator_counterexample();

} // namespace wse
