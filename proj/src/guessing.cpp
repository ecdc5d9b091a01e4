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

#include "wse/guessing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wse/error.hpp"

namespace wse {

namespace {

constexpr double kSumTol = 1e-12;

std::size_t table_size(const std::vector<std::size_t> &sizes) {
    std::size_t total = 1;
    for (auto s : sizes) {
        require(s >= 1, "JointDistribution: empty alphabet");
        require(total <= (std::size_t{1} << 40) / s, "JointDistribution: table too large");
        total *= s;
    }
    return total;
}

GuessReport make_report(double p, std::map<Assignment, Assignment> strategy) {
    GuessReport r;
    r.p_guess = p;
    r.h_min = p > 0.0 ? -std::log2(p) : 0.0;
    if (r.h_min < 0.0) {
        r.h_min = 0.0;
    }
    r.strategy = std::move(strategy);
    return r;
}

std::vector<std::size_t> concat(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    std::vector<std::size_t> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

void check_vars(const JointDistribution &p, std::span<const std::size_t> vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        require(vars[i] < p.arity(), "guessing: variable index out of range");
        for (std::size_t j = 0; j < i; ++j) {
            require(vars[i] != vars[j], "guessing: variable listed twice");
        }
    }
}

} // namespace

JointDistribution::JointDistribution(std::vector<std::size_t> alphabet_sizes, std::vector<double> table,
                                     std::vector<std::string> names)
    : sizes_(std::move(alphabet_sizes)), table_(std::move(table)), names_(std::move(names)) {
    require(table_.size() == table_size(sizes_), "JointDistribution: table size does not match alphabets");
    require(names_.empty() || names_.size() == sizes_.size(), "JointDistribution: one name per variable");
    // Compensated sum: large uniform tables otherwise drift past the tolerance.
    double sum = 0.0;
    double carry = 0.0;
    for (double v : table_) {
        require(std::isfinite(v) && v >= 0.0, "JointDistribution: entries must be finite and >= 0");
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    require(std::abs(sum - 1.0) <= kSumTol, "JointDistribution: entries must sum to 1");
}

JointDistribution JointDistribution::uniform(std::vector<std::size_t> alphabet_sizes, std::vector<std::string> names) {
    const std::size_t n = table_size(alphabet_sizes);
    return JointDistribution(std::move(alphabet_sizes), std::vector<double>(n, 1.0 / static_cast<double>(n)),
                             std::move(names));
}

JointDistribution JointDistribution::product(const JointDistribution &a, const JointDistribution &b) {
    std::vector<std::size_t> sizes = a.sizes_;
    sizes.insert(sizes.end(), b.sizes_.begin(), b.sizes_.end());
    std::vector<double> table;
    table.reserve(a.table_.size() * b.table_.size());
    for (double pa : a.table_) {
        for (double pb : b.table_) {
            table.push_back(pa * pb);
        }
    }
    std::vector<std::string> names;
    if (!a.names_.empty() && !b.names_.empty()) {
        names = a.names_;
        names.insert(names.end(), b.names_.begin(), b.names_.end());
    }
    return JointDistribution(std::move(sizes), std::move(table), std::move(names));
}

std::size_t JointDistribution::flat_index(std::span<const std::size_t> values) const {
    require(values.size() == sizes_.size(), "JointDistribution: wrong number of values");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
        require(values[i] < sizes_[i], "JointDistribution: value outside alphabet");
        idx = idx * sizes_[i] + values[i];
    }
    return idx;
}

std::vector<std::size_t> JointDistribution::values_of(std::size_t flat) const {
    require(flat < table_.size(), "JointDistribution: flat index out of range");
    std::vector<std::size_t> values(sizes_.size());
    for (std::size_t i = sizes_.size(); i-- > 0;) {
        values[i] = flat % sizes_[i];
        flat /= sizes_[i];
    }
    return values;
}

double JointDistribution::probability(std::span<const std::size_t> values) const { return table_[flat_index(values)]; }

JointDistribution JointDistribution::marginal(std::span<const std::size_t> vars) const {
    check_vars(*this, vars);
    std::vector<std::size_t> sizes;
    std::vector<std::string> names;
    for (auto v : vars) {
        sizes.push_back(sizes_[v]);
        if (!names_.empty()) {
            names.push_back(names_[v]);
        }
    }
    std::vector<double> out(table_size(sizes), 0.0);
    std::vector<std::size_t> sub(vars.size());
    for (std::size_t flat = 0; flat < table_.size(); ++flat) {
        const auto values = values_of(flat);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            idx = idx * sizes[i] + values[vars[i]];
        }
        out[idx] += table_[flat];
    }
    // Renormalize away summation drift so the marginal validates.
    const double sum = std::accumulate(out.begin(), out.end(), 0.0);
    for (auto &v : out) {
        v /= sum;
    }
    return JointDistribution(std::move(sizes), std::move(out), std::move(names));
}

GuessReport pguess_classical(const JointDistribution &p, std::span<const std::size_t> x_vars,
                             std::span<const std::size_t> y_vars) {
    require(!x_vars.empty(), "pguess_classical: nothing to guess");
    const auto all = concat(x_vars, y_vars);
    const JointDistribution m = p.marginal(all);
    const auto &sizes = m.alphabet_sizes();
    std::size_t nx = 1;
    for (std::size_t i = 0; i < x_vars.size(); ++i) {
        nx *= sizes[i];
    }
    const std::size_t ny = m.table().size() / nx;

    const std::vector<std::size_t> x_sizes(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(x_vars.size()));
    const std::vector<std::size_t> y_sizes(sizes.begin() + static_cast<std::ptrdiff_t>(x_vars.size()), sizes.end());
    const auto decode = [](std::size_t flat, const std::vector<std::size_t> &s) {
        Assignment out(s.size());
        for (std::size_t i = s.size(); i-- > 0;) {
            out[i] = flat % s[i];
            flat /= s[i];
        }
        return out;
    };

    double total = 0.0;
    std::map<Assignment, Assignment> strategy;
    for (std::size_t y = 0; y < ny; ++y) {
        std::size_t best_x = 0;
        double best = -1.0;
        for (std::size_t x = 0; x < nx; ++x) {
            const double v = m.table()[x * ny + y];
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
        total += best;
        strategy.emplace(decode(y, y_sizes), decode(best_x, x_sizes));
    }
    return make_report(total, std::move(strategy));
}

GuessReport pguess_classical(const JointDistribution &p) {
    require(p.arity() == 2, "pguess_classical: expected a table over (X, Y)");
    const std::size_t x[] = {0};
    const std::size_t y[] = {1};
    return pguess_classical(p, x, y);
}

GuessReport pguess_postmeas_classical(const JointDistribution &p) {
    require(p.arity() == 3, "pguess_postmeas_classical: expected a table over (X, Y, K)");
    const std::size_t x[] = {0};
    const std::size_t cond[] = {2, 1};
    return pguess_classical(p, x, cond);
}

double replay_strategy(const JointDistribution &p, std::span<const std::size_t> x_vars,
                       std::span<const std::size_t> y_vars, const std::map<Assignment, Assignment> &strategy) {
    check_vars(p, concat(x_vars, y_vars));
    double total = 0.0;
    for (std::size_t flat = 0; flat < p.table().size(); ++flat) {
        const auto values = p.values_of(flat);
        Assignment x, y;
        for (auto v : x_vars) {
            x.push_back(values[v]);
        }
        for (auto v : y_vars) {
            y.push_back(values[v]);
        }
        const auto it = strategy.find(y);
        if (it != strategy.end() && it->second == x) {
            total += p.table()[flat];
        }
    }
    return total;
}

namespace {

struct SequentialSolver {
    const JointDistribution &m;
    std::size_t n;
    std::vector<std::size_t> xs, ys;
    Assignment values;

    SequentialSolver(const JointDistribution &marg, std::size_t rounds)
        : m(marg), n(rounds), values(2 * rounds, 0) {
        for (std::size_t j = 0; j < n; ++j) {
            xs.push_back(m.alphabet_sizes()[j]);
            ys.push_back(m.alphabet_sizes()[n + j]);
        }
    }

    // values[0..n) hold guesses, values[n..2n) advice.
    double solve(std::size_t j, std::map<Assignment, Assignment> *record) {
        if (j == n) {
            return m.probability(values);
        }
        double total = 0.0;
        for (std::size_t yv = 0; yv < ys[j]; ++yv) {
            values[n + j] = yv;
            double best = -1.0;
            std::size_t best_g = 0;
            for (std::size_t gv = 0; gv < xs[j]; ++gv) {
                values[j] = gv;
                const double v = solve(j + 1, nullptr);
                if (v > best) {
                    best = v;
                    best_g = gv;
                }
            }
            if (record != nullptr) {
                values[j] = best_g;
                Assignment prefix(values.begin() + static_cast<std::ptrdiff_t>(n),
                                  values.begin() + static_cast<std::ptrdiff_t>(n + j + 1));
                (*record)[prefix] = Assignment{best_g};
                solve(j + 1, record);
            }
            total += best;
        }
        return total;
    }
};

JointDistribution sequential_marginal(const JointDistribution &p, std::span<const std::size_t> x_vars,
                                      std::span<const std::size_t> y_vars) {
    require(!x_vars.empty() && x_vars.size() == y_vars.size(),
            "sequential guessing: need one guessed and one advice variable per round");
    return p.marginal(concat(x_vars, y_vars));
}

} // namespace

GuessReport pguess_sequential(const JointDistribution &p, std::span<const std::size_t> x_vars,
                              std::span<const std::size_t> y_vars) {
    const JointDistribution m = sequential_marginal(p, x_vars, y_vars);
    const std::size_t n = x_vars.size();
    double states = 1.0;
    double layer = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        layer *= static_cast<double>(m.alphabet_sizes()[j] * m.alphabet_sizes()[n + j]);
        states += layer;
    }
    require(states <= kSequentialStateLimit, "pguess_sequential: too many prefix histories");
    SequentialSolver solver(m, n);
    std::map<Assignment, Assignment> strategy;
    const double value = solver.solve(0, &strategy);
    return make_report(value, std::move(strategy));
}

double replay_sequential(const JointDistribution &p, std::span<const std::size_t> x_vars,
                         std::span<const std::size_t> y_vars, const std::map<Assignment, Assignment> &strategy) {
    const JointDistribution m = sequential_marginal(p, x_vars, y_vars);
    const std::size_t n = x_vars.size();
    double total = 0.0;
    for (std::size_t flat = 0; flat < m.table().size(); ++flat) {
        const auto values = m.values_of(flat);
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) {
            const Assignment prefix(values.begin() + static_cast<std::ptrdiff_t>(n),
                                    values.begin() + static_cast<std::ptrdiff_t>(n + j + 1));
            const auto it = strategy.find(prefix);
            ok = it != strategy.end() && it->second == Assignment{values[j]};
        }
        if (ok) {
            total += m.table()[flat];
        }
    }
    return total;
}

ConditioningReport conditioning_identity_check(const JointDistribution &p, std::span<const std::size_t> x_vars,
                                               std::span<const std::size_t> y_vars) {
    require(x_vars.size() >= 2, "conditioning_identity_check: need at least two rounds");
    const std::size_t n = x_vars.size();
    ConditioningReport r;
    const GuessReport full = pguess_sequential(p, x_vars, y_vars);
    r.sequential = full.p_guess;
    r.prefix_optimum = pguess_sequential(p, x_vars.first(n - 1), y_vars.first(n - 1)).p_guess;

    // Restrict (X_n, Y_1..Y_n) to the event that the first n-1 guesses succeed.
    const JointDistribution m = sequential_marginal(p, x_vars, y_vars);
    std::vector<std::size_t> cond_sizes{m.alphabet_sizes()[n - 1]};
    for (std::size_t j = 0; j < n; ++j) {
        cond_sizes.push_back(m.alphabet_sizes()[n + j]);
    }
    std::vector<double> cond(std::accumulate(cond_sizes.begin(), cond_sizes.end(), std::size_t{1},
                                             std::multiplies<>()),
                             0.0);
    const JointDistribution shape = JointDistribution::uniform(cond_sizes);
    for (std::size_t flat = 0; flat < m.table().size(); ++flat) {
        const auto values = m.values_of(flat);
        bool ok = true;
        for (std::size_t j = 0; j + 1 < n && ok; ++j) {
            const Assignment prefix(values.begin() + static_cast<std::ptrdiff_t>(n),
                                    values.begin() + static_cast<std::ptrdiff_t>(n + j + 1));
            const auto it = full.strategy.find(prefix);
            ok = it != full.strategy.end() && it->second == Assignment{values[j]};
        }
        if (!ok) {
            continue;
        }
        r.prefix_success += m.table()[flat];
        Assignment key{values[n - 1]};
        key.insert(key.end(), values.begin() + static_cast<std::ptrdiff_t>(n), values.end());
        cond[shape.flat_index(key)] += m.table()[flat];
    }
    if (r.prefix_success > 0.0) {
        for (auto &v : cond) {
            v /= r.prefix_success;
        }
        const JointDistribution conditional(cond_sizes, cond);
        std::vector<std::size_t> advice(n);
        std::iota(advice.begin(), advice.end(), std::size_t{1});
        const std::size_t target[] = {0};
        r.last_round_conditional = pguess_classical(conditional, target, advice).p_guess;
    }
    r.holds = std::abs(r.sequential - r.prefix_success * r.last_round_conditional) <= 1e-10;
    r.holds_with_prefix_optimum = std::abs(r.sequential - r.prefix_optimum * r.last_round_conditional) <= 1e-10;
    return r;
}

JointDistribution sequential_counterexample_distribution() {
    // (basis2, x1, x2): matching basis copies x1, otherwise x2 is a fresh coin.
    std::vector<double> table{0.25, 0.0, 0.125, 0.125, 0.125, 0.125, 0.0, 0.25};
    return JointDistribution({2, 2, 2}, std::move(table), {"theta2", "x1", "x2"});
}

Measurement binary_measurement(const Observable &o) { return {o.effect(0), o.effect(1)}; }

Measurement computational_basis_measurement(std::size_t dim) {
    Measurement out;
    for (std::size_t k = 0; k < dim; ++k) {
        std::vector<double> diag(dim, 0.0);
        diag[k] = 1.0;
        out.push_back(HermitianOperator::diagonal(diag));
    }
    return out;
}

JointDistribution born_rule_table(const DensityMatrix &rho_ab, std::size_t dim_a, const Observable &a0,
                                  const Observable &a1, const Measurement &bob) {
    require(!bob.empty(), "born_rule_table: empty measurement");
    require(a0.dim() == dim_a && a1.dim() == dim_a, "born_rule_table: observable dimension mismatch");
    require(dim_a * bob.front().dim() == rho_ab.dim(), "born_rule_table: state dimension mismatch");
    const std::size_t nk = bob.size();
    std::vector<double> table(4 * nk, 0.0);
    for (unsigned x = 0; x < 2; ++x) {
        for (unsigned th = 0; th < 2; ++th) {
            const HermitianOperator e = (th == 0 ? a0 : a1).effect(x);
            for (std::size_t k = 0; k < nk; ++k) {
                const double v = 0.5 * expectation(tensor(e, bob[k]), rho_ab);
                require(v >= -kSumTol, "born_rule_table: negative probability");
                table[(x * 2 + th) * nk + k] = std::max(0.0, v);
            }
        }
    }
    return JointDistribution({2, 2, nk}, std::move(table), {"x", "theta", "k"});
}

DensityMatrix classical_quantum_state(std::span<const double> weights, std::span<const DensityMatrix> states) {
    require(!states.empty() && weights.size() == states.size(), "classical_quantum_state: one weight per state");
    const std::size_t nk = states.size();
    std::vector<DensityMatrix> parts;
    for (std::size_t k = 0; k < nk; ++k) {
        std::vector<Complex> ket(nk, 0.0);
        ket[k] = 1.0;
        parts.push_back(tensor(states[k], DensityMatrix::pure(ket)));
    }
    return DensityMatrix::mixture(weights, parts);
}

double postmeasurement_guess_bound(double eps_plus) {
    require(eps_plus >= -1e-12 && eps_plus <= 1.0 + 1e-12, "postmeasurement_guess_bound: argument must lie in [0, 1]");
    return 0.5 + 0.5 * std::sqrt((1.0 + std::clamp(eps_plus, 0.0, 1.0)) / 2.0);
}

AnticommutatorCounterexample anticommutator_counterexample() {
    const double d0[] = {1.0, 0.0, 0.0, 0.0};
    const double d2[] = {0.0, 0.0, 1.0, 0.0};
    const double k0[] = {1.0, 0.0};
    const double k1[] = {0.0, 1.0};
    const DensityMatrix rho_ak = DensityMatrix::mixture(
        std::vector<double>{0.5, 0.5},
        std::vector<DensityMatrix>{
            DensityMatrix(tensor(HermitianOperator::diagonal(d0), HermitianOperator::diagonal(k0))),
            DensityMatrix(tensor(HermitianOperator::diagonal(d2), HermitianOperator::diagonal(k1)))});
    const double a0d[] = {1.0, -1.0, 1.0, -1.0};
    const double a1d[] = {1.0, -1.0, -1.0, 1.0};
    const Observable a0(HermitianOperator::diagonal(a0d));
    const Observable a1(HermitianOperator::diagonal(a1d));
    const DensityMatrix rho_a = partial_trace(rho_ak, 4, 2, Subsystem::A);
    JointDistribution table = born_rule_table(rho_ak, 4, a0, a1, computational_basis_measurement(2));
    return {rho_ak,
            a0,
            a1,
            effective_anticommutator(a0, a1, rho_a),
            absolute_effective_anticommutator(a0, a1, rho_a),
            std::move(table)};
}

} // namespace wse
