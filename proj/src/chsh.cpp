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

#include "wse/chsh.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "wse/error.hpp"

namespace wse {

namespace {

const HermitianOperator &checked_observable(const HermitianOperator &op) {
    require(spectral_norm(op) <= 1.0 + kConstructionTol, "Observable: operator norm exceeds 1");
    return op;
}

} // namespace

Observable::Observable(const HermitianOperator &op) : op_(checked_observable(op)) {}

HermitianOperator Observable::effect(unsigned outcome) const {
    const double sign = outcome == 0 ? 0.5 : -0.5;
    return HermitianOperator(ComplexMatrix::identity(dim()) * 0.5 + op_.matrix() * sign);
}

Observable qubit_observable(double nx, double ny, double nz, double shift) {
    const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
    require(std::abs(shift) + r <= 1.0 + kConstructionTol, "qubit_observable: |shift| + |n| must not exceed 1");
    ComplexMatrix m = pauli_x().matrix() * nx + pauli_y().matrix() * ny + pauli_z().matrix() * nz;
    m += ComplexMatrix::identity(2) * shift;
    return Observable(HermitianOperator(m));
}

DeviceSetup::DeviceSetup(DensityMatrix rho_ab, std::size_t dim_a, Observable a0, Observable a1, Observable b0,
                         Observable b1)
    : rho_ab_(std::move(rho_ab)), dim_a_(dim_a), dim_b_(0), a0_(std::move(a0)), a1_(std::move(a1)),
      b0_(std::move(b0)), b1_(std::move(b1)) {
    require(dim_a_ > 0 && rho_ab_.dim() % dim_a_ == 0, "DeviceSetup: state dimension is not a multiple of dim_a");
    dim_b_ = rho_ab_.dim() / dim_a_;
    require(a0_.dim() == dim_a_ && a1_.dim() == dim_a_, "DeviceSetup: Alice observables must act on dim_a");
    require(b0_.dim() == dim_b_ && b1_.dim() == dim_b_, "DeviceSetup: Bob observables must act on dim_b");
}

DensityMatrix DeviceSetup::rho_a() const { return partial_trace(rho_ab_, dim_a_, dim_b_, Subsystem::A); }

DensityMatrix DeviceSetup::rho_b() const { return partial_trace(rho_ab_, dim_a_, dim_b_, Subsystem::B); }

HermitianOperator chsh_operator(const DeviceSetup &s) {
    const auto &a0 = s.a(0).matrix();
    const auto &a1 = s.a(1).matrix();
    const auto &b0 = s.b(0).matrix();
    const auto &b1 = s.b(1).matrix();
    return HermitianOperator(tensor(a0, b0 + b1) + tensor(a1, b0 - b1));
}

double chsh_value(const DeviceSetup &setup) { return expectation(chsh_operator(setup), setup.rho_ab()); }

double winning_probability(double beta) {
    require(std::abs(beta) <= kTsirelsonBound + 1e-9, "winning_probability: |beta| exceeds 2 sqrt 2");
    return 0.5 + beta / 8.0;
}

double absolute_effective_anticommutator(const Observable &a0, const Observable &a1, const DensityMatrix &rho_a) {
    require(a0.dim() == rho_a.dim() && a1.dim() == rho_a.dim(),
            "absolute_effective_anticommutator: dimension mismatch");
    const double eps = 0.5 * expectation(operator_abs(anticommutator(a0.op(), a1.op())), rho_a);
    return std::clamp(eps, 0.0, 1.0);
}

double effective_anticommutator(const Observable &a0, const Observable &a1, const DensityMatrix &rho_a) {
    require(a0.dim() == rho_a.dim() && a1.dim() == rho_a.dim(), "effective_anticommutator: dimension mismatch");
    return 0.5 * expectation(anticommutator(a0.op(), a1.op()), rho_a);
}

double chsh_bound(double eps_plus) {
    require(eps_plus >= -kConstructionTol && eps_plus <= 1.0 + kConstructionTol,
            "chsh_bound: eps_plus must lie in [0, 1]");
    const double e = std::clamp(eps_plus, 0.0, 1.0);
    return 2.0 * std::sqrt(1.0 + std::sqrt(1.0 - e * e));
}

ChshReport verify_beta_eps_bound(const DeviceSetup &setup) {
    ChshReport r;
    r.beta = chsh_value(setup);
    r.eps_plus = absolute_effective_anticommutator(setup.a(0), setup.a(1), setup.rho_a());
    r.bound_rhs = chsh_bound(r.eps_plus);
    r.slack = r.bound_rhs - std::abs(r.beta);
    r.saturated = r.slack <= 1e-6;
    return r;
}

DeviceSetup ideal_setup() {
    const double r = 1.0 / std::numbers::sqrt2;
    return DeviceSetup(phi_plus(), 2, qubit_observable(0, 0, 1), qubit_observable(1, 0, 0),
                       qubit_observable(r, 0, r), qubit_observable(-r, 0, r));
}

DeviceSetup saturating_setup(double theta) {
    require(theta > 0.0 && theta <= std::numbers::pi / 2 + 1e-15, "saturating_setup: theta must lie in (0, pi/2]");
    // Alice: a0 = z, a1 = (sin t, 0, cos t) in the x-z plane. On |Phi+> the
    // x-z correlations are a.b, so beta = a0.(b0+b1) + a1.(b0-b1), maximized
    // by b0 || a0+a1 and b1 || a0-a1: beta = |a0+a1| + |a0-a1|.
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double sum_norm = std::hypot(s, 1.0 + c);
    const double diff_norm = std::hypot(s, 1.0 - c);
    return DeviceSetup(phi_plus(), 2, qubit_observable(0, 0, 1), qubit_observable(s, 0, c),
                       qubit_observable(s / sum_norm, 0, (1.0 + c) / sum_norm),
                       qubit_observable(-s / diff_norm, 0, (1.0 - c) / diff_norm));
}

Observable bisector_observable(double theta) {
    require(theta > 0.0 && theta <= std::numbers::pi / 2 + 1e-15, "bisector_observable: theta must lie in (0, pi/2]");
    return qubit_observable(std::sin(theta / 2), 0, std::cos(theta / 2));
}

Observable random_qubit_observable(SplitMix64 &rng, bool allow_non_projective) {
    const double cos_t = 2.0 * rng.uniform() - 1.0;
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    double radius = 1.0;
    double shift = 0.0;
    if (allow_non_projective && rng.uniform() < 0.25) {
        radius = rng.uniform();
        shift = (1.0 - radius) * (2.0 * rng.uniform() - 1.0);
    }
    return qubit_observable(radius * sin_t * std::cos(phi), radius * sin_t * std::sin(phi), radius * cos_t, shift);
}

DensityMatrix random_state(SplitMix64 &rng, std::size_t dim, unsigned max_components) {
    const unsigned components = 1 + static_cast<unsigned>(rng.below(std::max(1u, max_components)));
    std::vector<double> weights;
    std::vector<DensityMatrix> states;
    double total = 0.0;
    for (unsigned c = 0; c < components; ++c) {
        std::vector<Complex> ket(dim);
        for (auto &z : ket) {
            z = Complex(rng.normal(), rng.normal());
        }
        states.push_back(DensityMatrix::pure(ket));
        weights.push_back(rng.uniform() + 1e-3);
        total += weights.back();
    }
    for (auto &w : weights) {
        w /= total;
    }
    return DensityMatrix::mixture(weights, states);
}

DeviceSetup random_qubit_setup(SplitMix64 &rng) {
    auto rho = random_state(rng, 4);
    auto a0 = random_qubit_observable(rng);
    auto a1 = random_qubit_observable(rng);
    auto b0 = random_qubit_observable(rng);
    auto b1 = random_qubit_observable(rng);
    return DeviceSetup(std::move(rho), 2, std::move(a0), std::move(a1), std::move(b0), std::move(b1));
}

} // namespace wse
