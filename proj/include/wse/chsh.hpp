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

// CHSH certification of a bipartite device setup: the CHSH operator and value,
// the absolute effective anticommutator of Alice's pair of observables, and
// the bound |beta| <= 2 sqrt(1 + sqrt(1 - eps_plus^2)) relating them.

#pragma once

#include <cmath>
#include <numbers>

#include "wse/matrix.hpp"
#include "wse/rng.hpp"

namespace wse {

/// 2 sqrt(2), the largest CHSH value attainable quantumly.
inline const double kTsirelsonBound = 2.0 * std::numbers::sqrt2;

/// Binary observable: Hermitian with spectrum in [-1, 1] (within 1e-12).
/// Outcome 0 corresponds to eigenvalue +1, outcome 1 to -1; the POVM element
/// of outcome b is (1 + (-1)^b A) / 2.
class Observable {
  public:
    explicit Observable(const HermitianOperator &op);

    const HermitianOperator &op() const noexcept { return op_; }
    const ComplexMatrix &matrix() const noexcept { return op_.matrix(); }
    std::size_t dim() const noexcept { return op_.dim(); }

    /// (1 + (-1)^outcome A) / 2.
    HermitianOperator effect(unsigned outcome) const;

  private:
    HermitianOperator op_;
};

/// shift * 1 + n . sigma on a qubit; requires |shift| + |n| <= 1.
Observable qubit_observable(double nx, double ny, double nz, double shift = 0.0);

/// A bipartite state with two binary observables per side.
class DeviceSetup {
  public:
    DeviceSetup(DensityMatrix rho_ab, std::size_t dim_a, Observable a0, Observable a1, Observable b0, Observable b1);

    const DensityMatrix &rho_ab() const noexcept { return rho_ab_; }
    std::size_t dim_a() const noexcept { return dim_a_; }
    std::size_t dim_b() const noexcept { return dim_b_; }
    const Observable &a(unsigned setting) const { return setting == 0 ? a0_ : a1_; }
    const Observable &b(unsigned setting) const { return setting == 0 ? b0_ : b1_; }
    DensityMatrix rho_a() const;
    DensityMatrix rho_b() const;

  private:
    DensityMatrix rho_ab_;
    std::size_t dim_a_;
    std::size_t dim_b_;
    Observable a0_, a1_, b0_, b1_;
};

struct ChshReport {
    double beta = 0.0;
    double eps_plus = 0.0;
    double bound_rhs = 0.0;
    /// bound_rhs - |beta|.
    double slack = 0.0;
    /// slack <= 1e-6.
    bool saturated = false;
};

/// W = A0 (x) B0 + A0 (x) B1 + A1 (x) B0 - A1 (x) B1.
HermitianOperator chsh_operator(const DeviceSetup &setup);

/// beta = tr(W rho_AB).
double chsh_value(const DeviceSetup &setup);

/// Winning probability of the CHSH game, 1/2 + beta/8. Requires |beta| <= 2 sqrt 2.
double winning_probability(double beta);

/// eps_plus = tr(|{A0,A1}| rho_A) / 2, clamped to [0, 1].
double absolute_effective_anticommutator(const Observable &a0, const Observable &a1, const DensityMatrix &rho_a);

/// tr({A0,A1} rho_A) / 2 (signed; no modulus).
double effective_anticommutator(const Observable &a0, const Observable &a1, const DensityMatrix &rho_a);

/// Largest |beta| compatible with eps_plus: 2 sqrt(1 + sqrt(1 - eps_plus^2)).
double chsh_bound(double eps_plus);

ChshReport verify_beta_eps_bound(const DeviceSetup &setup);

/// |Phi+>, A0 = Z, A1 = X, B0 = (Z+X)/sqrt2, B1 = (Z-X)/sqrt2.
DeviceSetup ideal_setup();

/// |Phi+>, A0 = Z, A1 = cos(theta) Z + sin(theta) X, and Bob's observables
/// along the normalized sum and difference of Alice's Bloch vectors, which
/// maximize beta for this Alice pair. Yields eps_plus = cos(theta) and
/// beta = 2 sqrt(1 + sin(theta)). Requires theta in (0, pi/2].
DeviceSetup saturating_setup(double theta);

/// Bob observable along the bisector of Alice's Bloch vectors in
/// saturating_setup(theta); guessing x = k with it is optimal for a
/// classical adversary holding Bob's half.
Observable bisector_observable(double theta);

/// Random two-qubit setup: mixture of 1-3 Gaussian pure states, observables
/// with uniformly distributed Bloch directions (one in four non-projective).
DeviceSetup random_qubit_setup(SplitMix64 &rng);
Observable random_qubit_observable(SplitMix64 &rng, bool allow_non_projective = true);
DensityMatrix random_state(SplitMix64 &rng, std::size_t dim, unsigned max_components = 3);

} // namespace wse
