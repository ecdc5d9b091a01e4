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

// Decay rate of the failure probability under sequential attacks.
//
// For a tilt k >= 0 the per-round growth factor of
//   Pr[S_l - gamma R_l >= x  and  all live guesses correct] * e^{k x}
// is at most
//   g(k) = max_t [ (1-q) pL(t) + q e^{k(1-gamma)} pT(t) + q e^{-k gamma} (1 - pT(t)) ]
//        = A sqrt(1+t) + B sqrt(1-t) + C  maximized over t in [0,1]
//        = sqrt(2 (A^2 + B^2)) + C        at t* = (A^2 - B^2) / (A^2 + B^2),
// and the failure probability after n rounds is at most (min_k g(k))^n.

#pragma once

#include <cstddef>
#include <vector>

#include "wse/params.hpp"

namespace wse {

struct DecayCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// A = [2(1-q) + q e^{-k gamma}(e^k - 1)] / (4 sqrt 2),
/// B = q e^{-k gamma}(e^k - 1) / (4 sqrt 2),
/// C = (1-q)/2 + q e^{-k gamma}(e^k + 1) / 2.
DecayCoefficients decay_coefficients(double q, double gamma, double k);

struct DecayValue {
    double value = 1.0;
    /// Maximizing anticommutator parameter.
    double t_star = 0.0;
};

/// Closed-form max over the trade-off curve of the tilted round objective.
DecayValue decay_objective(double q, double gamma, double k);

/// The raw tilted objective at a fixed curve point t (no maximization).
double tilted_round_objective(double q, double gamma, double k, double t);

/// alpha(q, gamma, k) = decay_objective(q, gamma, k).value.
double decay_rate(double q, double gamma, double k);

struct AlphaResult {
    double alpha_min = 1.0;
    double k_star = 0.0;
    double t_star = 0.0;
    bool converged = true;
    /// q == 1: no live rounds, the bound carries no security meaning.
    bool degenerate = false;
};

inline constexpr double kMaxTilt = 1e6;

/// min_{k >= 0} alpha(q, gamma, k): doubling bracket from k = 0 followed by
/// golden-section search to |dk| <= 1e-10. If the bracket would exceed
/// kMaxTilt the best value seen is returned with converged = false.
AlphaResult optimal_decay_rate(double q, double gamma);

/// [alpha_min(q, gamma)]^n.
double failure_bound(const TestParams &params);

/// Numerical g'(0+) by a second-order one-sided difference. Requires q < 1.
double decay_slope_at_zero(double q, double gamma);

/// (3/4 - gamma) q: the first-order coefficient of g around k = 0.
double decay_slope_closed_form(double q, double gamma);

/// Number of interior local minima (descending-to-ascending transitions) of
/// g on `points` evenly spaced tilts in [0, k_max]. Changes smaller than
/// 1e-14 relative are treated as flat.
std::size_t count_descent_ascent_transitions(double q, double gamma, double k_max, std::size_t points);

} // namespace wse
