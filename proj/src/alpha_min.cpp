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

#include "wse/alpha_min.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wse/bounds.hpp"
#include "wse/error.hpp"

namespace wse {

namespace {

void validate_tilt(double k) { require(std::isfinite(k) && k >= 0.0, "tilt k must be finite and >= 0"); }

} // namespace

DecayCoefficients decay_coefficients(double q, double gamma, double k) {
    validate_test_probability(q);
    validate_threshold(gamma);
    validate_tilt(k);
    // e^{-k gamma}(e^k -/+ 1) written without the overflowing e^k factor.
    const double grow = std::exp(k * (1.0 - gamma));
    const double decay = std::exp(-k * gamma);
    const double diff = grow - decay;
    const double sum = grow + decay;
    const double norm = 4.0 * std::numbers::sqrt2;
    return {(2.0 * (1.0 - q) + q * diff) / norm, q * diff / norm, (1.0 - q) / 2.0 + q * sum / 2.0};
}

DecayValue decay_objective(double q, double gamma, double k) {
    const auto [a, b, c] = decay_coefficients(q, gamma, k);
    const double r = std::hypot(a, b);
    if (r == 0.0) {
        return {c, 0.0};
    }
    const double t = std::clamp((a - b) * (a + b) / (r * r), 0.0, 1.0);
    return {std::numbers::sqrt2 * r + c, t};
}

double tilted_round_objective(double q, double gamma, double k, double t) {
    validate_test_probability(q);
    validate_threshold(gamma);
    validate_tilt(k);
    const double p_live = live_win_max(t);
    const double p_test = test_win_max(t);
    return (1.0 - q) * p_live + q * std::exp(k * (1.0 - gamma)) * p_test + q * std::exp(-k * gamma) * (1.0 - p_test);
}

double decay_rate(double q, double gamma, double k) { return decay_objective(q, gamma, k).value; }

AlphaResult optimal_decay_rate(double q, double gamma) {
    validate_test_probability(q);
    validate_threshold(gamma);
    const auto g = [&](double k) { return decay_rate(q, gamma, k); };

    AlphaResult result;
    result.degenerate = q == 1.0;

    const double g0 = g(0.0);
    double lo = 0.0;
    double hi = 1.0;
    double k = hi;
    double gk = g(k);
    if (gk < g0) {
        double prev = 0.0;
        for (;;) {
            const double next = 2.0 * k;
            if (next > kMaxTilt) {
                result.converged = false;
                break;
            }
            const double gn = g(next);
            if (gn >= gk) {
                lo = prev;
                hi = next;
                break;
            }
            prev = k;
            k = next;
            gk = gn;
        }
    }

    double best_k = 0.0;
    double best_g = g0;
    if (!result.converged) {
        best_k = k;
        best_g = gk;
    } else {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        double f1 = g(x1);
        double f2 = g(x2);
        while (hi - lo > 1e-10) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = g(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = g(x2);
            }
        }
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm < best_g) {
            best_k = mid;
            best_g = gm;
        }
    }

    result.alpha_min = best_g;
    result.k_star = best_k;
    result.t_star = decay_objective(q, gamma, best_k).t_star;
    return result;
}

double failure_bound(const TestParams &params) {
    params.validate();
    if (params.rounds == 0) {
        return 1.0;
    }
    const double alpha = optimal_decay_rate(params.q, params.gamma.value()).alpha_min;
    return std::pow(alpha, static_cast<double>(params.rounds));
}

double decay_slope_at_zero(double q, double gamma) {
    require(q < 1.0, "decay_slope_at_zero: requires q < 1");
    constexpr double h = 1e-4;
    return (-3.0 * decay_rate(q, gamma, 0.0) + 4.0 * decay_rate(q, gamma, h) - decay_rate(q, gamma, 2.0 * h)) /
           (2.0 * h);
}

double decay_slope_closed_form(double q, double gamma) {
    validate_test_probability(q);
    validate_threshold(gamma);
    return (0.75 - gamma) * q;
}

std::size_t count_descent_ascent_transitions(double q, double gamma, double k_max, std::size_t points) {
    require(points >= 3 && k_max > 0.0, "count_descent_ascent_transitions: need >= 3 points and k_max > 0");
    int last_direction = 0;
    std::size_t transitions = 0;
    double prev = decay_rate(q, gamma, 0.0);
    for (std::size_t i = 1; i < points; ++i) {
        const double k = k_max * static_cast<double>(i) / static_cast<double>(points - 1);
        const double cur = decay_rate(q, gamma, k);
        const double delta = cur - prev;
        int direction = 0;
        if (std::abs(delta) > 1e-14 * std::max(1.0, std::abs(cur))) {
            direction = delta > 0 ? 1 : -1;
        }
        if (direction != 0) {
            if (last_direction < 0 && direction > 0) {
                ++transitions;
            }
            last_direction = direction;
        }
        prev = cur;
    }
    return transitions;
}

} // namespace wse
