// SPDX-License-Identifier: Apache-2.0
//
// rcisec: secrecy-rate linear precoding for the multi-user MIMO downlink
// Copyright (C) 2026 The rcisec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Closed-form large-system (K = M -> infinity) results for RCI precoding with cooperating
// eavesdroppers. All SNRs are linear. K only scales the per-antenna expressions.
//
// The scalar functions are templates so that callers needing extra headroom (finite-difference
// checks at very small xi) can evaluate them in long double.

#include "rcisec/errors.hpp"

#include <cmath>
#include <concepts>
#include <string>

namespace rcisec::large_system
{
    // g(xi) = sqrt(1 + 4/xi)/2 - 1/2, the almost-sure limit of A_k.
    // Written as (2/xi) / (sqrt(1 + 4/xi) + 1) to avoid cancellation for large xi.
    template <std::floating_point T>
    T g_of_xi(T xi)
    {
        if (!(xi > T(0)))
            throw DomainError("g_of_xi requires xi > 0, got " + std::to_string(static_cast<double>(xi)));
        const T s = std::sqrt(T(1) + T(4) / xi);
        return (T(2) / xi) / (s + T(1));
    }

    // xi * g'(xi) = -1 / (xi sqrt(1 + 4/xi))
    template <std::floating_point T>
    T xi_g_prime(T xi)
    {
        if (!(xi > T(0)))
            throw DomainError("xi_g_prime requires xi > 0");
        return T(-1) / (xi * std::sqrt(T(1) + T(4) / xi));
    }

    // Limit of both gamma and B_k: g + xi g' = g^2 / sqrt(1 + 4/xi) (the right side avoids cancellation).
    template <std::floating_point T>
    T gamma_limit(T xi)
    {
        const T g = g_of_xi(xi);
        return g * g / std::sqrt(T(1) + T(4) / xi);
    }

    // Per-antenna secrecy rate before clipping, in bits.
    template <std::floating_point T>
    T per_antenna_rate_unclipped(T xi, T rho)
    {
        if (!(rho >= T(0)))
            throw DomainError("SNR must be nonnegative");
        const T g = g_of_xi(xi);
        const T beta = gamma_limit(xi);
        const T one_g_sq = (T(1) + g) * (T(1) + g);
        const T sinr_user = rho * g * g / ((rho + one_g_sq) * beta);
        const T sinr_eve = rho / one_g_sq;
        return std::log2((T(1) + sinr_user) / (T(1) + sinr_eve));
    }

    // R_{s,inf}(xi) = K [log2((1 + SINR_user) / (1 + SINR_eve))]^+ in bits.
    template <std::floating_point T>
    T asymptotic_secrecy_sum_rate(T xi, T rho, int K)
    {
        if (K < 1)
            throw DomainError("K must be positive");
        const T r = per_antenna_rate_unclipped(xi, rho);
        return T(K) * (r > T(0) ? r : T(0));
    }

    // Secrecy-optimal normalized regularization 1 / (3 rho + 1 + sqrt(3 rho + 1)).
    template <std::floating_point T>
    T xi_opt(T rho)
    {
        if (!(rho >= T(0)))
            throw DomainError("xi_opt requires rho >= 0");
        const T q = T(3) * rho + T(1);
        return T(1) / (q + std::sqrt(q));
    }

    // alpha_LS = K xi_opt(rho)
    template <std::floating_point T>
    T alpha_ls(T rho, int K)
    {
        return T(K) * xi_opt(rho);
    }

    // K log2[(9 rho + 2 + (6 rho + 2) sqrt(3 rho + 1)) / (4 (4 rho + 1))]
    template <std::floating_point T>
    T optimal_secrecy_sum_rate(T rho, int K)
    {
        if (!(rho >= T(0)))
            throw DomainError("optimal_secrecy_sum_rate requires rho >= 0");
        const T num = T(9) * rho + T(2) + (T(6) * rho + T(2)) * std::sqrt(T(3) * rho + T(1));
        return T(K) * std::log2(num / (T(4) * (T(4) * rho + T(1))));
    }

    // Sum-rate without secrecy at xi = 1/rho: K log2[(1 + sqrt(4 rho + 1)) / 2]
    template <std::floating_point T>
    T sum_rate_no_secrecy(T rho, int K)
    {
        if (!(rho >= T(0)))
            throw DomainError("sum_rate_no_secrecy requires rho >= 0");
        return T(K) * std::log2((T(1) + std::sqrt(T(4) * rho + T(1))) / T(2));
    }

    // Secrecy sum-rate of RCI at xi = 1/rho:
    // K log2[(4 rho + 1 + (2 rho + 1) sqrt(4 rho + 1)) / (2 (4 rho + 1))]
    template <std::floating_point T>
    T secrecy_rate_xi_inv_rho(T rho, int K)
    {
        if (!(rho > T(0)))
            throw DomainError("secrecy_rate_xi_inv_rho requires rho > 0");
        const T q = T(4) * rho + T(1);
        return T(K) * std::log2((q + (T(2) * rho + T(1)) * std::sqrt(q)) / (T(2) * q));
    }

    struct ComparisonLimits
    {
        double ci_per_antenna = 0.0;        // xi -> 0
        double mf_per_antenna = 0.0;        // xi -> infinity, clipped
        double mf_unclipped_log_arg = 0.0;  // log2((2 rho + 1) / (rho + 1)^2)
    };

    // Per-antenna large-system secrecy rates of channel inversion and matched filtering.
    ComparisonLimits comparison_limits(double rho);

    struct AsymptoteReport
    {
        double secrecy_loss_bits_per_antenna = 0.0; // (1/2) log2(64/27)
        double gain_vs_xi_inv_rho_bits = 0.0;       // log2(3 sqrt(3) / 4)
        double power_loss_db = 0.0;                 // 10 log10(64/27)
    };

    // High-SNR constants of the large-system analysis.
    AsymptoteReport asymptote_report();

    struct LargeSystemPoint
    {
        double rho = 0.0;
        double xi = 0.0;
        int K = 1;
        double g = 0.0;
        double rate_bits = 0.0;
    };

    LargeSystemPoint evaluate_point(double rho, double xi, int K);
}
