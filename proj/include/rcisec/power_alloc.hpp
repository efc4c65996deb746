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

// Power allocation for RCI precoding: successive convex approximation over log-powers
// (fixed alpha) and its extension to a joint search over alpha and the power vector.

#include "rcisec/channel.hpp"
#include "rcisec/precoder.hpp"
#include "rcisec/rates.hpp"

#include <armadillo>
#include <cmath>
#include <concepts>
#include <json.hpp>
#include <optional>
#include <vector>

namespace rcisec
{
    // Tangent lower bound a log z + b <= log(1 + z), tight at z = z0 (natural logs).
    struct TangentCoeffs
    {
        double a = 1.0;
        double b = 0.0;

        // a log z + b
        double bound(double z) const;

        // The z0 -> infinity limit a = 1, b = 0 used to start the iteration.
        static TangentCoeffs high_snr() { return {1.0, 0.0}; }
    };

    // a = z0/(1+z0), b = log(1+z0) - a log z0. z0 = 0 gives a = b = 0. Throws DomainError for z0 < 0.
    TangentCoeffs tangent_coeffs(double z0);

    struct SolveDiagnostics
    {
        std::vector<double> objective_trace; // bits
        int outer_iterations = 0;
        int inner_iterations = 0;
        double kkt_residual = 0.0;
        bool converged = false;
    };

    void to_json(nlohmann::json &j, const SolveDiagnostics &d);
    void from_json(const nlohmann::json &j, SolveDiagnostics &d);

    // Value and log-power derivatives of the concave leakage term -log2(1 + e^x L / sigma2).
    template <std::floating_point T>
    struct LeakageTerm
    {
        T value;
        T first;
        T second;
    };

    template <std::floating_point T>
    LeakageTerm<T> leakage_term(T log_p, T leakage, T sigma2)
    {
        const T q = std::exp(log_p) * leakage;
        const T log2e = T(1) / std::log(T(2));
        return {-std::log1p(q / sigma2) * log2e,
                -q / (sigma2 + q) * log2e,
                -q * sigma2 / ((sigma2 + q) * (sigma2 + q)) * log2e};
    }

    // Concave surrogate of the secrecy sum-rate in log-powers x (bits):
    //   sum_k (a_k/ln 2) log(e^{x_k} C_kk / (sum_{j!=k} e^{x_j} C_kj + sigma2)) + b_k/ln 2
    //         - log2(1 + e^{x_k} L_k / sigma2)
    double pa_objective(const CrossGains &gains, const arma::vec &log_p, const std::vector<TangentCoeffs> &coeffs);
    double pa_objective(const ChannelMatrix &H, const PrecoderMatrix &W, const arma::vec &log_p, double sigma2,
                        const std::vector<TangentCoeffs> &coeffs);

    struct InnerSolveResult
    {
        arma::vec log_p;
        double objective = 0.0; // surrogate value at log_p, bits
        SolveDiagnostics diagnostics;
    };

    // Maximizes pa_objective subject to sum_k e^{x_k} ||w_k||^2 <= 1 and x_k >= log(p_floor) with a
    // log-barrier Newton method. The barrier weight grows by 10x per stage until the duality-gap
    // bound (K+1)/t drops below tol. The result is never worse than a feasible warm start.
    InnerSolveResult solve_inner_convex(const CrossGains &gains, const std::vector<TangentCoeffs> &coeffs,
                                        double tol = 1e-8, std::optional<arma::vec> warm_start = std::nullopt);
    InnerSolveResult solve_inner_convex(const ChannelMatrix &H, const PrecoderMatrix &W,
                                        const std::vector<TangentCoeffs> &coeffs, double sigma2, double tol = 1e-8,
                                        std::optional<arma::vec> warm_start = std::nullopt);

    struct ScaOptions
    {
        double tol = 1e-6;       // stop when the secrecy sum-rate improves by less (bits)
        int max_outer = 50;
        double inner_tol = 1e-8;
    };

    struct PowerAllocationResult
    {
        double alpha = 0.0;
        PowerVector powers;
        SecrecyRateReport report; // clipped rates at the returned powers
        SolveDiagnostics diagnostics;
    };

    // Fixed-alpha power allocation (SCA). The objective trace holds the unclipped secrecy
    // sum-rate at each accepted iterate and is nondecreasing. Users whose secrecy rate would be
    // negative are muted, so the reported clipped rate is never below the equal-power rate.
    PowerAllocationResult sca_power_allocation(const ChannelMatrix &H, double alpha, double sigma2,
                                               const ScaOptions &options = {});

    // The same iteration on precomputed gains, started from `initial_powers`.
    PowerAllocationResult sca_power_allocation(const CrossGains &gains, const arma::vec &initial_powers,
                                               const ScaOptions &options = {});

    struct JointOptions
    {
        double tol = 1e-5;        // outer stop: improvement in secrecy sum-rate (bits)
        int max_outer = 30;
        int max_alpha_steps = 50; // steepest-ascent iterations per alpha update
        double alpha_min = 1e-8;  // alpha_max defaults to 10 K
        std::optional<double> alpha_max;
        ScaOptions sca;
    };

    struct JointResult
    {
        double alpha = 0.0;
        double alpha_initial = 0.0;
        PowerVector powers;
        SecrecyRateReport report;
        SolveDiagnostics diagnostics; // objective_trace: clipped rate after each outer iteration
        std::vector<double> alpha_trace;
    };

    // Alternates a steepest-ascent update of alpha (powers rescaled to keep their budget share)
    // with SCA power allocation at the new alpha, starting from alpha = K xi_opt(1/sigma2).
    JointResult joint_optimize(const ChannelMatrix &H, double sigma2, const JointOptions &options = {});
}
