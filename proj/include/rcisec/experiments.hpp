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

// Monte Carlo harness: averaged secrecy sum-rates over i.i.d. Rayleigh channels, finite-system
// searches for the regularization parameter, the CCDF of the large-system penalty, scheme
// comparisons and power-allocation gains.

#include "rcisec/channel.hpp"
#include "rcisec/power_alloc.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rcisec
{
    inline constexpr const char *version_string = "rcisec 1.0.0";

    enum class Scheme
    {
        RciLs,           // RCI with the large-system alpha
        RciFsAvg,        // RCI with the alpha maximizing the sample-average rate
        RciFsPerChannel, // RCI with alpha optimized for each channel draw
        Ci,              // channel inversion (alpha = 0)
        Mf,              // matched filter
        RciXiInvRho,     // RCI with alpha = K / rho, secrecy rate
        RciPaFixedAlpha, // RCI at the large-system alpha plus power allocation
        RciPaJoint,      // joint alpha and power optimization
        RciNoSecrecy,    // RCI with alpha = K / rho, sum-rate without secrecy
    };

    // CLI names: rci-ls, rci-fs-avg, rci-fs-per-channel, ci, mf, rci-xi-inv-rho,
    // rci-pa-fixed-alpha, rci-pa-joint, rci-no-secrecy.
    std::string scheme_name(Scheme s);
    Scheme parse_scheme(const std::string &name); // throws ConfigError

    struct ExperimentConfig
    {
        int K = 4;
        int M = 4;
        std::vector<double> snr_grid_db{10.0};
        int trials = 1000;
        std::uint64_t master_seed = 0;
        int threads = 0; // 0 = hardware concurrency
        std::vector<Scheme> schemes{Scheme::RciLs};

        // Throws ConfigError naming the offending field.
        void validate() const;
    };

    // Fully-resolved config as key/value pairs (plus the library version).
    std::map<std::string, std::string> config_metadata(const ExperimentConfig &config);

    struct SweepPoint
    {
        double snr_db = 0.0;
        double mean_rate_bits = 0.0;
        double std_err = 0.0;
        int n = 0;
        std::map<std::string, double> extra;
    };

    struct SweepResult
    {
        std::string scheme;
        std::vector<SweepPoint> per_point; // one entry per SNR grid point
        std::map<std::string, std::string> metadata;
    };

    struct CcdfTable
    {
        std::vector<double> thresholds; // sorted
        std::vector<double> ccdf;       // fraction of counted trials with d > threshold
        double mean_diff = 0.0;
        int trials_used = 0;
        int skipped_zero_rate = 0;
        int bracket_failures = 0;
        std::map<std::string, std::string> metadata;
    };

    // Regularization parameter as a function of (rho, K, H).
    using AlphaRule = std::function<double(double rho, int K, const ChannelMatrix &H)>;

    // Channel of trial `trial` for a given seed; every scheme and alpha sees the same draw.
    ChannelMatrix trial_channel(const ExperimentConfig &config, int trial);

    // Runs f(trial) for trial = 0..trials-1 on up to `threads` workers and returns the results in
    // trial order. A failure is rethrown as std::runtime_error naming the lowest failing trial.
    std::vector<double> run_trials(int trials, int threads, const std::function<double(int)> &f);

    // Mean and standard error of the RCI secrecy sum-rate with alpha from `rule`.
    SweepResult average_secrecy_sum_rate(const ExperimentConfig &config, const AlphaRule &rule);

    struct AlphaSearchResult
    {
        double alpha = 0.0;
        double rate_bits = 0.0;
        bool flat = false;        // objective varies by less than the flatness tolerance over the bracket
        int evaluations = 0;
    };

    struct AlphaSearchOptions
    {
        double lo_factor = 1e-4;   // bracket [lo_factor K, hi_factor K]
        double hi_factor = 10.0;
        int grid_points = 33;      // coarse log-spaced scan before golden-section refinement
        double rel_tol = 1e-3;     // on alpha
        double flat_tol = 1e-9;    // bits
    };

    // Maximizes f over log alpha in the bracket. Throws BracketFailure when the maximum of a
    // non-flat objective sits on the bracket boundary.
    AlphaSearchResult golden_section_log_alpha(const std::function<double(double)> &f, int K,
                                               const AlphaSearchOptions &options = {});

    // Alpha maximizing the sample-average secrecy sum-rate over trials (common random numbers).
    AlphaSearchResult optimize_alpha_average(int K, int M, double rho, int trials, std::uint64_t seed,
                                             int threads = 0, const AlphaSearchOptions &options = {});

    // Alpha maximizing the secrecy sum-rate of one channel. The returned rate is never below the
    // rate at the large-system alpha. BracketFailure carries that same guaranteed best point.
    AlphaSearchResult optimize_alpha_per_channel(const ChannelMatrix &H, double sigma2,
                                                 const AlphaSearchOptions &options = {});

    // d = (R(alpha_FS(H)) - R(alpha_LS)) / R(alpha_FS(H)) over K = M channels.
    CcdfTable ccdf_alpha_penalty(int K, double rho, int trials, std::uint64_t seed,
                                 const std::vector<double> &thresholds, int threads = 0);

    // One SweepResult per configured scheme. Rates are sum-rates in bits.
    std::vector<SweepResult> scheme_comparison_sweep(const ExperimentConfig &config);

    struct PaTrialRates
    {
        double equal_power = 0.0; // RCI at alpha_LS, p = 1/gamma
        double fixed_alpha = 0.0; // power allocation at alpha_LS
        double joint = 0.0;       // joint (alpha, p)
        bool fixed_alpha_converged = true;
        bool joint_converged = true;
    };

    PaTrialRates power_allocation_trial(const ChannelMatrix &H, double sigma2, const JointOptions &options = {});

    // Per-user secrecy rates (sum / K) for rci-ep, rci-pa-fixed-alpha, rci-pa-joint and the
    // misome-bound line (1/2) log2 rho. Each point's extra map counts dominance violations
    // (tolerance 1e-6 bits) and unconverged solves.
    std::vector<SweepResult> power_allocation_sweep(const ExperimentConfig &config);

    // Tolerance of the per-trial dominance chain joint >= fixed-alpha PA >= equal power.
    inline constexpr double dominance_tol_bits = 1e-6;
}
