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

#include "rcisec/channel.hpp"
#include "rcisec/precoder.hpp"

#include <armadillo>
#include <json.hpp>
#include <vector>

namespace rcisec
{
    // Linear SINRs of message k at its intended receiver and at the coalition of the other
    // K-1 users (the genie-aided eavesdropper that has cancelled all other messages).
    struct SinrPair
    {
        double intended = 0.0;
        double eavesdropper = 0.0;
    };

    struct UserSecrecyRate
    {
        SinrPair sinr;
        double rate_bits = 0.0; // max(0, log2(1+intended) - log2(1+eavesdropper))
        bool clipped = false;   // true when the difference was negative
    };

    struct SecrecyRateReport
    {
        std::vector<UserSecrecyRate> per_user;
        double sum_bits = 0.0;

        // Sum of the signed per-user differences, i.e. the rate without [.]^+.
        double unclipped_sum_bits() const;
    };

    // Builds per-user rates from SINR pairs and sums them.
    SecrecyRateReport make_secrecy_report(const std::vector<SinrPair> &sinrs);

    // Resolvent quadratic forms of the leave-one-out channel.
    struct AkBk
    {
        double a_k = 0.0;
        double b_k = 0.0;
    };

    // Cross gains C(k, j) = |h_k^dagger w_j|^2 and column norms ||w_j||^2. Every SINR in the
    // library is a rational function of these.
    struct CrossGains
    {
        arma::mat gain;        // K x K
        arma::vec norms_sq;    // K
        double sigma2 = 1.0;

        arma::uword num_users() const { return norms_sq.n_elem; }
        double signal(arma::uword k) const { return gain(k, k); }
        // sum_{j != k} C(k, j) weighted by p_j: interference seen by user k
        double interference(arma::uword k, const arma::vec &p) const;
        // sum_{j != k} C(j, k): leakage of beam k into the other users
        double leakage(arma::uword k) const;
    };

    CrossGains cross_gains(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2);

    // |h_k^dagger w_k|^2 / (gamma sigma2 + sum_{j != k} |h_k^dagger w_j|^2)
    double sinr_intended(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2, arma::uword k);

    // ||H_{~k} w_k||^2 / (gamma sigma2); zero for a single-user system.
    double sinr_eavesdropper(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2, arma::uword k);

    // Achievable secrecy sum-rate of a linear precoder normalized by sqrt(gamma).
    SecrecyRateReport secrecy_sum_rate(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2);

    // Sum-rate without secrecy, sum_k log2(1 + SINR_k), for the same normalized precoder.
    double sum_rate_without_secrecy(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2);

    // A_k = h_k^dagger (G + alpha I)^{-1} h_k and B_k = h_k^dagger (G + alpha I)^{-1} G (G + alpha I)^{-1} h_k
    // with G = H_{~k}^dagger H_{~k} (M x M). Requires alpha > 0.
    AkBk ak_bk(const ChannelMatrix &H, double alpha, arma::uword k);

    // RCI SINRs from the A_k/B_k closed forms:
    //   SINR_k  = A^2 / (B + gamma sigma2 (1 + A)^2)
    //   SINR_~k = B / (gamma sigma2 (1 + A)^2)
    SinrPair rci_sinrs_via_akbk(const ChannelMatrix &H, double alpha, double sigma2, arma::uword k);

    // Secrecy sum-rate with power allocation W_p = W diag(sqrt(p)); no gamma normalization.
    // Throws PowerBudgetExceeded if p violates the trace constraint.
    SecrecyRateReport secrecy_sum_rate_pa(const ChannelMatrix &H, const PrecoderMatrix &W, const PowerVector &p,
                                          double sigma2);

    // Same, starting from precomputed cross gains (no budget check).
    SecrecyRateReport secrecy_sum_rate_pa(const CrossGains &gains, const arma::vec &p);

    void to_json(nlohmann::json &j, const SecrecyRateReport &report);
    void from_json(const nlohmann::json &j, SecrecyRateReport &report);
}
