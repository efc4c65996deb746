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

#include <armadillo>
#include <optional>

namespace rcisec
{
    // Lowest per-user power kept in the log domain; users at the floor are treated as muted.
    inline constexpr double p_floor = 1e-12;

    // Slack allowed on the unit trace power constraint.
    inline constexpr double power_budget_slack = 1e-9;

    // M x K linear precoder W = [w_1 ... w_K] with gamma = tr{W^dagger W}. The transmitted
    // signal is x = W u / sqrt(gamma), so any positive scaling of W cancels in every rate.
    class PrecoderMatrix
    {
    public:
        PrecoderMatrix() = default;
        PrecoderMatrix(arma::cx_mat columns, std::optional<double> alpha);

        const arma::cx_mat &columns() const { return columns_; }
        arma::uword num_users() const { return columns_.n_cols; }
        arma::uword num_antennas() const { return columns_.n_rows; }
        double gamma() const { return gamma_; }
        // Regularization parameter for RCI/CI (0 for CI); empty for matched filter.
        std::optional<double> alpha() const { return alpha_; }
        // ||w_k||^2 for every user
        arma::vec column_norms_sq() const;

    private:
        arma::cx_mat columns_;
        double gamma_ = 0.0;
        std::optional<double> alpha_;
    };

    // Per-user power weights p and their logarithms. Powers at or below p_floor are muted:
    // p_k = 0 while log_p_k = log(p_floor).
    class PowerVector
    {
    public:
        PowerVector() = default;
        static PowerVector from_powers(const arma::vec &p);     // throws DomainError if any p_k < 0
        static PowerVector from_log_powers(const arma::vec &log_p);
        static PowerVector equal(arma::uword K, double value);

        const arma::vec &p() const { return p_; }
        const arma::vec &log_p() const { return log_p_; }
        arma::uword size() const { return p_.n_elem; }

        // sum_k p_k ||w_k||^2
        double trace_power(const PrecoderMatrix &W) const;

    private:
        arma::vec p_;
        arma::vec log_p_;
    };

    // W_p = W diag(sqrt(p)); no gamma normalization is applied on top of p.
    struct PowerAllocatedPrecoder
    {
        PrecoderMatrix base;
        PowerVector powers;
        arma::cx_mat effective_columns;
    };

    // W = H^dagger (H H^dagger + alpha I_K)^{-1}, solved via a Cholesky factorization of the
    // K x K Gram matrix. alpha = 0 requires H H^dagger to be nonsingular (else SingularMatrix).
    PrecoderMatrix rci_precoder(const ChannelMatrix &H, double alpha);

    // The same precoder in its M x M form (H^dagger H + alpha I_M)^{-1} H^dagger. Used to cross-check.
    PrecoderMatrix rci_precoder_dual(const ChannelMatrix &H, double alpha);

    // gamma = tr{H^dagger H (H^dagger H + alpha I)^{-2}} evaluated from the spectrum of H H^dagger.
    double power_normalization(const ChannelMatrix &H, double alpha);

    // Zero forcing W = H^dagger (H H^dagger)^{-1}; requires K <= M.
    PrecoderMatrix ci_precoder(const ChannelMatrix &H);

    // W = H^dagger, unscaled.
    PrecoderMatrix mf_precoder(const ChannelMatrix &H);

    // p_k = 1/gamma for every user, which meets the power constraint with equality.
    PowerVector equal_power(const PrecoderMatrix &W);

    // Throws PowerBudgetExceeded if sum_k p_k ||w_k||^2 > 1 + power_budget_slack.
    PowerAllocatedPrecoder apply_power_allocation(const PrecoderMatrix &W, const PowerVector &p);
}
