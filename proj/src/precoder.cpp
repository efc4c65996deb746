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

#include "rcisec/precoder.hpp"
#include "rcisec/errors.hpp"

#include <cmath>
#include <string>

namespace rcisec
{
    namespace
    {
        // Below this reciprocal condition number a Gram matrix is treated as singular when alpha = 0.
        constexpr double singular_rcond = 1e-13;

        void check_alpha(double alpha)
        {
            if (!(alpha >= 0.0) || !std::isfinite(alpha))
                throw DomainError("Regularization parameter must be finite and nonnegative, got " + std::to_string(alpha));
        }

        // Upper Cholesky factor R of a Hermitian matrix with A = R^dagger R.
        arma::cx_mat cholesky_or_throw(const arma::cx_mat &A, double alpha, const char *what)
        {
            arma::cx_mat R;
            if (!arma::chol(R, A))
                throw SingularMatrix(std::string(what) + ": Gram matrix is not positive definite (alpha = " +
                                     std::to_string(alpha) + ")");
            if (alpha == 0.0)
            {
                const arma::vec d = arma::abs(arma::diagvec(R));
                const double ratio = d.min() / d.max();
                if (ratio * ratio < singular_rcond)
                    throw SingularMatrix(std::string(what) + ": Gram matrix is numerically singular at alpha = 0");
            }
            return R;
        }

        // Solves (R^dagger R) X = B
        arma::cx_mat cholesky_solve(const arma::cx_mat &R, const arma::cx_mat &B)
        {
            const arma::cx_mat Y = arma::solve(arma::trimatl(R.t()), B);
            return arma::solve(arma::trimatu(R), Y);
        }
    }

    PrecoderMatrix::PrecoderMatrix(arma::cx_mat columns, std::optional<double> alpha)
        : columns_(std::move(columns)), alpha_(alpha)
    {
        gamma_ = arma::accu(arma::square(arma::abs(columns_)));
    }

    arma::vec PrecoderMatrix::column_norms_sq() const
    {
        return arma::sum(arma::square(arma::abs(columns_)), 0).t();
    }

    PowerVector PowerVector::from_powers(const arma::vec &p)
    {
        PowerVector out;
        out.p_ = p;
        out.log_p_.set_size(p.n_elem);
        for (arma::uword k = 0; k < p.n_elem; ++k)
        {
            if (!(p(k) >= 0.0) || !std::isfinite(p(k)))
                throw DomainError("Powers must be finite and nonnegative.");
            if (p(k) <= p_floor * (1.0 + 1e-9))
            {
                out.p_(k) = 0.0;
                out.log_p_(k) = std::log(p_floor);
            }
            else
                out.log_p_(k) = std::log(p(k));
        }
        return out;
    }

    PowerVector PowerVector::from_log_powers(const arma::vec &log_p)
    {
        if (!log_p.is_finite())
            throw DomainError("Log-powers must be finite.");
        return from_powers(arma::exp(log_p));
    }

    PowerVector PowerVector::equal(arma::uword K, double value)
    {
        return from_powers(arma::vec(K, arma::fill::value(value)));
    }

    double PowerVector::trace_power(const PrecoderMatrix &W) const
    {
        if (W.num_users() != p_.n_elem)
            throw DimensionError("Power vector length does not match the number of precoder columns.");
        return arma::dot(p_, W.column_norms_sq());
    }

    PrecoderMatrix rci_precoder(const ChannelMatrix &H, double alpha)
    {
        check_alpha(alpha);
        const arma::cx_mat &E = H.entries();
        arma::cx_mat gram = E * E.t();
        gram.diag() += alpha;
        const arma::cx_mat R = cholesky_or_throw(gram, alpha, "rci_precoder");
        // W^dagger = (H H^dagger + alpha I)^{-1} H because the Gram matrix is Hermitian
        arma::cx_mat W = cholesky_solve(R, E).t();
        return PrecoderMatrix(std::move(W), alpha);
    }

    PrecoderMatrix rci_precoder_dual(const ChannelMatrix &H, double alpha)
    {
        check_alpha(alpha);
        const arma::cx_mat &E = H.entries();
        arma::cx_mat gram = E.t() * E;
        gram.diag() += alpha;
        const arma::cx_mat R = cholesky_or_throw(gram, alpha, "rci_precoder_dual");
        arma::cx_mat W = cholesky_solve(R, arma::cx_mat(E.t()));
        return PrecoderMatrix(std::move(W), alpha);
    }

    double power_normalization(const ChannelMatrix &H, double alpha)
    {
        check_alpha(alpha);
        const arma::cx_mat &E = H.entries();
        const arma::cx_mat gram = E * E.t();
        arma::vec lambda = arma::eig_sym(arma::cx_mat(0.5 * (gram + gram.t())));
        lambda.transform([](double v) { return std::max(v, 0.0); });
        if (alpha == 0.0 && (lambda.min() <= 0.0 || lambda.min() < singular_rcond * lambda.max()))
            throw SingularMatrix("power_normalization: H H^dagger is singular at alpha = 0");
        double gamma = 0.0;
        for (double l : lambda)
            gamma += l / ((l + alpha) * (l + alpha));
        return gamma;
    }

    PrecoderMatrix ci_precoder(const ChannelMatrix &H)
    {
        if (H.num_users() > H.num_antennas())
            throw DimensionError("ci_precoder: channel inversion requires K <= M (K = " +
                                 std::to_string(H.num_users()) + ", M = " + std::to_string(H.num_antennas()) + ")");
        return rci_precoder(H, 0.0);
    }

    PrecoderMatrix mf_precoder(const ChannelMatrix &H)
    {
        if (H.is_zero())
            throw ZeroChannel("mf_precoder: channel matrix is identically zero");
        return PrecoderMatrix(arma::cx_mat(H.entries().t()), std::nullopt);
    }

    PowerVector equal_power(const PrecoderMatrix &W)
    {
        if (!(W.gamma() > 0.0))
            throw ZeroChannel("equal_power: precoder has zero power");
        return PowerVector::equal(W.num_users(), 1.0 / W.gamma());
    }

    PowerAllocatedPrecoder apply_power_allocation(const PrecoderMatrix &W, const PowerVector &p)
    {
        const double used = p.trace_power(W);
        if (used > 1.0 + power_budget_slack)
            throw PowerBudgetExceeded("Power allocation uses " + std::to_string(used) + " > 1 of the transmit budget");

        arma::cx_mat eff = W.columns();
        for (arma::uword k = 0; k < eff.n_cols; ++k)
            eff.col(k) *= std::sqrt(p.p()(k));
        return {W, p, std::move(eff)};
    }
}
