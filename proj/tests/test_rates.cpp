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

#include <catch_amalgamated.hpp>

#include "rcisec/channel.hpp"
#include "rcisec/errors.hpp"
#include "rcisec/precoder.hpp"
#include "rcisec/rates.hpp"

#include <cmath>
#include <complex>

using namespace rcisec;
using Catch::Approx;
using cx = std::complex<double>;

namespace
{
    ChannelMatrix identity(arma::uword K) { return ChannelMatrix(arma::eye<arma::cx_mat>(K, K)); }
    ChannelMatrix scalar(double h) { return ChannelMatrix(arma::cx_mat(1, 1, arma::fill::value(cx(h, 0.0)))); }

    bool rel_close(double a, double b, double tol)
    {
        return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
    }
}

TEST_CASE("sinr_intended - closed-form cases")
{
    CHECK(sinr_intended(scalar(1.0), rci_precoder(scalar(1.0), 1.0), 1.0, 0) == Approx(1.0).epsilon(1e-14));
    const PrecoderMatrix W = rci_precoder(identity(2), 0.5);
    CHECK(sinr_intended(identity(2), W, 0.5, 0) == Approx(1.0).epsilon(1e-14));
    CHECK(sinr_intended(identity(2), W, 0.5, 1) == Approx(1.0).epsilon(1e-14));

    // a user whose precoder column is zero receives nothing
    arma::cx_mat cols = rci_precoder(sample_channel(3, 3, {1, 1}), 0.2).columns();
    cols.col(1).zeros();
    CHECK(sinr_intended(sample_channel(3, 3, {1, 1}), PrecoderMatrix(cols, 0.2), 0.1, 1) == 0.0);

    CHECK_THROWS_AS(sinr_intended(identity(2), rci_precoder(identity(3), 0.1), 0.5, 0), DimensionError);
    CHECK_THROWS_AS(sinr_intended(identity(2), W, 0.5, 2), IndexError);
}

TEST_CASE("sinr_eavesdropper - leakage cases")
{
    CHECK(sinr_eavesdropper(scalar(1.3), rci_precoder(scalar(1.3), 0.7), 0.2, 0) == 0.0);
    for (double alpha : {0.01, 0.5, 10.0})
        CHECK(sinr_eavesdropper(identity(2), rci_precoder(identity(2), alpha), 0.3, 1) == 0.0);

    // row-wise expansion of ||H_{~k} w_k||^2
    const ChannelMatrix H = sample_channel(4, 4, {2, 0});
    const PrecoderMatrix W = rci_precoder(H, 0.3);
    const double sigma2 = 0.2;
    for (arma::uword k = 0; k < 4; ++k)
    {
        double sum = 0.0;
        for (arma::uword j = 0; j < 4; ++j)
            if (j != k)
                sum += std::norm(arma::cdot(H.user_vector(j), W.columns().col(k)));
        CHECK(rel_close(sinr_eavesdropper(H, W, sigma2, k), sum / (W.gamma() * sigma2), 1e-12));
    }
}

TEST_CASE("secrecy_sum_rate - closed-form cases")
{
    const SecrecyRateReport r1 = secrecy_sum_rate(scalar(1.0), rci_precoder(scalar(1.0), 1.0), 1.0);
    CHECK(r1.sum_bits == Approx(1.0).epsilon(1e-14));
    const SecrecyRateReport r2 = secrecy_sum_rate(identity(2), rci_precoder(identity(2), 0.5), 0.5);
    CHECK(r2.sum_bits == Approx(2.0).epsilon(1e-14));

    const ChannelMatrix H = sample_channel(4, 4, {3, 0});
    const PrecoderMatrix W = rci_precoder(H, 0.4);
    CHECK(secrecy_sum_rate(H, W, 1e12).sum_bits < 1e-9);
}

TEST_CASE("secrecy_sum_rate - report invariants")
{
    for (int t = 0; t < 30; ++t)
    {
        const ChannelMatrix H = sample_channel(4, 4, {4, std::uint64_t(t)});
        // large alpha leaks a lot, so some users get clipped
        const PrecoderMatrix W = rci_precoder(H, t % 2 ? 5.0 : 0.05);
        const SecrecyRateReport r = secrecy_sum_rate(H, W, 0.05);
        double sum = 0.0;
        for (const auto &u : r.per_user)
        {
            const double diff = std::log2(1.0 + u.sinr.intended) - std::log2(1.0 + u.sinr.eavesdropper);
            CHECK(u.rate_bits >= 0.0);
            CHECK(std::abs(u.rate_bits - std::max(0.0, diff)) < 1e-12);
            CHECK(u.clipped == (diff < 0.0));
            sum += u.rate_bits;
        }
        CHECK(r.sum_bits == Approx(sum).epsilon(1e-15));
        CHECK(r.unclipped_sum_bits() <= r.sum_bits + 1e-12);
    }
}

TEST_CASE("secrecy_sum_rate - scale invariance of the precoder")
{
    const ChannelMatrix H = sample_channel(3, 5, {5, 0});
    const PrecoderMatrix W = rci_precoder(H, 0.2);
    const PrecoderMatrix W7(W.columns() * 7.5, W.alpha());
    for (arma::uword k = 0; k < 3; ++k)
    {
        CHECK(rel_close(sinr_intended(H, W, 0.1, k), sinr_intended(H, W7, 0.1, k), 1e-10));
        CHECK(rel_close(sinr_eavesdropper(H, W, 0.1, k), sinr_eavesdropper(H, W7, 0.1, k), 1e-10));
    }
    CHECK(rel_close(secrecy_sum_rate(H, W, 0.1).sum_bits, secrecy_sum_rate(H, W7, 0.1).sum_bits, 1e-10));
}

TEST_CASE("secrecy_sum_rate - nonincreasing in noise for a leakage-free precoder")
{
    const ChannelMatrix H = sample_channel(4, 4, {6, 0});
    const PrecoderMatrix W = ci_precoder(H);
    double prev = INFINITY;
    for (int i = 0; i <= 40; ++i)
    {
        const double r = secrecy_sum_rate(H, W, std::pow(10.0, -3.0 + 0.15 * i)).sum_bits;
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("ak_bk - closed-form cases and ordering")
{
    const AkBk s = ak_bk(scalar(2.0), 0.5, 0);
    CHECK(s.a_k == Approx(8.0).epsilon(1e-14));
    CHECK(s.b_k == 0.0);

    const AkBk d = ak_bk(identity(2), 0.5, 0);
    CHECK(d.a_k == Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(d.b_k) < 1e-15);

    CHECK_THROWS_AS(ak_bk(identity(2), 0.0, 0), DomainError);

    for (int t = 0; t < 20; ++t)
    {
        const ChannelMatrix H = sample_channel(3, 3, {7, std::uint64_t(t)});
        const double alpha = 0.05 + 0.1 * t;
        for (arma::uword k = 0; k < 3; ++k)
        {
            const AkBk ab = ak_bk(H, alpha, k);
            const arma::cx_mat Hk = remove_row(H, k).entries();
            const arma::cx_mat G = Hk.t() * Hk;
            const arma::vec lam = arma::eig_sym(G);
            const double lam_max = arma::max(lam / (lam + alpha));
            CHECK(ab.a_k >= 0.0);
            CHECK(ab.b_k >= 0.0);
            CHECK(ab.b_k <= ab.a_k * lam_max * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("rci_sinrs_via_akbk - matches direct evaluation")
{
    const SinrPair s = rci_sinrs_via_akbk(scalar(1.0), 1.0, 1.0, 0);
    CHECK(s.intended == Approx(1.0).epsilon(1e-14));
    CHECK(s.eavesdropper == 0.0);
    const SinrPair d = rci_sinrs_via_akbk(identity(2), 0.5, 0.5, 0);
    CHECK(d.intended == Approx(1.0 / (2.0 * 0.5)).epsilon(1e-14));

    for (int t = 0; t < 100; ++t)
    {
        const ChannelMatrix H = sample_channel(4, 4, {8, std::uint64_t(t)});
        const double alpha = std::pow(10.0, -2.0 + 3.0 * (t % 10) / 9.0);
        const double sigma2 = std::pow(10.0, -(t % 4));
        const PrecoderMatrix W = rci_precoder(H, alpha);
        for (arma::uword k = 0; k < 4; ++k)
        {
            const SinrPair fast = rci_sinrs_via_akbk(H, alpha, sigma2, k);
            CHECK(rel_close(fast.intended, sinr_intended(H, W, sigma2, k), 1e-9));
            CHECK(rel_close(fast.eavesdropper, sinr_eavesdropper(H, W, sigma2, k), 1e-9));
        }
    }
}

TEST_CASE("secrecy_sum_rate_pa - reductions")
{
    const ChannelMatrix H = sample_channel(4, 4, {9, 0});
    const PrecoderMatrix W = rci_precoder(H, 0.3);
    CHECK(rel_close(secrecy_sum_rate_pa(H, W, equal_power(W), 0.1).sum_bits, secrecy_sum_rate(H, W, 0.1).sum_bits,
                    1e-12));
    CHECK(secrecy_sum_rate_pa(H, W, PowerVector::from_powers(arma::zeros(4)), 0.1).sum_bits == 0.0);
    CHECK_THROWS_AS(secrecy_sum_rate_pa(H, W, PowerVector::from_powers(2.0 * equal_power(W).p()), 0.1),
                    PowerBudgetExceeded);

    const ChannelMatrix h1 = sample_channel(1, 3, {9, 1});
    const PrecoderMatrix w1 = rci_precoder(h1, 0.4);
    const double n1 = w1.column_norms_sq()(0);
    const double expected =
        std::log2(1.0 + std::norm(arma::cdot(h1.user_vector(0), w1.columns().col(0))) / (n1 * 0.25));
    CHECK(secrecy_sum_rate_pa(h1, w1, PowerVector::from_powers(arma::vec{1.0 / n1}), 0.25).sum_bits ==
          Approx(expected).epsilon(1e-12));
}

TEST_CASE("cross_gains - interference equals leakage for RCI")
{
    const ChannelMatrix H = sample_channel(5, 5, {10, 0});
    const CrossGains g = cross_gains(H, rci_precoder(H, 0.7), 0.1);
    const arma::vec ones(5, arma::fill::ones);
    for (arma::uword k = 0; k < 5; ++k)
        CHECK(rel_close(g.interference(k, ones), g.leakage(k), 1e-10));
}

TEST_CASE("SecrecyRateReport - JSON round trip")
{
    const ChannelMatrix H = sample_channel(3, 3, {11, 0});
    const SecrecyRateReport r = secrecy_sum_rate(H, rci_precoder(H, 2.0), 0.05);
    const nlohmann::json j = r;
    CHECK(j.at("per_user").size() == 3);
    CHECK(j.at("per_user")[0].contains("sinr_ke"));
    const SecrecyRateReport back = j.get<SecrecyRateReport>();
    CHECK(back.sum_bits == r.sum_bits);
    for (std::size_t k = 0; k < 3; ++k)
    {
        CHECK(back.per_user[k].sinr.intended == r.per_user[k].sinr.intended);
        CHECK(back.per_user[k].clipped == r.per_user[k].clipped);
    }
}
