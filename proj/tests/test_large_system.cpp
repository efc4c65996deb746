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

#include "rcisec/errors.hpp"
#include "rcisec/large_system.hpp"

#include <cmath>

using namespace rcisec;
using namespace rcisec::large_system;
using Catch::Approx;

namespace
{
    // Textbook forms, kept separate from the library's cancellation-free rewrites.
    // g is evaluated in long double so the cancellation stays below 1e-12 relative.
    double naive_g(double xi) { return double(0.5L * std::sqrt(1.0L + 4.0L / (long double)xi) - 0.5L); }

    double naive_rate(double xi, double rho, int K)
    {
        const double g = naive_g(xi);
        const double gp = -1.0 / (xi * xi * std::sqrt(1.0 + 4.0 / xi));
        const double beta = g + xi * gp;
        const double user = rho * g * g / (beta * (rho + (1.0 + g) * (1.0 + g)));
        const double eve = rho / ((1.0 + g) * (1.0 + g));
        return K * std::max(0.0, std::log2((1.0 + user) / (1.0 + eve)));
    }

    std::vector<double> rho_grid()
    {
        std::vector<double> out;
        for (int i = 0; i <= 12; ++i)
            out.push_back(std::pow(10.0, -2.0 + 0.5 * i));
        return out;
    }
}

TEST_CASE("g_of_xi - closed-form values")
{
    CHECK(g_of_xi(4.0 / 3.0) == Approx(0.5).epsilon(1e-15));
    CHECK(g_of_xi(0.05) == Approx(4.0).epsilon(1e-15));
    CHECK(g_of_xi(1e12) < 1e-11);
    CHECK(g_of_xi(1e12) > 0.0);
    CHECK_THROWS_AS(g_of_xi(0.0), DomainError);
    CHECK_THROWS_AS(g_of_xi(-1.0), DomainError);

    double prev = INFINITY;
    for (int i = 0; i <= 100; ++i)
    {
        const double xi = std::pow(10.0, -6.0 + 0.12 * i);
        const double g = g_of_xi(xi);
        CHECK(g == Approx(naive_g(xi)).epsilon(1e-12));
        CHECK(xi * g * (1.0 + g) == Approx(1.0).epsilon(1e-13));
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("xi_g_prime - central differences")
{
    for (long double xi : {1e-4L, 1e-2L, 0.3L, 1.0L, 7.0L, 1e3L})
    {
        const long double h = 1e-6L * xi;
        const long double fd = xi * (g_of_xi(xi + h) - g_of_xi(xi - h)) / (2.0L * h);
        CHECK(static_cast<double>(xi_g_prime(xi)) == Approx(static_cast<double>(fd)).epsilon(1e-8));
        CHECK(static_cast<double>(gamma_limit(xi)) ==
              Approx(static_cast<double>(g_of_xi(xi) + xi_g_prime(xi))).epsilon(1e-12));
    }
}

TEST_CASE("asymptotic_secrecy_sum_rate - closed-form values")
{
    CHECK(asymptotic_secrecy_sum_rate(0.3, 0.0, 4) == 0.0);
    CHECK(asymptotic_secrecy_sum_rate(1.0 / 6.0, 1.0, 4) == Approx(4.0 * std::log2(27.0 / 20.0)).epsilon(1e-12));
    CHECK(asymptotic_secrecy_sum_rate(1.0 / 6.0, 1.0, 4) == Approx(1.7318).margin(1e-4));
    CHECK(asymptotic_secrecy_sum_rate(1.0, 1.0, 4) ==
          Approx(4.0 * std::log2((5.0 + 3.0 * std::sqrt(5.0)) / 10.0)).epsilon(1e-12));
    CHECK(asymptotic_secrecy_sum_rate(1.0, 1.0, 4) == Approx(0.9101).margin(1e-4));
    CHECK_THROWS_AS(asymptotic_secrecy_sum_rate(0.0, 1.0, 4), DomainError);
    CHECK_THROWS_AS(asymptotic_secrecy_sum_rate(0.1, -1.0, 4), DomainError);

    for (double rho : rho_grid())
        for (double xi : {1e-3, 0.02, 0.4, 3.0})
            CHECK(asymptotic_secrecy_sum_rate(xi, rho, 3) == Approx(naive_rate(xi, rho, 3)).epsilon(1e-9).margin(1e-12));
}

TEST_CASE("xi_opt - values and bounds")
{
    CHECK(xi_opt(0.0) == 0.5);
    CHECK(xi_opt(1.0) == Approx(1.0 / 6.0).epsilon(1e-15));
    const double x4 = xi_opt(1e4) * 3e4;
    CHECK(x4 > 0.99);
    CHECK(x4 < 1.0);

    double prev = xi_opt(0.0);
    for (double rho : rho_grid())
    {
        const double x = xi_opt(rho);
        CHECK(x > 0.0);
        CHECK(x <= 0.5);
        CHECK(x < 1.0 / (3.0 * rho));
        CHECK(x < prev);
        prev = x;
    }
    CHECK(alpha_ls(10.0, 4) == Approx(4.0 * xi_opt(10.0)));
}

TEST_CASE("xi_opt - stationary point of the large-system rate")
{
    // long double: the step h = 1e-6 xi_opt reaches 3e-11 at rho = 1e4, where double round-off
    // in the difference quotient is of the same order as the tolerance
    for (double rho_d : rho_grid())
    {
        const long double rho = rho_d;
        const long double x = xi_opt(rho);
        const long double h = 1e-6L * x;
        const long double d =
            (asymptotic_secrecy_sum_rate(x + h, rho, 1) - asymptotic_secrecy_sum_rate(x - h, rho, 1)) / (2.0L * h);
        CHECK(std::abs(static_cast<double>(d)) < 1e-6);
    }
}

TEST_CASE("optimal_secrecy_sum_rate - consistency and optimality")
{
    CHECK(optimal_secrecy_sum_rate(0.0, 4) == 0.0);
    CHECK(optimal_secrecy_sum_rate(1.0, 4) == Approx(1.7318).margin(1e-4));
    // The gap to (K/2) log2(27 rho / 64) decays like rho^(-1/2): 0.025 bits at rho = 1e4, K = 2
    CHECK(std::abs(optimal_secrecy_sum_rate(1e4, 2) - std::log2(27.0 * 1e4 / 64.0)) < 0.03);
    CHECK(std::abs(optimal_secrecy_sum_rate(1e6, 2) - std::log2(27.0 * 1e6 / 64.0)) < 0.01);

    for (double rho : rho_grid())
    {
        const double best = optimal_secrecy_sum_rate(rho, 4);
        CHECK(best > 0.0);
        CHECK(best == Approx(asymptotic_secrecy_sum_rate(xi_opt(rho), rho, 4)).epsilon(1e-9));
        for (int i = 0; i < 1000; ++i)
        {
            const double xi = std::pow(10.0, -6.0 + 8.0 * i / 999.0);
            CHECK(asymptotic_secrecy_sum_rate(xi, rho, 4) <= best * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("optimal_secrecy_sum_rate - per-user high-SNR offset")
{
    const double target = 0.5 * std::log2(27.0 / 64.0);
    double prev_gap = INFINITY;
    for (double rho : {1e2, 1e4, 1e6, 1e8})
    {
        const double gap = std::abs(optimal_secrecy_sum_rate(rho, 1) - 0.5 * std::log2(rho) - target);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-3);
}

TEST_CASE("comparison rates - ordering and values")
{
    CHECK(sum_rate_no_secrecy(0.0, 4) == 0.0);
    CHECK(sum_rate_no_secrecy(1.0, 4) == Approx(4.0 * std::log2((1.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-14));
    CHECK(sum_rate_no_secrecy(1.0, 4) == Approx(2.77697).margin(1e-5));
    CHECK(std::abs((sum_rate_no_secrecy(1e4, 1) - optimal_secrecy_sum_rate(1e4, 1)) - 0.6246) < 0.01);

    CHECK(secrecy_rate_xi_inv_rho(1e-12, 4) < 1e-9);
    CHECK(secrecy_rate_xi_inv_rho(1.0, 4) == Approx(0.9101).margin(1e-4));
    CHECK(std::abs((optimal_secrecy_sum_rate(1e4, 1) - secrecy_rate_xi_inv_rho(1e4, 1)) - 0.3774) < 0.01);

    for (double rho : rho_grid())
    {
        const double opt = optimal_secrecy_sum_rate(rho, 4);
        CHECK(sum_rate_no_secrecy(rho, 4) >= opt);
        CHECK(secrecy_rate_xi_inv_rho(rho, 4) >= 0.0);
        CHECK(secrecy_rate_xi_inv_rho(rho, 4) <= opt * (1.0 + 1e-12));
        CHECK(secrecy_rate_xi_inv_rho(rho, 4) == Approx(asymptotic_secrecy_sum_rate(1.0 / rho, rho, 4)).epsilon(1e-9));
    }
}

TEST_CASE("comparison_limits - channel inversion and matched filter")
{
    const ComparisonLimits one = comparison_limits(1.0);
    CHECK(one.mf_unclipped_log_arg == Approx(std::log2(0.75)).epsilon(1e-14));
    CHECK(one.mf_per_antenna == 0.0);
    CHECK(one.ci_per_antenna == 0.0);
    CHECK(comparison_limits(0.0).mf_unclipped_log_arg == 0.0);
    CHECK(asymptotic_secrecy_sum_rate(1e-6, 10.0, 1) < 0.05);
    // matched-filter end of the xi axis
    CHECK(asymptotic_secrecy_sum_rate(1e8, 1.0, 1) < 1e-6);
}

TEST_CASE("asymptote_report - closed-form constants")
{
    const AsymptoteReport a = asymptote_report();
    CHECK(a.secrecy_loss_bits_per_antenna == Approx(3.0 - 1.5 * std::log2(3.0)).epsilon(1e-14));
    CHECK(a.gain_vs_xi_inv_rho_bits == Approx(1.5 * std::log2(3.0) - 2.0).epsilon(1e-14));
    CHECK(a.gain_vs_xi_inv_rho_bits == Approx(0.37744).margin(1e-5));
    CHECK(a.power_loss_db == Approx(3.74816).margin(1e-5));
    CHECK(std::abs(a.power_loss_db - 3.747) <= 1e-2);
    CHECK(a.power_loss_db == Approx(20.0 * a.secrecy_loss_bits_per_antenna * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("evaluate_point - fields")
{
    const LargeSystemPoint p = evaluate_point(1.0, 1.0 / 6.0, 4);
    CHECK(p.g == Approx(naive_g(1.0 / 6.0)).epsilon(1e-12));
    CHECK(p.rate_bits == Approx(1.7318).margin(1e-4));
    CHECK(p.rate_bits >= 0.0);
}
