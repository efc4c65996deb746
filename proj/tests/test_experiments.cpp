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
#include "rcisec/experiments.hpp"
#include "rcisec/large_system.hpp"
#include "rcisec/rates.hpp"

#include <cmath>

using namespace rcisec;
using Catch::Approx;

namespace
{
    // E[log2(1 + rho X)] for X ~ Exp(1), composite Simpson rule on [0, 60] with 10^6 intervals
    double scalar_rate_oracle(double rho)
    {
        const int n = 1000000;
        const double a = 0.0, b = 60.0, h = (b - a) / n;
        auto f = [&](double x) { return std::log2(1.0 + rho * x) * std::exp(-x); };
        double s = f(a) + f(b);
        for (int i = 1; i < n; ++i)
            s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    }

    double rate_at(const ChannelMatrix &H, double alpha, double sigma2)
    {
        return secrecy_sum_rate(H, rci_precoder(H, alpha), sigma2).sum_bits;
    }

    AlphaRule constant_alpha(double alpha)
    {
        return [alpha](double, int, const ChannelMatrix &) { return alpha; };
    }

    AlphaRule large_system_alpha()
    {
        return [](double rho, int K, const ChannelMatrix &) { return large_system::alpha_ls(rho, K); };
    }
}

TEST_CASE("scheme names - round trip")
{
    for (Scheme s : {Scheme::RciLs, Scheme::RciFsAvg, Scheme::RciFsPerChannel, Scheme::Ci, Scheme::Mf,
                     Scheme::RciXiInvRho, Scheme::RciPaFixedAlpha, Scheme::RciPaJoint, Scheme::RciNoSecrecy})
        CHECK(parse_scheme(scheme_name(s)) == s);
    CHECK(scheme_name(Scheme::RciLs) == "rci-ls");
    CHECK_THROWS_AS(parse_scheme("zf"), ConfigError);
}

TEST_CASE("ExperimentConfig - validation names the field")
{
    ExperimentConfig c;
    c.trials = 0;
    CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("trials"));
    c = {};
    c.K = 5;
    c.M = 4;
    c.schemes = {Scheme::Ci};
    CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("ci"));
    c = {};
    c.snr_grid_db = {};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.K = 0;
    CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("k"));
}

TEST_CASE("run_trials - ordered results and failure context")
{
    const std::vector<double> r = run_trials(50, 3, [](int t) { return double(t * t); });
    for (int t = 0; t < 50; ++t)
        CHECK(r[std::size_t(t)] == double(t * t));
    CHECK_THROWS_WITH(run_trials(10, 2, [](int t) -> double {
                          if (t == 7 || t == 9)
                              throw DomainError("boom");
                          return 0.0;
                      }),
                      Catch::Matchers::ContainsSubstring("trial 7"));
}

TEST_CASE("average_secrecy_sum_rate - single antenna matches quadrature")
{
    ExperimentConfig c;
    c.K = c.M = 1;
    c.trials = 4000;
    c.master_seed = 77;
    c.snr_grid_db = {0.0, 10.0};
    const SweepResult r = average_secrecy_sum_rate(c, constant_alpha(0.3));
    REQUIRE(r.per_point.size() == 2);
    for (const SweepPoint &p : r.per_point)
    {
        const double oracle = scalar_rate_oracle(db_to_linear(p.snr_db));
        CHECK(p.std_err > 0.0);
        CHECK(p.n == 4000);
        CHECK(std::abs(p.mean_rate_bits - oracle) < 3.0 * p.std_err);
    }
}

TEST_CASE("average_secrecy_sum_rate - deterministic with one trial")
{
    ExperimentConfig c;
    c.K = c.M = 3;
    c.trials = 1;
    c.master_seed = 5;
    const SweepResult a = average_secrecy_sum_rate(c, large_system_alpha());
    const SweepResult b = average_secrecy_sum_rate(c, large_system_alpha());
    CHECK(a.per_point[0].mean_rate_bits == b.per_point[0].mean_rate_bits);
    CHECK(a.per_point[0].std_err == 0.0);
    const ChannelMatrix H = trial_channel(c, 0);
    CHECK(a.per_point[0].mean_rate_bits == rate_at(H, large_system::alpha_ls(10.0, 3), 0.1));
}

TEST_CASE("average_secrecy_sum_rate - approaches the large-system rate at K = 32")
{
    ExperimentConfig c;
    c.K = c.M = 32;
    c.trials = 40;
    c.master_seed = 11;
    const SweepResult r = average_secrecy_sum_rate(c, large_system_alpha());
    const double ls = large_system::optimal_secrecy_sum_rate(10.0, 32);
    CHECK(std::abs(r.per_point[0].mean_rate_bits - ls) / ls < 0.05);
}

TEST_CASE("golden_section_log_alpha - locates a smooth maximum and reports failures")
{
    const double target = 0.37;
    auto f = [&](double a) { return -std::pow(std::log(a / target), 2.0); };
    const AlphaSearchResult r = golden_section_log_alpha(f, 4);
    CHECK(r.alpha == Approx(target).epsilon(1e-3));
    CHECK_FALSE(r.flat);

    try
    {
        golden_section_log_alpha([](double a) { return -a; }, 4);
        FAIL("expected BracketFailure");
    }
    catch (const BracketFailure &e)
    {
        CHECK(e.best_x == Approx(4e-4));
        CHECK(e.best_value == Approx(-4e-4));
    }

    const AlphaSearchResult flat = golden_section_log_alpha([](double) { return 1.0; }, 4);
    CHECK(flat.flat);
    CHECK(flat.rate_bits == 1.0);
}

TEST_CASE("optimize_alpha_average - agrees with a dense-grid oracle")
{
    const int K = 4, trials = 150;
    const double rho = 10.0;
    const AlphaSearchResult r = optimize_alpha_average(K, K, rho, trials, 3, 0);

    std::vector<ChannelMatrix> hs;
    for (int t = 0; t < trials; ++t)
        hs.push_back(sample_channel(K, K, {3, std::uint64_t(t)}));
    auto mean_at = [&](double alpha)
    {
        double s = 0.0;
        for (const auto &H : hs)
            s += rate_at(H, alpha, 1.0 / rho);
        return s / trials;
    };
    double best = -INFINITY, best_alpha = 0.0;
    for (int i = 0; i <= 600; ++i)
    {
        const double alpha = std::exp(std::log(0.01) + (std::log(2.0) - std::log(0.01)) * i / 600.0);
        const double v = mean_at(alpha);
        if (v > best)
        {
            best = v;
            best_alpha = alpha;
        }
    }
    CHECK(r.rate_bits >= best - 1e-6);
    CHECK(r.rate_bits == Approx(mean_at(r.alpha)).epsilon(1e-14));
    CHECK(std::abs(std::log(r.alpha / best_alpha)) < 0.02);
}

TEST_CASE("optimize_alpha_average - gap to the large-system alpha shrinks with K")
{
    const double rho = 10.0;
    auto gap = [&](int K, int trials)
    {
        const double a = optimize_alpha_average(K, K, rho, trials, 21, 0).alpha;
        return std::abs(a - large_system::alpha_ls(rho, K)) / large_system::alpha_ls(rho, K);
    };
    CHECK(gap(32, 100) < gap(4, 1000));
}

TEST_CASE("optimize_alpha_average - one trial equals the per-channel optimum")
{
    const ChannelMatrix H = sample_channel(3, 3, {9, 0});
    const AlphaSearchResult avg = optimize_alpha_average(3, 3, 10.0, 1, 9, 1);
    const AlphaSearchResult per = optimize_alpha_per_channel(H, 0.1);
    CHECK(avg.rate_bits <= per.rate_bits + 1e-12);
    CHECK(avg.rate_bits == Approx(per.rate_bits).epsilon(1e-6));
}

TEST_CASE("optimize_alpha_per_channel - degenerate and random channels")
{
    const ChannelMatrix I2(arma::eye<arma::cx_mat>(2, 2));
    const AlphaSearchResult id = optimize_alpha_per_channel(I2, 0.25);
    CHECK(id.flat);
    CHECK(id.rate_bits == Approx(secrecy_sum_rate(I2, ci_precoder(I2), 0.25).sum_bits).epsilon(1e-12));

    for (int t = 0; t < 20; ++t)
    {
        const ChannelMatrix H = sample_channel(4, 4, {10, std::uint64_t(t)});
        double r_fs = 0.0;
        try
        {
            r_fs = optimize_alpha_per_channel(H, 0.1).rate_bits;
        }
        catch (const BracketFailure &e)
        {
            r_fs = e.best_value;
        }
        CHECK(r_fs >= rate_at(H, large_system::alpha_ls(10.0, 4), 0.1) - 1e-9);
    }

    const AlphaSearchResult quiet = optimize_alpha_per_channel(sample_channel(4, 4, {10, 0}), 1e14);
    CHECK(quiet.flat);
    CHECK(quiet.rate_bits < 1e-9);
    CHECK_THROWS_AS(optimize_alpha_per_channel(ChannelMatrix(arma::cx_mat(2, 2, arma::fill::zeros)), 0.1), ZeroChannel);
}

TEST_CASE("ccdf_alpha_penalty - table invariants")
{
    const CcdfTable t = ccdf_alpha_penalty(4, 10.0, 100, 4, {0.05, 0.0, 0.01, 0.2}, 0);
    REQUIRE(t.thresholds.size() == 4);
    CHECK(std::is_sorted(t.thresholds.begin(), t.thresholds.end()));
    CHECK(t.ccdf[0] <= 1.0);
    for (std::size_t i = 1; i < t.ccdf.size(); ++i)
        CHECK(t.ccdf[i] <= t.ccdf[i - 1]);
    CHECK(t.mean_diff >= 0.0);
    CHECK(t.mean_diff < 0.1);
    CHECK(t.trials_used + t.skipped_zero_rate == 100);

    const CcdfTable zero = ccdf_alpha_penalty(4, 10.0, 100, 4, {0.0}, 0);
    CHECK(zero.ccdf[0] <= 1.0);
    CHECK(zero.ccdf[0] > 0.0);
}

TEST_CASE("scheme_comparison_sweep - shared draws and orderings")
{
    ExperimentConfig c;
    c.K = c.M = 32;
    c.trials = 10;
    c.master_seed = 12;
    c.snr_grid_db = {0.0, 10.0, 20.0, 30.0};
    c.schemes = {Scheme::RciLs, Scheme::Ci, Scheme::RciNoSecrecy, Scheme::RciXiInvRho};
    const auto r = scheme_comparison_sweep(c);
    REQUIRE(r.size() == 4);
    for (std::size_t i = 0; i < c.snr_grid_db.size(); ++i)
    {
        CHECK(r[0].per_point[i].mean_rate_bits >= r[1].per_point[i].mean_rate_bits);
        CHECK(r[2].per_point[i].mean_rate_bits >= r[0].per_point[i].mean_rate_bits);
        CHECK(r[0].per_point[i].std_err >= 0.0);
    }
    CHECK(r[0].metadata.at("k") == "32");
    CHECK(r[0].metadata.at("schemes") == "rci-ls,ci,rci-no-secrecy,rci-xi-inv-rho");

    ExperimentConfig q;
    q.K = q.M = 3;
    q.trials = 20;
    q.snr_grid_db = {-60.0};
    q.schemes = {Scheme::RciLs, Scheme::RciFsAvg, Scheme::RciFsPerChannel, Scheme::Ci, Scheme::Mf,
                 Scheme::RciXiInvRho, Scheme::RciPaFixedAlpha, Scheme::RciPaJoint, Scheme::RciNoSecrecy};
    for (const SweepResult &s : scheme_comparison_sweep(q))
        CHECK(s.per_point[0].mean_rate_bits < 1e-4);
}

TEST_CASE("scheme_comparison_sweep - independent of the thread count")
{
    ExperimentConfig c;
    c.K = 3;
    c.M = 4;
    c.trials = 30;
    c.master_seed = 13;
    c.snr_grid_db = {5.0, 15.0};
    c.schemes = {Scheme::RciLs, Scheme::Mf, Scheme::RciFsPerChannel};
    c.threads = 1;
    const auto a = scheme_comparison_sweep(c);
    c.threads = 4;
    const auto b = scheme_comparison_sweep(c);
    for (std::size_t s = 0; s < a.size(); ++s)
        for (std::size_t i = 0; i < a[s].per_point.size(); ++i)
        {
            CHECK(a[s].per_point[i].mean_rate_bits == b[s].per_point[i].mean_rate_bits);
            CHECK(a[s].per_point[i].std_err == b[s].per_point[i].std_err);
        }
}

TEST_CASE("power_allocation_sweep - dominance and the benchmark line")
{
    ExperimentConfig c;
    c.K = c.M = 4;
    c.trials = 20;
    c.master_seed = 14;
    c.snr_grid_db = {0.0, 20.0};
    const auto r = power_allocation_sweep(c);
    REQUIRE(r.size() == 4);
    CHECK(r[0].scheme == "rci-ep");
    CHECK(r[1].scheme == "rci-pa-fixed-alpha");
    CHECK(r[2].scheme == "rci-pa-joint");
    CHECK(r[3].scheme == "misome-bound");
    for (std::size_t i = 0; i < 2; ++i)
    {
        CHECK(r[1].per_point[i].extra.at("dominance_violations") == 0.0);
        CHECK(r[2].per_point[i].extra.at("dominance_violations") == 0.0);
        CHECK(r[1].per_point[i].mean_rate_bits >= r[0].per_point[i].mean_rate_bits);
        CHECK(r[2].per_point[i].mean_rate_bits >= r[1].per_point[i].mean_rate_bits - 1e-6);
    }
    CHECK(r[3].per_point[0].mean_rate_bits == 0.0);
    CHECK(r[3].per_point[1].mean_rate_bits == Approx(0.5 * std::log2(100.0)));
}

TEST_CASE("power_allocation_trial - dominance chain")
{
    for (int t = 0; t < 10; ++t)
    {
        const PaTrialRates r = power_allocation_trial(sample_channel(4, 4, {15, std::uint64_t(t)}), 0.1);
        CHECK(r.fixed_alpha >= r.equal_power - dominance_tol_bits);
        CHECK(r.joint >= r.fixed_alpha - dominance_tol_bits);
    }
}
