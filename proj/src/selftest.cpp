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

#include "rcisec/selftest.hpp"
#include "rcisec/channel.hpp"
#include "rcisec/csv_io.hpp"
#include "rcisec/errors.hpp"
#include "rcisec/experiments.hpp"
#include "rcisec/large_system.hpp"
#include "rcisec/power_alloc.hpp"
#include "rcisec/precoder.hpp"
#include "rcisec/rates.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace rcisec
{
    namespace
    {
        struct PropertyFailed
        {
            std::string property;
        };

        void expect(bool ok, const std::string &property)
        {
            if (!ok)
                throw PropertyFailed{property};
        }

        bool close(double a, double b, double rel, double abs = 0.0)
        {
            return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
        }

        constexpr std::uint64_t seed = 20260101;

        void channel_suite(const SelftestHooks &)
        {
            const ChannelMatrix a = sample_channel(4, 6, {seed, 3});
            expect(a == sample_channel(4, 6, {seed, 3}), "same stream gives the same channel");
            expect(!(a == sample_channel(4, 6, {seed, 4})), "different trials give different channels");
            expect(a.num_users() == 4 && a.num_antennas() == 6, "channel shape is K x M");

            const ChannelMatrix big = sample_channel(64, 64, {seed, 0});
            const double power = arma::accu(arma::square(arma::abs(big.entries()))) / (64.0 * 64.0);
            expect(std::abs(power - 1.0) < 0.05, "entries have unit average power");

            for (arma::uword k = 0; k < 4; ++k)
                expect(insert_row(remove_row(a, k), k, a.entries().row(k)) == a, "remove_row/insert_row round trip");

            std::stringstream ss;
            write_channel_csv(ss, a);
            expect(read_channel_csv(ss) == a, "channel CSV round trip");
            expect(close(db_to_linear(linear_to_db(3.7)), 3.7, 1e-14), "dB conversion round trip");
        }

        void precoder_suite(const SelftestHooks &)
        {
            for (int t = 0; t < 5; ++t)
            {
                const ChannelMatrix H = sample_channel(4, 4, {seed, std::uint64_t(t)});
                const double alpha = 0.1 * (t + 1);
                const PrecoderMatrix W = rci_precoder(H, alpha);
                const PrecoderMatrix Wd = rci_precoder_dual(H, alpha);
                expect(arma::norm(W.columns() - Wd.columns(), "fro") <= 1e-9 * arma::norm(W.columns(), "fro"),
                       "Gram and dual forms of RCI agree");
                expect(close(W.gamma(), power_normalization(H, alpha), 1e-9), "gamma matches the spectral formula");
                const arma::cx_mat HW = H.entries() * W.columns();
                expect(arma::norm(HW - HW.t(), "fro") <= 1e-10 * arma::norm(HW, "fro"), "H W is Hermitian");

                const arma::cx_mat HC = H.entries() * ci_precoder(H).columns();
                expect(arma::norm(HC - arma::eye<arma::cx_mat>(4, 4), "fro") < 1e-8, "channel inversion gives H W = I");
                expect(close(equal_power(W).trace_power(W), 1.0, 1e-12), "equal power meets the budget");
            }
        }

        void rates_suite(const SelftestHooks &)
        {
            for (int t = 0; t < 10; ++t)
            {
                const ChannelMatrix H = sample_channel(4, 4, {seed, std::uint64_t(t)});
                const double alpha = t % 2 ? 0.05 : 1.0;
                const double sigma2 = 0.1;
                const PrecoderMatrix W = rci_precoder(H, alpha);
                for (arma::uword k = 0; k < 4; ++k)
                {
                    const SinrPair fast = rci_sinrs_via_akbk(H, alpha, sigma2, k);
                    expect(close(fast.intended, sinr_intended(H, W, sigma2, k), 1e-9), "closed-form intended SINR");
                    expect(close(fast.eavesdropper, sinr_eavesdropper(H, W, sigma2, k), 1e-9),
                           "closed-form eavesdropper SINR");
                }
                const SecrecyRateReport r = secrecy_sum_rate(H, W, sigma2);
                expect(r.sum_bits >= 0.0 && r.sum_bits >= r.unclipped_sum_bits() - 1e-12, "clipping is nonnegative");
                expect(close(secrecy_sum_rate_pa(H, W, equal_power(W), sigma2).sum_bits, r.sum_bits, 1e-12),
                       "equal power reproduces the normalized rate");
            }
            const ChannelMatrix h1 = sample_channel(1, 3, {seed, 0});
            expect(sinr_eavesdropper(h1, rci_precoder(h1, 0.3), 0.5, 0) == 0.0, "a single user has no eavesdropper");
        }

        void large_system_suite(const SelftestHooks &hooks)
        {
            const auto g = hooks.g_of_xi ? hooks.g_of_xi : [](double xi) { return large_system::g_of_xi(xi); };
            for (double xi : {1e-3, 0.1, 0.5, 1.0, 3.0, 100.0})
            {
                const double gv = g(xi);
                expect(close(xi * gv * (1.0 + gv), 1.0, 1e-12), "g solves xi g (1 + g) = 1");
            }
            expect(large_system::xi_opt(0.0) == 0.5, "xi_opt(0) = 1/2");
            for (double rho : {0.01, 1.0, 10.0, 1e4})
            {
                const double xo = large_system::xi_opt(rho);
                const double best = large_system::optimal_secrecy_sum_rate(rho, 4);
                expect(close(best, large_system::asymptotic_secrecy_sum_rate(xo, rho, 4), 1e-9),
                       "closed-form optimum equals the rate at xi_opt");
                for (int i = 0; i <= 200; ++i)
                {
                    const double xi = std::pow(10.0, -4.0 + 6.0 * i / 200.0);
                    expect(large_system::asymptotic_secrecy_sum_rate(xi, rho, 4) <= best + 1e-12,
                           "xi_opt maximizes the large-system rate");
                }
            }
            const large_system::AsymptoteReport a = large_system::asymptote_report();
            expect(close(a.secrecy_loss_bits_per_antenna, 3.0 - 1.5 * std::log2(3.0), 1e-12), "secrecy loss constant");
            expect(close(a.gain_vs_xi_inv_rho_bits, 1.5 * std::log2(3.0) - 2.0, 1e-12), "gain constant");
            expect(std::abs(a.power_loss_db - 3.747) < 1e-2, "power loss constant");
        }

        void power_alloc_suite(const SelftestHooks &)
        {
            for (double z0 : {0.01, 1.0, 30.0})
            {
                const TangentCoeffs c = tangent_coeffs(z0);
                expect(close(c.bound(z0), std::log1p(z0), 1e-12, 1e-14), "tangent bound is tight at the anchor");
                for (double z : {1e-3, 0.5, 2.0, 100.0})
                    expect(c.bound(z) <= std::log1p(z) + 1e-12, "tangent bound lies below log(1 + z)");
            }
            for (double x : {-3.0, 0.0, 2.0})
            {
                const double h = 1e-4;
                const auto t = leakage_term(x, 0.7, 0.1);
                const double fd = (leakage_term(x + h, 0.7, 0.1).value - 2.0 * t.value +
                                   leakage_term(x - h, 0.7, 0.1).value) / (h * h);
                expect(t.second <= 0.0 && close(t.second, fd, 1e-5), "leakage term is concave");
            }
            for (int t = 0; t < 4; ++t)
            {
                const ChannelMatrix H = sample_channel(4, 4, {seed, std::uint64_t(t)});
                const double alpha = large_system::alpha_ls(10.0, 4);
                const PowerAllocationResult r = sca_power_allocation(H, alpha, 0.1);
                const auto &tr = r.diagnostics.objective_trace;
                for (std::size_t i = 1; i < tr.size(); ++i)
                    expect(tr[i] >= tr[i - 1] - 1e-9, "SCA objective trace is nondecreasing");
                expect(r.report.sum_bits >= secrecy_sum_rate(H, rci_precoder(H, alpha), 0.1).sum_bits - 1e-9,
                       "power allocation never loses to equal power");
                expect(r.powers.trace_power(rci_precoder(H, alpha)) <= 1.0 + power_budget_slack,
                       "power allocation meets the budget");
            }
        }

        void experiments_suite(const SelftestHooks &)
        {
            ExperimentConfig cfg;
            cfg.K = cfg.M = 2;
            cfg.trials = 20;
            cfg.master_seed = seed;
            cfg.threads = 1;
            cfg.snr_grid_db = {0.0, 10.0};
            cfg.schemes = {Scheme::RciLs, Scheme::Ci};
            const auto a = scheme_comparison_sweep(cfg);
            cfg.threads = 2;
            const auto b = scheme_comparison_sweep(cfg);
            for (std::size_t s = 0; s < a.size(); ++s)
                for (std::size_t i = 0; i < a[s].per_point.size(); ++i)
                    expect(a[s].per_point[i].mean_rate_bits == b[s].per_point[i].mean_rate_bits,
                           "sweeps are independent of the thread count");

            std::stringstream ss;
            write_sweep_csv(ss, a);
            const auto back = read_sweep_csv(ss);
            expect(back.size() == a.size() && back[0].per_point[1].mean_rate_bits == a[0].per_point[1].mean_rate_bits &&
                       back[0].metadata == a[0].metadata,
                   "sweep CSV round trip");

            for (int t = 0; t < 3; ++t)
            {
                const PaTrialRates r = power_allocation_trial(sample_channel(3, 3, {seed, std::uint64_t(t)}), 0.1);
                expect(r.joint >= r.fixed_alpha - dominance_tol_bits &&
                           r.fixed_alpha >= r.equal_power - dominance_tol_bits,
                       "dominance chain joint >= fixed-alpha PA >= equal power");
            }

            const CcdfTable c = ccdf_alpha_penalty(3, 10.0, 10, seed, {0.0, 0.01, 0.05}, 1);
            for (std::size_t i = 1; i < c.ccdf.size(); ++i)
                expect(c.ccdf[i] <= c.ccdf[i - 1], "CCDF is nonincreasing");
            expect(c.mean_diff >= 0.0 && c.mean_diff < 1.0, "normalized penalty lies in [0, 1)");
        }

        using SuiteFn = void (*)(const SelftestHooks &);
        const std::vector<std::pair<std::string, SuiteFn>> &registry()
        {
            static const std::vector<std::pair<std::string, SuiteFn>> suites{
                {"channel", channel_suite},
                {"precoder", precoder_suite},
                {"rates", rates_suite},
                {"large-system", large_system_suite},
                {"power-alloc", power_alloc_suite},
                {"experiments", experiments_suite},
            };
            return suites;
        }
    }

    std::vector<std::string> selftest_suites()
    {
        std::vector<std::string> out;
        for (const auto &[name, fn] : registry())
            out.push_back(name);
        return out;
    }

    int run_selftest(std::ostream &out, const std::vector<std::string> &suites, const SelftestHooks &hooks)
    {
        for (const std::string &s : suites)
        {
            const auto names = selftest_suites();
            if (std::find(names.begin(), names.end(), s) == names.end())
                throw ConfigError("suite: unknown selftest suite '" + s + "'");
        }
        bool all_ok = true;
        for (const auto &[name, fn] : registry())
        {
            if (!suites.empty() && std::find(suites.begin(), suites.end(), name) == suites.end())
                continue;
            try
            {
                fn(hooks);
                out << "selftest " << name << ": PASS\n";
            }
            catch (const PropertyFailed &f)
            {
                out << "selftest " << name << ": FAIL (" << f.property << ")\n";
                all_ok = false;
            }
            catch (const std::exception &e)
            {
                out << "selftest " << name << ": FAIL (unexpected error: " << e.what() << ")\n";
                all_ok = false;
            }
        }
        return all_ok ? 0 : 1;
    }
}
