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

#include "rcisec/experiments.hpp"
#include "rcisec/csv_io.hpp"
#include "rcisec/errors.hpp"
#include "rcisec/large_system.hpp"
#include "rcisec/rates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

namespace rcisec
{
    namespace
    {
        const std::vector<std::pair<Scheme, const char *>> scheme_names{
            {Scheme::RciLs, "rci-ls"},
            {Scheme::RciFsAvg, "rci-fs-avg"},
            {Scheme::RciFsPerChannel, "rci-fs-per-channel"},
            {Scheme::Ci, "ci"},
            {Scheme::Mf, "mf"},
            {Scheme::RciXiInvRho, "rci-xi-inv-rho"},
            {Scheme::RciPaFixedAlpha, "rci-pa-fixed-alpha"},
            {Scheme::RciPaJoint, "rci-pa-joint"},
            {Scheme::RciNoSecrecy, "rci-no-secrecy"},
        };

        int resolve_threads(int threads)
        {
            if (threads > 0)
                return threads;
            return std::max(1u, std::thread::hardware_concurrency());
        }

        template <class R>
        std::vector<R> parallel_trials(int trials, int threads, const std::function<R(int)> &f)
        {
            std::vector<R> out(std::size_t(std::max(trials, 0)));
            std::vector<std::exception_ptr> errors(out.size());
            std::atomic<int> next{0};
            auto worker = [&]
            {
                for (int t = next++; t < trials; t = next++)
                {
                    try
                    {
                        out[std::size_t(t)] = f(t);
                    }
                    catch (...)
                    {
                        errors[std::size_t(t)] = std::current_exception();
                    }
                }
            };
            const int n = std::min(resolve_threads(threads), std::max(trials, 1));
            if (n == 1)
                worker();
            else
            {
                std::vector<std::thread> pool;
                pool.reserve(std::size_t(n));
                for (int i = 0; i < n; ++i)
                    pool.emplace_back(worker);
                for (auto &th : pool)
                    th.join();
            }
            for (std::size_t t = 0; t < errors.size(); ++t)
            {
                if (!errors[t])
                    continue;
                try
                {
                    std::rethrow_exception(errors[t]);
                }
                catch (const std::exception &e)
                {
                    throw std::runtime_error("trial " + std::to_string(t) + ": " + e.what());
                }
            }
            return out;
        }

        // Mean and standard error, summed in trial order.
        SweepPoint summarize(double snr_db, const std::vector<double> &x)
        {
            SweepPoint pt;
            pt.snr_db = snr_db;
            pt.n = int(x.size());
            if (x.empty())
                return pt;
            double sum = 0.0;
            for (double v : x)
                sum += v;
            pt.mean_rate_bits = sum / double(x.size());
            if (x.size() > 1)
            {
                double ss = 0.0;
                for (double v : x)
                    ss += (v - pt.mean_rate_bits) * (v - pt.mean_rate_bits);
                pt.std_err = std::sqrt(ss / double(x.size() - 1) / double(x.size()));
            }
            return pt;
        }

        double rci_secrecy_rate(const ChannelMatrix &H, double alpha, double sigma2)
        {
            return secrecy_sum_rate(H, rci_precoder(H, alpha), sigma2).sum_bits;
        }

        std::vector<ChannelMatrix> draw_channels(int K, int M, int trials, std::uint64_t seed)
        {
            std::vector<ChannelMatrix> out;
            out.reserve(std::size_t(trials));
            for (int t = 0; t < trials; ++t)
                out.push_back(sample_channel(arma::uword(K), arma::uword(M), RngSpec{seed, std::uint64_t(t)}));
            return out;
        }

        AlphaSearchResult average_search(const std::vector<ChannelMatrix> &channels, int K, double rho, int threads,
                                         const AlphaSearchOptions &options)
        {
            const double sigma2 = 1.0 / rho;
            const int trials = int(channels.size());
            auto objective = [&](double alpha)
            {
                const std::vector<double> r = parallel_trials<double>(
                    trials, threads, [&](int t) { return rci_secrecy_rate(channels[std::size_t(t)], alpha, sigma2); });
                double sum = 0.0;
                for (double v : r)
                    sum += v;
                return sum / double(trials);
            };
            return golden_section_log_alpha(objective, K, options);
        }
    }

    std::string scheme_name(Scheme s)
    {
        for (const auto &[scheme, name] : scheme_names)
            if (scheme == s)
                return name;
        throw ConfigError("unknown scheme");
    }

    Scheme parse_scheme(const std::string &name)
    {
        for (const auto &[scheme, n] : scheme_names)
            if (name == n)
                return scheme;
        throw ConfigError("schemes: unknown scheme '" + name + "'");
    }

    void ExperimentConfig::validate() const
    {
        if (K < 1)
            throw ConfigError("k: must be a positive integer");
        if (M < 1)
            throw ConfigError("m: must be a positive integer");
        if (trials < 1)
            throw ConfigError("trials: must be at least 1");
        if (threads < 0)
            throw ConfigError("threads: must be nonnegative");
        if (snr_grid_db.empty())
            throw ConfigError("snr_db: the SNR grid is empty");
        for (double s : snr_grid_db)
            if (!std::isfinite(s))
                throw ConfigError("snr_db: SNR values must be finite");
        if (schemes.empty())
            throw ConfigError("schemes: no scheme selected");
        for (Scheme s : schemes)
            if (s == Scheme::Ci && K > M)
                throw ConfigError("schemes: ci requires k <= m");
    }

    std::map<std::string, std::string> config_metadata(const ExperimentConfig &config)
    {
        std::string grid, schemes;
        for (double s : config.snr_grid_db)
            grid += (grid.empty() ? "" : ",") + format_number(s);
        for (Scheme s : config.schemes)
            schemes += (schemes.empty() ? "" : ",") + scheme_name(s);
        return {{"k", std::to_string(config.K)},
                {"m", std::to_string(config.M)},
                {"trials", std::to_string(config.trials)},
                {"seed", std::to_string(config.master_seed)},
                {"threads", std::to_string(resolve_threads(config.threads))},
                {"snr_db", grid},
                {"schemes", schemes},
                {"version", version_string}};
    }

    ChannelMatrix trial_channel(const ExperimentConfig &config, int trial)
    {
        return sample_channel(arma::uword(config.K), arma::uword(config.M),
                              RngSpec{config.master_seed, std::uint64_t(trial)});
    }

    std::vector<double> run_trials(int trials, int threads, const std::function<double(int)> &f)
    {
        return parallel_trials<double>(trials, threads, f);
    }

    SweepResult average_secrecy_sum_rate(const ExperimentConfig &config, const AlphaRule &rule)
    {
        config.validate();
        SweepResult out;
        out.scheme = "rci";
        out.metadata = config_metadata(config);
        out.metadata.erase("schemes");
        const std::vector<ChannelMatrix> channels = draw_channels(config.K, config.M, config.trials, config.master_seed);
        for (double snr_db : config.snr_grid_db)
        {
            const double rho = db_to_linear(snr_db);
            const std::vector<double> r = run_trials(config.trials, config.threads, [&](int t)
            {
                const ChannelMatrix &H = channels[std::size_t(t)];
                return rci_secrecy_rate(H, rule(rho, config.K, H), 1.0 / rho);
            });
            out.per_point.push_back(summarize(snr_db, r));
        }
        return out;
    }

    AlphaSearchResult golden_section_log_alpha(const std::function<double(double)> &f, int K,
                                               const AlphaSearchOptions &options)
    {
        if (K < 1)
            throw DomainError("golden_section_log_alpha requires K >= 1");
        if (!(options.lo_factor > 0.0) || !(options.hi_factor > options.lo_factor) || options.grid_points < 3)
            throw DomainError("invalid alpha search bracket");
        const double u_lo = std::log(options.lo_factor * K), u_hi = std::log(options.hi_factor * K);
        const int n = options.grid_points;

        AlphaSearchResult best;
        best.rate_bits = -std::numeric_limits<double>::infinity();
        auto eval = [&](double u)
        {
            const double alpha = std::exp(u);
            const double v = f(alpha);
            ++best.evaluations;
            if (v > best.rate_bits)
            {
                best.rate_bits = v;
                best.alpha = alpha;
            }
            return v;
        };

        std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
        {
            u[std::size_t(i)] = u_lo + (u_hi - u_lo) * double(i) / double(n - 1);
            v[std::size_t(i)] = eval(u[std::size_t(i)]);
        }
        const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        if (*mx - *mn <= options.flat_tol)
        {
            best.flat = true;
            return best;
        }
        const std::size_t i = std::size_t(mx - v.begin());
        if (i == 0 || i + 1 == std::size_t(n))
            throw BracketFailure("alpha search: maximum on the bracket boundary", best.alpha, best.rate_bits);

        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        const double width_tol = std::log1p(options.rel_tol);
        double a = u[i - 1], b = u[i + 1];
        double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
        double fc = eval(c), fd = eval(d);
        while (b - a > width_tol)
        {
            if (fc >= fd)
            {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = eval(c);
            }
            else
            {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = eval(d);
            }
        }
        return best;
    }

    AlphaSearchResult optimize_alpha_average(int K, int M, double rho, int trials, std::uint64_t seed, int threads,
                                             const AlphaSearchOptions &options)
    {
        if (K < 1 || M < 1)
            throw DimensionError("optimize_alpha_average requires K, M >= 1");
        if (trials < 1)
            throw DomainError("optimize_alpha_average requires trials >= 1");
        if (!(rho > 0.0))
            throw DomainError("optimize_alpha_average requires rho > 0");
        return average_search(draw_channels(K, M, trials, seed), K, rho, threads, options);
    }

    AlphaSearchResult optimize_alpha_per_channel(const ChannelMatrix &H, double sigma2,
                                                 const AlphaSearchOptions &options)
    {
        if (H.is_zero())
            throw ZeroChannel("optimize_alpha_per_channel: zero channel");
        if (!(sigma2 > 0.0))
            throw DomainError("optimize_alpha_per_channel requires sigma2 > 0");
        const int K = int(H.num_users());
        const double alpha_ls = large_system::alpha_ls(1.0 / sigma2, K);
        const double rate_ls = rci_secrecy_rate(H, alpha_ls, sigma2);
        auto f = [&](double alpha) { return rci_secrecy_rate(H, alpha, sigma2); };
        try
        {
            AlphaSearchResult r = golden_section_log_alpha(f, K, options);
            if (rate_ls > r.rate_bits)
            {
                r.alpha = alpha_ls;
                r.rate_bits = rate_ls;
            }
            return r;
        }
        catch (const BracketFailure &e)
        {
            if (rate_ls > e.best_value)
                throw BracketFailure(e.what(), alpha_ls, rate_ls);
            throw;
        }
    }

    CcdfTable ccdf_alpha_penalty(int K, double rho, int trials, std::uint64_t seed,
                                 const std::vector<double> &thresholds, int threads)
    {
        if (K < 1)
            throw DimensionError("ccdf_alpha_penalty requires K >= 1");
        if (trials < 1)
            throw DomainError("ccdf_alpha_penalty requires trials >= 1");
        if (!(rho > 0.0))
            throw DomainError("ccdf_alpha_penalty requires rho > 0");

        struct Outcome
        {
            double d = 0.0;
            bool skipped = false;
            bool bracket = false;
        };
        const double sigma2 = 1.0 / rho;
        const double alpha_ls = large_system::alpha_ls(rho, K);
        const std::vector<Outcome> outcomes = parallel_trials<Outcome>(trials, threads, [&](int t)
        {
            const ChannelMatrix H = sample_channel(arma::uword(K), arma::uword(K), RngSpec{seed, std::uint64_t(t)});
            Outcome o;
            double r_fs = 0.0;
            try
            {
                r_fs = optimize_alpha_per_channel(H, sigma2).rate_bits;
            }
            catch (const BracketFailure &e)
            {
                r_fs = e.best_value;
                o.bracket = true;
            }
            if (!(r_fs > 0.0))
            {
                o.skipped = true;
                return o;
            }
            const double r_ls = rci_secrecy_rate(H, alpha_ls, sigma2);
            o.d = std::max(0.0, (r_fs - r_ls) / r_fs);
            return o;
        });

        CcdfTable out;
        out.thresholds = thresholds;
        std::sort(out.thresholds.begin(), out.thresholds.end());
        double sum = 0.0;
        for (const Outcome &o : outcomes)
        {
            out.bracket_failures += o.bracket ? 1 : 0;
            if (o.skipped)
            {
                ++out.skipped_zero_rate;
                continue;
            }
            ++out.trials_used;
            sum += o.d;
        }
        out.mean_diff = out.trials_used > 0 ? sum / out.trials_used : 0.0;
        for (double th : out.thresholds)
        {
            int above = 0;
            for (const Outcome &o : outcomes)
                above += (!o.skipped && o.d > th) ? 1 : 0;
            out.ccdf.push_back(out.trials_used > 0 ? double(above) / out.trials_used : 0.0);
        }
        out.metadata = {{"k", std::to_string(K)},
                        {"m", std::to_string(K)},
                        {"snr_db", format_number(linear_to_db(rho))},
                        {"trials", std::to_string(trials)},
                        {"seed", std::to_string(seed)},
                        {"threads", std::to_string(resolve_threads(threads))},
                        {"version", version_string}};
        return out;
    }

    std::vector<SweepResult> scheme_comparison_sweep(const ExperimentConfig &config)
    {
        config.validate();
        const std::vector<ChannelMatrix> channels = draw_channels(config.K, config.M, config.trials, config.master_seed);
        const int K = config.K;
        std::vector<SweepResult> out;
        for (Scheme scheme : config.schemes)
        {
            SweepResult res;
            res.scheme = scheme_name(scheme);
            res.metadata = config_metadata(config);
            for (double snr_db : config.snr_grid_db)
            {
                const double rho = db_to_linear(snr_db);
                const double sigma2 = 1.0 / rho;
                const double alpha_ls = large_system::alpha_ls(rho, K);
                std::map<std::string, double> extra;

                double alpha_avg = alpha_ls;
                if (scheme == Scheme::RciFsAvg)
                {
                    try
                    {
                        alpha_avg = average_search(channels, K, rho, config.threads, {}).alpha;
                        extra["alpha_on_boundary"] = 0.0;
                    }
                    catch (const BracketFailure &e)
                    {
                        alpha_avg = e.best_x;
                        extra["alpha_on_boundary"] = 1.0;
                    }
                    extra["alpha"] = alpha_avg;
                }

                std::vector<int> flags(channels.size(), 0);
                const std::vector<double> r = run_trials(config.trials, config.threads, [&](int t) -> double
                {
                    const ChannelMatrix &H = channels[std::size_t(t)];
                    switch (scheme)
                    {
                    case Scheme::RciLs:
                        return rci_secrecy_rate(H, alpha_ls, sigma2);
                    case Scheme::RciFsAvg:
                        return rci_secrecy_rate(H, alpha_avg, sigma2);
                    case Scheme::RciFsPerChannel:
                        try
                        {
                            return optimize_alpha_per_channel(H, sigma2).rate_bits;
                        }
                        catch (const BracketFailure &e)
                        {
                            flags[std::size_t(t)] = 1;
                            return e.best_value;
                        }
                    case Scheme::Ci:
                        return secrecy_sum_rate(H, ci_precoder(H), sigma2).sum_bits;
                    case Scheme::Mf:
                        return secrecy_sum_rate(H, mf_precoder(H), sigma2).sum_bits;
                    case Scheme::RciXiInvRho:
                        return rci_secrecy_rate(H, K / rho, sigma2);
                    case Scheme::RciPaFixedAlpha:
                    {
                        const PowerAllocationResult pa = sca_power_allocation(H, alpha_ls, sigma2);
                        flags[std::size_t(t)] = pa.diagnostics.converged ? 0 : 1;
                        return pa.report.sum_bits;
                    }
                    case Scheme::RciPaJoint:
                    {
                        const JointResult j = joint_optimize(H, sigma2);
                        flags[std::size_t(t)] = j.diagnostics.converged ? 0 : 1;
                        return j.report.sum_bits;
                    }
                    case Scheme::RciNoSecrecy:
                        return sum_rate_without_secrecy(H, rci_precoder(H, K / rho), sigma2);
                    }
                    return 0.0;
                });
                SweepPoint pt = summarize(snr_db, r);
                if (scheme == Scheme::RciFsPerChannel)
                    extra["bracket_failures"] = std::accumulate(flags.begin(), flags.end(), 0);
                if (scheme == Scheme::RciPaFixedAlpha || scheme == Scheme::RciPaJoint)
                    extra["unconverged"] = std::accumulate(flags.begin(), flags.end(), 0);
                pt.extra = std::move(extra);
                res.per_point.push_back(std::move(pt));
            }
            out.push_back(std::move(res));
        }
        return out;
    }

    PaTrialRates power_allocation_trial(const ChannelMatrix &H, double sigma2, const JointOptions &options)
    {
        const int K = int(H.num_users());
        const double alpha_ls = large_system::alpha_ls(1.0 / sigma2, K);
        PaTrialRates out;
        out.equal_power = rci_secrecy_rate(H, alpha_ls, sigma2);
        const PowerAllocationResult pa = sca_power_allocation(H, alpha_ls, sigma2, options.sca);
        out.fixed_alpha = pa.report.sum_bits;
        out.fixed_alpha_converged = pa.diagnostics.converged;
        const JointResult j = joint_optimize(H, sigma2, options);
        out.joint = j.report.sum_bits;
        out.joint_converged = j.diagnostics.converged;
        return out;
    }

    std::vector<SweepResult> power_allocation_sweep(const ExperimentConfig &config)
    {
        config.validate();
        const std::vector<ChannelMatrix> channels = draw_channels(config.K, config.M, config.trials, config.master_seed);
        const double K = config.K;
        std::map<std::string, std::string> meta = config_metadata(config);
        meta["schemes"] = "rci-ep,rci-pa-fixed-alpha,rci-pa-joint,misome-bound";
        meta["normalization"] = "per_user";

        SweepResult ep{"rci-ep", {}, meta}, pa{"rci-pa-fixed-alpha", {}, meta}, joint{"rci-pa-joint", {}, meta},
            misome{"misome-bound", {}, meta};
        for (double snr_db : config.snr_grid_db)
        {
            const double rho = db_to_linear(snr_db);
            const std::vector<PaTrialRates> r = parallel_trials<PaTrialRates>(config.trials, config.threads, [&](int t)
            {
                return power_allocation_trial(channels[std::size_t(t)], 1.0 / rho);
            });
            std::vector<double> e(r.size()), p(r.size()), j(r.size());
            int pa_below_ep = 0, joint_below_pa = 0, pa_unconverged = 0, joint_unconverged = 0;
            for (std::size_t t = 0; t < r.size(); ++t)
            {
                e[t] = r[t].equal_power / K;
                p[t] = r[t].fixed_alpha / K;
                j[t] = r[t].joint / K;
                pa_below_ep += r[t].fixed_alpha < r[t].equal_power - dominance_tol_bits ? 1 : 0;
                joint_below_pa += r[t].joint < r[t].fixed_alpha - dominance_tol_bits ? 1 : 0;
                pa_unconverged += r[t].fixed_alpha_converged ? 0 : 1;
                joint_unconverged += r[t].joint_converged ? 0 : 1;
            }
            ep.per_point.push_back(summarize(snr_db, e));
            SweepPoint pp = summarize(snr_db, p);
            pp.extra = {{"dominance_violations", pa_below_ep}, {"unconverged", pa_unconverged}};
            pa.per_point.push_back(std::move(pp));
            SweepPoint jp = summarize(snr_db, j);
            jp.extra = {{"dominance_violations", joint_below_pa}, {"unconverged", joint_unconverged}};
            joint.per_point.push_back(std::move(jp));

            SweepPoint mp;
            mp.snr_db = snr_db;
            mp.mean_rate_bits = std::max(0.0, 0.5 * std::log2(rho));
            mp.n = 1;
            misome.per_point.push_back(mp);
        }
        return {ep, pa, joint, misome};
    }
}
