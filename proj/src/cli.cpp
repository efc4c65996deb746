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

#include "rcisec/cli.hpp"
#include "rcisec/csv_io.hpp"
#include "rcisec/errors.hpp"
#include "rcisec/experiments.hpp"
#include "rcisec/large_system.hpp"
#include "rcisec/selftest.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>

namespace rcisec
{
    namespace
    {
        // "start:step:stop" (inclusive), a comma list, or a single value.
        std::vector<double> parse_grid(const std::string &key, const std::string &text)
        {
            try
            {
                std::vector<double> out;
                if (text.find(':') != std::string::npos)
                {
                    std::vector<std::string> parts;
                    std::string s = text;
                    for (std::size_t pos; (pos = s.find(':')) != std::string::npos; s = s.substr(pos + 1))
                        parts.push_back(s.substr(0, pos));
                    parts.push_back(s);
                    if (parts.size() != 3)
                        throw ConfigError(key + ": a range needs the form start:step:stop");
                    const double a = parse_number(parts[0]), step = parse_number(parts[1]), b = parse_number(parts[2]);
                    if (!(step > 0.0) || b < a)
                        throw ConfigError(key + ": a range needs step > 0 and stop >= start");
                    const long n = std::lround(std::floor((b - a) / step + 1e-9));
                    if (n > 100000)
                        throw ConfigError(key + ": range has too many points");
                    for (long i = 0; i <= n; ++i)
                        out.push_back(a + double(i) * step);
                    return out;
                }
                std::string s = text;
                for (std::size_t pos; (pos = s.find(',')) != std::string::npos; s = s.substr(pos + 1))
                    out.push_back(parse_number(s.substr(0, pos)));
                out.push_back(parse_number(s));
                return out;
            }
            catch (const DomainError &e)
            {
                throw ConfigError(key + ": " + e.what());
            }
        }

        std::vector<Scheme> parse_schemes(const std::string &text)
        {
            std::vector<Scheme> out;
            std::string s = text;
            for (std::size_t pos; (pos = s.find(',')) != std::string::npos; s = s.substr(pos + 1))
                out.push_back(parse_scheme(s.substr(0, pos)));
            out.push_back(parse_scheme(s));
            return out;
        }

        // Config files split comma lists into arrays; the pieces are joined back here.
        std::string join(const std::vector<std::string> &parts)
        {
            std::string out;
            for (const std::string &p : parts)
                out += (out.empty() ? "" : ",") + p;
            return out;
        }

        struct Common
        {
            int k = 0;
            int m = 0; // 0 = same as k
            std::vector<std::string> snr_db;
            int trials = 0;
            std::uint64_t seed = 0;
            int threads = 0;
            std::string output;
            bool json = false;
        };

        void add_output(CLI::App *sub, Common &c)
        {
            sub->add_option("--output,-o", c.output, "Output file (default: standard output)");
            sub->add_flag("--json", c.json, "Write JSON instead of CSV");
        }

        void add_experiment(CLI::App *sub, Common &c, const std::string &snr_default, int trials_default)
        {
            c.snr_db = {snr_default};
            c.trials = trials_default;
            sub->add_option("--k", c.k, "Number of users")->required()->check(CLI::PositiveNumber);
            sub->add_option("--m", c.m, "Number of transmit antennas (default: k)")->check(CLI::PositiveNumber);
            sub->add_option("--snr-db", c.snr_db, "SNR grid in dB: start:step:stop or a comma list")
                ->capture_default_str();
            sub->add_option("--trials", c.trials, "Channel draws per point")->capture_default_str()
                ->check(CLI::PositiveNumber);
            sub->add_option("--seed", c.seed, "Master seed of all random draws")->capture_default_str();
            sub->add_option("--threads", c.threads, "Worker threads (0: all cores)")
                ->envname("RCISEC_THREADS")
                ->check(CLI::NonNegativeNumber)
                ->capture_default_str();
            add_output(sub, c);
        }

        ExperimentConfig to_config(const Common &c)
        {
            ExperimentConfig cfg;
            cfg.K = c.k;
            cfg.M = c.m > 0 ? c.m : c.k;
            cfg.snr_grid_db = parse_grid("snr-db", join(c.snr_db));
            cfg.trials = c.trials;
            cfg.master_seed = c.seed;
            cfg.threads = c.threads;
            return cfg;
        }

        // Writes through `write` to the output file, or to `out` when none was given.
        template <class F>
        void emit(const Common &c, std::ostream &out, F write)
        {
            if (c.output.empty())
            {
                write(out);
                return;
            }
            std::ofstream f(c.output);
            if (!f)
                throw std::runtime_error("cannot open output file '" + c.output + "'");
            write(f);
            if (!f)
                throw std::runtime_error("failed writing '" + c.output + "'");
        }
    }

    int parse_and_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Secrecy-rate linear precoding for the multi-user MIMO downlink", "rcisec"};
        app.require_subcommand(1);
        app.allow_config_extras(false);
        app.set_config("--config", "", "INI file with one [section] per subcommand; flags override it");

        // large-system
        Common ls;
        ls.snr_db = {"0:5:30"};
        CLI::App *ls_cmd = app.add_subcommand("large-system", "Large-system optimum xi and secrecy sum-rate");
        ls_cmd->add_option("--k", ls.k, "Number of users (K = M)")->required()->check(CLI::PositiveNumber);
        ls_cmd->add_option("--rho-db", ls.snr_db, "SNR grid in dB: start:step:stop or a comma list")
            ->capture_default_str();
        add_output(ls_cmd, ls);

        Common sw;
        std::vector<std::string> schemes{"rci-ls"};
        CLI::App *sw_cmd = app.add_subcommand("sweep", "Monte Carlo comparison of precoding schemes");
        add_experiment(sw_cmd, sw, "0:5:30", 1000);
        sw_cmd->add_option("--schemes", schemes,
                           "Comma list of rci-ls, rci-fs-avg, rci-fs-per-channel, ci, mf, rci-xi-inv-rho, "
                           "rci-pa-fixed-alpha, rci-pa-joint, rci-no-secrecy")
            ->capture_default_str();

        Common cc;
        std::vector<std::string> thresholds{"0:0.005:0.1"};
        CLI::App *cc_cmd = app.add_subcommand("ccdf", "CCDF of the rate penalty of the large-system alpha");
        add_experiment(cc_cmd, cc, "10", 1000);
        cc_cmd->add_option("--thresholds", thresholds, "Threshold grid on the normalized penalty")
            ->capture_default_str();

        Common pa;
        CLI::App *pa_cmd = app.add_subcommand("power-alloc", "Equal power, power allocation and joint optimization");
        add_experiment(pa_cmd, pa, "0:5:30", 500);

        Common as;
        CLI::App *as_cmd = app.add_subcommand("alpha-search", "Alpha maximizing the average secrecy sum-rate");
        add_experiment(as_cmd, as, "10", 1000);

        std::vector<std::string> suites;
        CLI::App *st_cmd = app.add_subcommand("selftest", "Run the built-in property checks");
        st_cmd->add_option("--suite", suites, "Suite to run (repeatable; default: all)")->delimiter(',');

        try
        {
            std::vector<std::string> args;
            for (int i = argc - 1; i > 0; --i)
                args.emplace_back(argv[i]);
            app.parse(args);
        }
        catch (const CLI::CallForHelp &)
        {
            out << app.help();
            return 0;
        }
        catch (const CLI::CallForAllHelp &)
        {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        }
        catch (const CLI::ParseError &e)
        {
            err << "rcisec: " << e.what() << '\n';
            return 2;
        }

        try
        {
            if (ls_cmd->parsed())
            {
                const std::vector<double> grid = parse_grid("rho-db", join(ls.snr_db));
                std::vector<LargeSystemRow> rows;
                for (double snr_db : grid)
                {
                    const double rho = db_to_linear(snr_db);
                    rows.push_back({snr_db, large_system::xi_opt(rho), large_system::optimal_secrecy_sum_rate(rho, ls.k)});
                }
                const std::map<std::string, std::string> meta{
                    {"k", std::to_string(ls.k)}, {"rho_db", join(ls.snr_db)}, {"version", version_string}};
                emit(ls, out, [&](std::ostream &os)
                {
                    if (ls.json)
                        os << nlohmann::json{{"metadata", meta}, {"rows", rows}}.dump(2) << '\n';
                    else
                        write_large_system_csv(os, rows, meta);
                });
            }
            else if (sw_cmd->parsed())
            {
                ExperimentConfig cfg = to_config(sw);
                cfg.schemes = parse_schemes(join(schemes));
                cfg.validate();
                const std::vector<SweepResult> r = scheme_comparison_sweep(cfg);
                emit(sw, out, [&](std::ostream &os)
                {
                    if (sw.json)
                        os << nlohmann::json(r).dump(2) << '\n';
                    else
                        write_sweep_csv(os, r);
                });
            }
            else if (cc_cmd->parsed())
            {
                ExperimentConfig cfg = to_config(cc);
                if (cfg.snr_grid_db.size() != 1)
                    throw ConfigError("snr-db: ccdf takes a single SNR value");
                if (cfg.M != cfg.K)
                    throw ConfigError("m: ccdf uses square channels (m = k)");
                const std::vector<double> th = parse_grid("thresholds", join(thresholds));
                cfg.validate();
                const CcdfTable t = ccdf_alpha_penalty(cfg.K, db_to_linear(cfg.snr_grid_db[0]), cfg.trials,
                                                       cfg.master_seed, th, cfg.threads);
                emit(cc, out, [&](std::ostream &os)
                {
                    if (cc.json)
                        os << nlohmann::json(t).dump(2) << '\n';
                    else
                        write_ccdf_csv(os, t);
                });
            }
            else if (pa_cmd->parsed())
            {
                ExperimentConfig cfg = to_config(pa);
                cfg.validate();
                const std::vector<SweepResult> r = power_allocation_sweep(cfg);
                emit(pa, out, [&](std::ostream &os)
                {
                    if (pa.json)
                        os << nlohmann::json(r).dump(2) << '\n';
                    else
                        write_sweep_csv(os, r);
                });
            }
            else if (as_cmd->parsed())
            {
                ExperimentConfig cfg = to_config(as);
                cfg.validate();
                const SweepResult at_ls = average_secrecy_sum_rate(
                    cfg, [](double rho, int K, const ChannelMatrix &) { return large_system::alpha_ls(rho, K); });
                std::vector<AlphaSearchRow> rows;
                for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i)
                {
                    const double rho = db_to_linear(cfg.snr_grid_db[i]);
                    AlphaSearchRow row;
                    row.snr_db = cfg.snr_grid_db[i];
                    row.alpha_ls = large_system::alpha_ls(rho, cfg.K);
                    row.rate_ls_bits = at_ls.per_point[i].mean_rate_bits;
                    try
                    {
                        const AlphaSearchResult r =
                            optimize_alpha_average(cfg.K, cfg.M, rho, cfg.trials, cfg.master_seed, cfg.threads);
                        row.alpha_fs = r.alpha;
                        row.rate_fs_bits = r.rate_bits;
                    }
                    catch (const BracketFailure &e)
                    {
                        row.alpha_fs = e.best_x;
                        row.rate_fs_bits = e.best_value;
                        row.on_boundary = true;
                    }
                    rows.push_back(row);
                }
                std::map<std::string, std::string> meta = config_metadata(cfg);
                meta.erase("schemes");
                emit(as, out, [&](std::ostream &os)
                {
                    if (as.json)
                        os << nlohmann::json{{"metadata", meta}, {"rows", rows}}.dump(2) << '\n';
                    else
                        write_alpha_search_csv(os, rows, meta);
                });
            }
            else if (st_cmd->parsed())
                return run_selftest(out, suites);
        }
        catch (const ConfigError &e)
        {
            err << "rcisec: configuration error: " << e.what() << '\n';
            return 2;
        }
        catch (const std::exception &e)
        {
            err << "rcisec: error: " << e.what() << '\n';
            return 1;
        }
        return 0;
    }
}
