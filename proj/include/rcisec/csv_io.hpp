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

// CSV and JSON serialization of experiment outputs. Every writer has a reader that recovers
// the same structure, metadata included.
//
// Sweep CSV:
//   # meta <scheme> <key>=<value>
//   # extra <scheme> <point index> <key>=<value>
//   snr_db,scheme,mean_bits,stderr,n
//
// CCDF CSV:
//   # <key>=<value>              (mean_diff, trials_used, skipped_zero_rate, bracket_failures, config)
//   threshold,ccdf

#include "rcisec/experiments.hpp"

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

namespace rcisec
{
    // Shortest decimal text that parses back to the same double.
    std::string format_number(double x);
    // Strict parse of a whole string; throws DomainError naming the text.
    double parse_number(const std::string &text);

    void write_sweep_csv(std::ostream &os, const std::vector<SweepResult> &results);
    std::vector<SweepResult> read_sweep_csv(std::istream &is);

    void write_ccdf_csv(std::ostream &os, const CcdfTable &table);
    CcdfTable read_ccdf_csv(std::istream &is);

    struct LargeSystemRow
    {
        double snr_db = 0.0;
        double xi_opt = 0.0;
        double rate_bits = 0.0;
        bool operator==(const LargeSystemRow &) const = default;
    };

    // Columns snr_db,xi_opt,rate_bits; metadata as `# key=value`.
    void write_large_system_csv(std::ostream &os, const std::vector<LargeSystemRow> &rows,
                                const std::map<std::string, std::string> &metadata = {});
    std::vector<LargeSystemRow> read_large_system_csv(std::istream &is,
                                                      std::map<std::string, std::string> *metadata = nullptr);

    struct AlphaSearchRow
    {
        double snr_db = 0.0;
        double alpha_ls = 0.0;
        double alpha_fs = 0.0;
        double rate_ls_bits = 0.0;
        double rate_fs_bits = 0.0;
        bool on_boundary = false;
        bool operator==(const AlphaSearchRow &) const = default;
    };

    // Columns snr_db,alpha_ls,alpha_fs,rate_ls_bits,rate_fs_bits,on_boundary.
    void write_alpha_search_csv(std::ostream &os, const std::vector<AlphaSearchRow> &rows,
                                const std::map<std::string, std::string> &metadata = {});
    std::vector<AlphaSearchRow> read_alpha_search_csv(std::istream &is,
                                                      std::map<std::string, std::string> *metadata = nullptr);

    void to_json(nlohmann::json &j, const SweepPoint &p);
    void from_json(const nlohmann::json &j, SweepPoint &p);
    void to_json(nlohmann::json &j, const SweepResult &r);
    void from_json(const nlohmann::json &j, SweepResult &r);
    void to_json(nlohmann::json &j, const CcdfTable &t);
    void from_json(const nlohmann::json &j, CcdfTable &t);
    void to_json(nlohmann::json &j, const LargeSystemRow &r);
    void from_json(const nlohmann::json &j, LargeSystemRow &r);
    void to_json(nlohmann::json &j, const AlphaSearchRow &r);
    void from_json(const nlohmann::json &j, AlphaSearchRow &r);
}
