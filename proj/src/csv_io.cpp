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

#include "rcisec/csv_io.hpp"
#include "rcisec/errors.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace rcisec
{
    namespace
    {
        std::vector<std::string> split(const std::string &line, char sep)
        {
            std::vector<std::string> out;
            std::string field;
            std::istringstream ss(line);
            while (std::getline(ss, field, sep))
                out.push_back(field);
            if (!line.empty() && line.back() == sep)
                out.emplace_back();
            return out;
        }

        std::string trim_cr(std::string s)
        {
            if (!s.empty() && s.back() == '\r')
                s.pop_back();
            return s;
        }

        int parse_int(const std::string &text)
        {
            int v = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size())
                throw DomainError("cannot parse integer '" + text + "'");
            return v;
        }

        std::pair<std::string, std::string> split_key_value(const std::string &text)
        {
            const auto eq = text.find('=');
            if (eq == std::string::npos || eq == 0)
                throw DomainError("malformed metadata line '" + text + "'");
            return {text.substr(0, eq), text.substr(eq + 1)};
        }

        void write_metadata(std::ostream &os, const std::map<std::string, std::string> &metadata)
        {
            for (const auto &[k, v] : metadata)
                os << "# " << k << '=' << v << '\n';
        }

        // Reads `# key=value` lines and the header; returns the data rows split on commas.
        std::vector<std::vector<std::string>> read_simple_table(std::istream &is, const std::string &header,
                                                                std::map<std::string, std::string> &metadata)
        {
            std::string line;
            bool seen_header = false;
            std::vector<std::vector<std::string>> rows;
            const std::size_t columns = split(header, ',').size();
            while (std::getline(is, line))
            {
                line = trim_cr(line);
                if (line.empty())
                    continue;
                if (line.rfind("# ", 0) == 0)
                {
                    metadata.insert(split_key_value(line.substr(2)));
                    continue;
                }
                if (!seen_header)
                {
                    if (line != header)
                        throw DomainError("expected CSV header '" + header + "', got '" + line + "'");
                    seen_header = true;
                    continue;
                }
                std::vector<std::string> f = split(line, ',');
                if (f.size() != columns)
                    throw DomainError("CSV row has " + std::to_string(f.size()) + " fields, expected " +
                                      std::to_string(columns));
                rows.push_back(std::move(f));
            }
            if (!seen_header)
                throw DomainError("CSV header '" + header + "' not found");
            return rows;
        }

        const char *sweep_header = "snr_db,scheme,mean_bits,stderr,n";
        const char *ccdf_header = "threshold,ccdf";
        const char *large_system_header = "snr_db,xi_opt,rate_bits";
        const char *alpha_header = "snr_db,alpha_ls,alpha_fs,rate_ls_bits,rate_fs_bits,on_boundary";
    }

    std::string format_number(double x)
    {
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
        if (ec != std::errc())
            throw DomainError("cannot format number");
        return std::string(buf, ptr);
    }

    double parse_number(const std::string &text)
    {
        double v = 0.0;
        const char *first = text.data();
        if (!text.empty() && text[0] == '+')
            ++first;
        const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || first == text.data() + text.size())
            throw DomainError("cannot parse number '" + text + "'");
        return v;
    }

    void write_sweep_csv(std::ostream &os, const std::vector<SweepResult> &results)
    {
        for (const SweepResult &r : results)
        {
            for (const auto &[k, v] : r.metadata)
                os << "# meta " << r.scheme << ' ' << k << '=' << v << '\n';
            for (std::size_t i = 0; i < r.per_point.size(); ++i)
                for (const auto &[k, v] : r.per_point[i].extra)
                    os << "# extra " << r.scheme << ' ' << i << ' ' << k << '=' << format_number(v) << '\n';
        }
        os << sweep_header << '\n';
        for (const SweepResult &r : results)
            for (const SweepPoint &p : r.per_point)
                os << format_number(p.snr_db) << ',' << r.scheme << ',' << format_number(p.mean_rate_bits) << ','
                   << format_number(p.std_err) << ',' << p.n << '\n';
    }

    std::vector<SweepResult> read_sweep_csv(std::istream &is)
    {
        std::vector<SweepResult> out;
        auto find = [&](const std::string &scheme) -> SweepResult &
        {
            for (SweepResult &r : out)
                if (r.scheme == scheme)
                    return r;
            out.push_back(SweepResult{scheme, {}, {}});
            return out.back();
        };
        std::vector<std::tuple<std::string, std::size_t, std::string, double>> extras;

        std::string line;
        bool seen_header = false;
        while (std::getline(is, line))
        {
            line = trim_cr(line);
            if (line.empty())
                continue;
            if (line.rfind("# ", 0) == 0)
            {
                std::istringstream ss(line.substr(2));
                std::string kind, scheme;
                ss >> kind >> scheme;
                if (kind == "meta")
                {
                    std::string rest;
                    std::getline(ss >> std::ws, rest);
                    find(scheme).metadata.insert(split_key_value(rest));
                }
                else if (kind == "extra")
                {
                    std::string index, rest;
                    ss >> index;
                    std::getline(ss >> std::ws, rest);
                    const auto [k, v] = split_key_value(rest);
                    find(scheme);
                    extras.emplace_back(scheme, std::size_t(parse_int(index)), k, parse_number(v));
                }
                else
                    throw DomainError("unknown sweep CSV comment '" + line + "'");
                continue;
            }
            if (!seen_header)
            {
                if (line != sweep_header)
                    throw DomainError(std::string("expected CSV header '") + sweep_header + "', got '" + line + "'");
                seen_header = true;
                continue;
            }
            const std::vector<std::string> f = split(line, ',');
            if (f.size() != 5)
                throw DomainError("sweep CSV row needs 5 fields: '" + line + "'");
            SweepPoint p;
            p.snr_db = parse_number(f[0]);
            p.mean_rate_bits = parse_number(f[2]);
            p.std_err = parse_number(f[3]);
            p.n = parse_int(f[4]);
            find(f[1]).per_point.push_back(std::move(p));
        }
        if (!seen_header)
            throw DomainError(std::string("CSV header '") + sweep_header + "' not found");
        for (const auto &[scheme, index, k, v] : extras)
        {
            SweepResult &r = find(scheme);
            if (index >= r.per_point.size())
                throw DomainError("extra value refers to a missing point of " + scheme);
            r.per_point[index].extra[k] = v;
        }
        return out;
    }

    void write_ccdf_csv(std::ostream &os, const CcdfTable &table)
    {
        std::map<std::string, std::string> meta = table.metadata;
        meta["mean_diff"] = format_number(table.mean_diff);
        meta["trials_used"] = std::to_string(table.trials_used);
        meta["skipped_zero_rate"] = std::to_string(table.skipped_zero_rate);
        meta["bracket_failures"] = std::to_string(table.bracket_failures);
        write_metadata(os, meta);
        os << ccdf_header << '\n';
        for (std::size_t i = 0; i < table.thresholds.size(); ++i)
            os << format_number(table.thresholds[i]) << ',' << format_number(table.ccdf[i]) << '\n';
    }

    CcdfTable read_ccdf_csv(std::istream &is)
    {
        CcdfTable t;
        std::map<std::string, std::string> meta;
        for (const auto &f : read_simple_table(is, ccdf_header, meta))
        {
            t.thresholds.push_back(parse_number(f[0]));
            t.ccdf.push_back(parse_number(f[1]));
        }
        auto take = [&](const std::string &key) -> std::string
        {
            const auto it = meta.find(key);
            if (it == meta.end())
                throw DomainError("CCDF CSV lacks metadata '" + key + "'");
            std::string v = it->second;
            meta.erase(it);
            return v;
        };
        t.mean_diff = parse_number(take("mean_diff"));
        t.trials_used = parse_int(take("trials_used"));
        t.skipped_zero_rate = parse_int(take("skipped_zero_rate"));
        t.bracket_failures = parse_int(take("bracket_failures"));
        t.metadata = std::move(meta);
        return t;
    }

    void write_large_system_csv(std::ostream &os, const std::vector<LargeSystemRow> &rows,
                                const std::map<std::string, std::string> &metadata)
    {
        write_metadata(os, metadata);
        os << large_system_header << '\n';
        for (const LargeSystemRow &r : rows)
            os << format_number(r.snr_db) << ',' << format_number(r.xi_opt) << ',' << format_number(r.rate_bits)
               << '\n';
    }

    std::vector<LargeSystemRow> read_large_system_csv(std::istream &is, std::map<std::string, std::string> *metadata)
    {
        std::map<std::string, std::string> meta;
        std::vector<LargeSystemRow> out;
        for (const auto &f : read_simple_table(is, large_system_header, meta))
            out.push_back({parse_number(f[0]), parse_number(f[1]), parse_number(f[2])});
        if (metadata)
            *metadata = std::move(meta);
        return out;
    }

    void write_alpha_search_csv(std::ostream &os, const std::vector<AlphaSearchRow> &rows,
                                const std::map<std::string, std::string> &metadata)
    {
        write_metadata(os, metadata);
        os << alpha_header << '\n';
        for (const AlphaSearchRow &r : rows)
            os << format_number(r.snr_db) << ',' << format_number(r.alpha_ls) << ',' << format_number(r.alpha_fs)
               << ',' << format_number(r.rate_ls_bits) << ',' << format_number(r.rate_fs_bits) << ','
               << (r.on_boundary ? 1 : 0) << '\n';
    }

    std::vector<AlphaSearchRow> read_alpha_search_csv(std::istream &is, std::map<std::string, std::string> *metadata)
    {
        std::map<std::string, std::string> meta;
        std::vector<AlphaSearchRow> out;
        for (const auto &f : read_simple_table(is, alpha_header, meta))
            out.push_back({parse_number(f[0]), parse_number(f[1]), parse_number(f[2]), parse_number(f[3]),
                           parse_number(f[4]), parse_int(f[5]) != 0});
        if (metadata)
            *metadata = std::move(meta);
        return out;
    }

    void to_json(nlohmann::json &j, const SweepPoint &p)
    {
        j = {{"snr_db", p.snr_db}, {"mean_bits", p.mean_rate_bits}, {"stderr", p.std_err}, {"n", p.n},
             {"extra", p.extra}};
    }

    void from_json(const nlohmann::json &j, SweepPoint &p)
    {
        p.snr_db = j.at("snr_db").get<double>();
        p.mean_rate_bits = j.at("mean_bits").get<double>();
        p.std_err = j.at("stderr").get<double>();
        p.n = j.at("n").get<int>();
        p.extra = j.value("extra", std::map<std::string, double>{});
    }

    void to_json(nlohmann::json &j, const SweepResult &r)
    {
        j = {{"scheme", r.scheme}, {"points", r.per_point}, {"metadata", r.metadata}};
    }

    void from_json(const nlohmann::json &j, SweepResult &r)
    {
        r.scheme = j.at("scheme").get<std::string>();
        r.per_point = j.at("points").get<std::vector<SweepPoint>>();
        r.metadata = j.value("metadata", std::map<std::string, std::string>{});
    }

    void to_json(nlohmann::json &j, const CcdfTable &t)
    {
        j = {{"thresholds", t.thresholds},
             {"ccdf", t.ccdf},
             {"mean_diff", t.mean_diff},
             {"trials_used", t.trials_used},
             {"skipped_zero_rate", t.skipped_zero_rate},
             {"bracket_failures", t.bracket_failures},
             {"metadata", t.metadata}};
    }

    void from_json(const nlohmann::json &j, CcdfTable &t)
    {
        t.thresholds = j.at("thresholds").get<std::vector<double>>();
        t.ccdf = j.at("ccdf").get<std::vector<double>>();
        t.mean_diff = j.at("mean_diff").get<double>();
        t.trials_used = j.at("trials_used").get<int>();
        t.skipped_zero_rate = j.at("skipped_zero_rate").get<int>();
        t.bracket_failures = j.at("bracket_failures").get<int>();
        t.metadata = j.value("metadata", std::map<std::string, std::string>{});
    }

    void to_json(nlohmann::json &j, const LargeSystemRow &r)
    {
        j = {{"snr_db", r.snr_db}, {"xi_opt", r.xi_opt}, {"rate_bits", r.rate_bits}};
    }

    void from_json(const nlohmann::json &j, LargeSystemRow &r)
    {
        r.snr_db = j.at("snr_db").get<double>();
        r.xi_opt = j.at("xi_opt").get<double>();
        r.rate_bits = j.at("rate_bits").get<double>();
    }

    void to_json(nlohmann::json &j, const AlphaSearchRow &r)
    {
        j = {{"snr_db", r.snr_db},           {"alpha_ls", r.alpha_ls},         {"alpha_fs", r.alpha_fs},
             {"rate_ls_bits", r.rate_ls_bits}, {"rate_fs_bits", r.rate_fs_bits}, {"on_boundary", r.on_boundary}};
    }

    void from_json(const nlohmann::json &j, AlphaSearchRow &r)
    {
        r.snr_db = j.at("snr_db").get<double>();
        r.alpha_ls = j.at("alpha_ls").get<double>();
        r.alpha_fs = j.at("alpha_fs").get<double>();
        r.rate_ls_bits = j.at("rate_ls_bits").get<double>();
        r.rate_fs_bits = j.at("rate_fs_bits").get<double>();
        r.on_boundary = j.at("on_boundary").get<bool>();
    }
}
