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

#include "rcisec/rates.hpp"
#include "rcisec/errors.hpp"

#include <cmath>
#include <string>

namespace rcisec
{
    namespace
    {
        void check_inputs(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2)
        {
            if (W.num_antennas() != H.num_antennas() || W.num_users() != H.num_users())
                throw DimensionError("Precoder is " + std::to_string(W.num_antennas()) + "x" +
                                     std::to_string(W.num_users()) + " but the channel is " +
                                     std::to_string(H.num_users()) + "x" + std::to_string(H.num_antennas()));
            if (!(sigma2 > 0.0))
                throw DomainError("Noise variance must be positive.");
        }

        void check_user(const ChannelMatrix &H, arma::uword k)
        {
            if (k >= H.num_users())
                throw IndexError("User index " + std::to_string(k) + " out of range.");
        }

        UserSecrecyRate user_rate(const SinrPair &s)
        {
            const double diff = std::log2(1.0 + s.intended) - std::log2(1.0 + s.eavesdropper);
            return {s, std::max(diff, 0.0), diff < 0.0};
        }
    }

    double SecrecyRateReport::unclipped_sum_bits() const
    {
        double sum = 0.0;
        for (const auto &u : per_user)
            sum += std::log2(1.0 + u.sinr.intended) - std::log2(1.0 + u.sinr.eavesdropper);
        return sum;
    }

    SecrecyRateReport make_secrecy_report(const std::vector<SinrPair> &sinrs)
    {
        SecrecyRateReport report;
        report.per_user.reserve(sinrs.size());
        for (const auto &s : sinrs)
        {
            report.per_user.push_back(user_rate(s));
            report.sum_bits += report.per_user.back().rate_bits;
        }
        return report;
    }

    double CrossGains::interference(arma::uword k, const arma::vec &p) const
    {
        return arma::dot(gain.row(k), p) - gain(k, k) * p(k);
    }

    double CrossGains::leakage(arma::uword k) const
    {
        return arma::accu(gain.col(k)) - gain(k, k);
    }

    CrossGains cross_gains(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2)
    {
        check_inputs(H, W, sigma2);
        CrossGains g;
        g.gain = arma::square(arma::abs(H.entries() * W.columns()));
        g.norms_sq = W.column_norms_sq();
        g.sigma2 = sigma2;
        return g;
    }

    double sinr_intended(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2, arma::uword k)
    {
        check_inputs(H, W, sigma2);
        check_user(H, k);
        const arma::cx_rowvec hk = H.entries().row(k);
        double signal = 0.0, interference = 0.0;
        for (arma::uword j = 0; j < W.num_users(); ++j)
        {
            const double g = std::norm(arma::dot(hk, W.columns().col(j)));
            (j == k ? signal : interference) += g;
        }
        const double denom = W.gamma() * sigma2 + interference;
        return denom > 0.0 ? signal / denom : 0.0;
    }

    double sinr_eavesdropper(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2, arma::uword k)
    {
        check_inputs(H, W, sigma2);
        check_user(H, k);
        if (H.num_users() == 1)
            return 0.0;
        const ChannelMatrix others = remove_row(H, k);
        const double leak = std::pow(arma::norm(others.entries() * W.columns().col(k)), 2);
        const double denom = W.gamma() * sigma2;
        return denom > 0.0 ? leak / denom : 0.0;
    }

    SecrecyRateReport secrecy_sum_rate(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2)
    {
        const CrossGains g = cross_gains(H, W, sigma2);
        const arma::uword K = g.num_users();
        const arma::vec ones(K, arma::fill::ones);
        const double noise = W.gamma() * sigma2;

        std::vector<SinrPair> sinrs(K);
        for (arma::uword k = 0; k < K; ++k)
        {
            const double denom_k = noise + g.interference(k, ones);
            sinrs[k].intended = denom_k > 0.0 ? g.signal(k) / denom_k : 0.0;
            sinrs[k].eavesdropper = noise > 0.0 ? g.leakage(k) / noise : 0.0;
        }
        return make_secrecy_report(sinrs);
    }

    double sum_rate_without_secrecy(const ChannelMatrix &H, const PrecoderMatrix &W, double sigma2)
    {
        const CrossGains g = cross_gains(H, W, sigma2);
        const arma::vec ones(g.num_users(), arma::fill::ones);
        double sum = 0.0;
        for (arma::uword k = 0; k < g.num_users(); ++k)
        {
            const double denom = W.gamma() * sigma2 + g.interference(k, ones);
            sum += std::log2(1.0 + (denom > 0.0 ? g.signal(k) / denom : 0.0));
        }
        return sum;
    }

    AkBk ak_bk(const ChannelMatrix &H, double alpha, arma::uword k)
    {
        check_user(H, k);
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw DomainError("ak_bk requires alpha > 0.");

        const arma::cx_vec hk = H.user_vector(k);
        if (H.num_users() == 1)
            return {std::real(arma::cdot(hk, hk)) / alpha, 0.0};

        const arma::cx_mat others = remove_row(H, k).entries();
        arma::cx_mat resolvent = others.t() * others;
        resolvent.diag() += alpha;
        // v = (G + alpha I)^{-1} h_k; Hermitian positive definite so a sympd solve is safe
        const arma::cx_vec v = arma::solve(resolvent, hk, arma::solve_opts::likely_sympd);
        AkBk out;
        out.a_k = std::max(std::real(arma::cdot(hk, v)), 0.0);
        out.b_k = std::pow(arma::norm(others * v), 2);
        return out;
    }

    SinrPair rci_sinrs_via_akbk(const ChannelMatrix &H, double alpha, double sigma2, arma::uword k)
    {
        if (!(sigma2 > 0.0))
            throw DomainError("Noise variance must be positive.");
        const AkBk ab = ak_bk(H, alpha, k);
        const double gamma = power_normalization(H, alpha);
        const double scaled = gamma * sigma2 * (1.0 + ab.a_k) * (1.0 + ab.a_k);
        return {ab.a_k * ab.a_k / (ab.b_k + scaled), ab.b_k / scaled};
    }

    SecrecyRateReport secrecy_sum_rate_pa(const CrossGains &g, const arma::vec &p)
    {
        const arma::uword K = g.num_users();
        if (p.n_elem != K)
            throw DimensionError("Power vector length does not match the number of users.");
        std::vector<SinrPair> sinrs(K);
        for (arma::uword k = 0; k < K; ++k)
        {
            sinrs[k].intended = p(k) * g.signal(k) / (g.interference(k, p) + g.sigma2);
            sinrs[k].eavesdropper = p(k) * g.leakage(k) / g.sigma2;
        }
        return make_secrecy_report(sinrs);
    }

    SecrecyRateReport secrecy_sum_rate_pa(const ChannelMatrix &H, const PrecoderMatrix &W, const PowerVector &p,
                                          double sigma2)
    {
        const double used = p.trace_power(W);
        if (used > 1.0 + power_budget_slack)
            throw PowerBudgetExceeded("Power allocation uses " + std::to_string(used) + " > 1 of the transmit budget");
        return secrecy_sum_rate_pa(cross_gains(H, W, sigma2), p.p());
    }

    void to_json(nlohmann::json &j, const SecrecyRateReport &report)
    {
        j = nlohmann::json::object();
        j["per_user"] = nlohmann::json::array();
        for (const auto &u : report.per_user)
            j["per_user"].push_back({{"sinr_k", u.sinr.intended},
                                     {"sinr_ke", u.sinr.eavesdropper},
                                     {"rate_bits", u.rate_bits},
                                     {"clipped", u.clipped}});
        j["sum_bits"] = report.sum_bits;
    }

    void from_json(const nlohmann::json &j, SecrecyRateReport &report)
    {
        report = {};
        for (const auto &u : j.at("per_user"))
        {
            UserSecrecyRate r;
            r.sinr.intended = u.at("sinr_k").get<double>();
            r.sinr.eavesdropper = u.at("sinr_ke").get<double>();
            r.rate_bits = u.at("rate_bits").get<double>();
            r.clipped = u.at("clipped").get<bool>();
            report.per_user.push_back(r);
        }
        report.sum_bits = j.at("sum_bits").get<double>();
    }
}
