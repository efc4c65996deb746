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

#include "rcisec/channel.hpp"
#include "rcisec/errors.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace rcisec
{
    ChannelMatrix::ChannelMatrix(arma::cx_mat entries) : entries_(std::move(entries))
    {
        if (entries_.n_rows == 0 || entries_.n_cols == 0)
            throw DimensionError("Channel matrix must have at least one user and one antenna.");
        if (!entries_.is_finite())
            throw DomainError("Channel matrix contains NaN or Inf entries.");
    }

    arma::cx_vec ChannelMatrix::user_vector(arma::uword k) const
    {
        if (k >= entries_.n_rows)
            throw IndexError("User index " + std::to_string(k) + " out of range.");
        return entries_.row(k).t();
    }

    bool ChannelMatrix::is_zero() const
    {
        return entries_.is_zero(0.0);
    }

    bool operator==(const ChannelMatrix &a, const ChannelMatrix &b)
    {
        return arma::size(a.entries_) == arma::size(b.entries_) &&
               arma::all(arma::vectorise(a.entries_ == b.entries_));
    }

    NoiseModel NoiseModel::from_sigma2(double sigma2)
    {
        if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
            throw DomainError("Noise variance must be positive and finite.");
        return {sigma2, 1.0 / sigma2};
    }

    NoiseModel NoiseModel::from_snr(double rho)
    {
        if (!(rho > 0.0) || !std::isfinite(rho))
            throw DomainError("SNR must be positive and finite.");
        return {1.0 / rho, rho};
    }

    NoiseModel NoiseModel::from_snr_db(double snr_db)
    {
        return from_snr(db_to_linear(snr_db));
    }

    double db_to_linear(double db)
    {
        return std::pow(10.0, db / 10.0);
    }

    double linear_to_db(double linear)
    {
        return 10.0 * std::log10(linear);
    }

    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ULL;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
            return x ^ (x >> 31);
        }
    }

    std::uint64_t derive_stream_seed(const RngSpec &rng)
    {
        return splitmix64(splitmix64(rng.master_seed) ^ splitmix64(~rng.trial_index));
    }

    ChannelMatrix sample_channel(arma::uword num_users, arma::uword num_antennas, const RngSpec &rng)
    {
        if (num_users == 0 || num_antennas == 0)
            throw DimensionError("sample_channel: K and M must be positive.");

        std::mt19937_64 engine(derive_stream_seed(rng));
        std::normal_distribution<double> normal(0.0, 1.0);
        const double scale = 1.0 / std::sqrt(2.0);

        arma::cx_mat H(num_users, num_antennas);
        for (arma::uword k = 0; k < num_users; ++k)
            for (arma::uword j = 0; j < num_antennas; ++j)
            {
                const double re = normal(engine);
                const double im = normal(engine);
                H(k, j) = arma::cx_double(scale * re, scale * im);
            }
        return ChannelMatrix(std::move(H));
    }

    ChannelMatrix remove_row(const ChannelMatrix &H, arma::uword k)
    {
        if (k >= H.num_users())
            throw IndexError("remove_row: user index " + std::to_string(k) + " out of range.");
        if (H.num_users() == 1)
            throw DimensionError("remove_row: cannot remove the only user (K=1).");
        arma::cx_mat out = H.entries();
        out.shed_row(k);
        return ChannelMatrix(std::move(out));
    }

    ChannelMatrix insert_row(const ChannelMatrix &H, arma::uword k, const arma::cx_rowvec &row)
    {
        if (k > H.num_users())
            throw IndexError("insert_row: position " + std::to_string(k) + " out of range.");
        if (row.n_elem != H.num_antennas())
            throw DimensionError("insert_row: row length does not match M.");
        arma::cx_mat out = H.entries();
        out.insert_rows(k, row);
        return ChannelMatrix(std::move(out));
    }

    void write_channel_csv(std::ostream &os, const ChannelMatrix &H)
    {
        const auto &E = H.entries();
        os << "k,j,re,im\n";
        os << std::setprecision(17);
        for (arma::uword k = 0; k < E.n_rows; ++k)
            for (arma::uword j = 0; j < E.n_cols; ++j)
                os << k << ',' << j << ',' << E(k, j).real() << ',' << E(k, j).imag() << '\n';
    }

    ChannelMatrix read_channel_csv(std::istream &is)
    {
        std::string line;
        if (!std::getline(is, line) || line.rfind("k,j,re,im", 0) != 0)
            throw DomainError("Channel CSV must start with header 'k,j,re,im'.");

        struct Entry
        {
            arma::uword k, j;
            double re, im;
        };
        std::vector<Entry> entries;
        arma::uword K = 0, M = 0;
        std::size_t line_no = 1;
        while (std::getline(is, line))
        {
            ++line_no;
            if (line.empty() || line == "\r")
                continue;
            std::istringstream ss(line);
            Entry e{};
            char c1 = 0, c2 = 0, c3 = 0;
            if (!(ss >> e.k >> c1 >> e.j >> c2 >> e.re >> c3 >> e.im) || c1 != ',' || c2 != ',' || c3 != ',')
                throw DomainError("Malformed channel CSV at line " + std::to_string(line_no));
            K = std::max(K, e.k + 1);
            M = std::max(M, e.j + 1);
            entries.push_back(e);
        }
        if (entries.size() != K * M)
            throw DimensionError("Channel CSV does not describe a complete K x M matrix.");

        arma::cx_mat H(K, M, arma::fill::zeros);
        arma::umat seen(K, M, arma::fill::zeros);
        for (const auto &e : entries)
        {
            if (seen(e.k, e.j))
                throw DomainError("Channel CSV repeats entry (" + std::to_string(e.k) + "," + std::to_string(e.j) + ")");
            seen(e.k, e.j) = 1;
            H(e.k, e.j) = arma::cx_double(e.re, e.im);
        }
        return ChannelMatrix(std::move(H));
    }
}
