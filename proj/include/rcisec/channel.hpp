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

#include <armadillo>
#include <cstdint>
#include <iosfwd>

namespace rcisec
{
    // K x M flat-fading downlink channel. Row k holds h_k^dagger, the conjugated channel
    // vector of user k, so y = H x + n. User indices are zero-based throughout the library.
    class ChannelMatrix
    {
    public:
        ChannelMatrix() = default;
        explicit ChannelMatrix(arma::cx_mat entries); // throws DimensionError / DomainError

        arma::uword num_users() const { return entries_.n_rows; }
        arma::uword num_antennas() const { return entries_.n_cols; }
        const arma::cx_mat &entries() const { return entries_; }

        // h_k as an M x 1 column vector (the conjugate transpose of row k)
        arma::cx_vec user_vector(arma::uword k) const;

        bool is_zero() const;

        friend bool operator==(const ChannelMatrix &a, const ChannelMatrix &b);

    private:
        arma::cx_mat entries_;
    };

    // Receiver noise. rho = 1 / sigma2 is the (linear) SNR.
    struct NoiseModel
    {
        double sigma2 = 1.0;
        double rho = 1.0;

        static NoiseModel from_sigma2(double sigma2);
        static NoiseModel from_snr(double rho); // rho > 0
        static NoiseModel from_snr_db(double snr_db);
    };

    double db_to_linear(double db);
    double linear_to_db(double linear);

    // Identifies one reproducible random stream: trial t of an experiment seeded with s.
    struct RngSpec
    {
        std::uint64_t master_seed = 0;
        std::uint64_t trial_index = 0;
    };

    // 64-bit seed for the stream (master_seed, trial_index). Stable across platforms.
    std::uint64_t derive_stream_seed(const RngSpec &rng);

    // i.i.d. CN(0,1) entries, drawn row-major from the stream of `rng`.
    ChannelMatrix sample_channel(arma::uword num_users, arma::uword num_antennas, const RngSpec &rng);

    // Drops user k (the k-th row). Throws IndexError if k >= K.
    ChannelMatrix remove_row(const ChannelMatrix &H, arma::uword k);

    // Inverse of remove_row: inserts `row` (1 x M) so that it becomes row k.
    ChannelMatrix insert_row(const ChannelMatrix &H, arma::uword k, const arma::cx_rowvec &row);

    // CSV fixtures with header `k,j,re,im`, one line per entry in row-major order.
    void write_channel_csv(std::ostream &os, const ChannelMatrix &H);
    ChannelMatrix read_channel_csv(std::istream &is);
}
