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

#include "rcisec/large_system.hpp"

namespace rcisec::large_system
{
    ComparisonLimits comparison_limits(double rho)
    {
        if (!(rho >= 0.0))
            throw DomainError("comparison_limits requires rho >= 0");
        ComparisonLimits out;
        // Channel inversion: the per-user SINR behaves like 2 rho sqrt(xi) -> 0.
        out.ci_per_antenna = 0.0;
        out.mf_unclipped_log_arg = std::log2((2.0 * rho + 1.0) / ((rho + 1.0) * (rho + 1.0)));
        out.mf_per_antenna = std::max(out.mf_unclipped_log_arg, 0.0);
        return out;
    }

    AsymptoteReport asymptote_report()
    {
        AsymptoteReport r;
        r.secrecy_loss_bits_per_antenna = 0.5 * std::log2(64.0 / 27.0);
        r.gain_vs_xi_inv_rho_bits = std::log2(3.0 * std::sqrt(3.0) / 4.0);
        r.power_loss_db = 10.0 * std::log10(64.0 / 27.0);
        return r;
    }

    LargeSystemPoint evaluate_point(double rho, double xi, int K)
    {
        return {rho, xi, K, g_of_xi(xi), asymptotic_secrecy_sum_rate(xi, rho, K)};
    }
}
