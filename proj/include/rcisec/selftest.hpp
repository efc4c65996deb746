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

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace rcisec
{
    // Replaceable pieces under test; the defaults are the library functions.
    struct SelftestHooks
    {
        std::function<double(double)> g_of_xi;
    };

    // Suite names: channel, precoder, rates, large-system, power-alloc, experiments.
    std::vector<std::string> selftest_suites();

    // Runs the named suites (all when empty) at reduced scale and prints one line per suite.
    // Returns 0 iff every property holds; the first failing property is named on `out`.
    // Throws ConfigError for an unknown suite name.
    int run_selftest(std::ostream &out, const std::vector<std::string> &suites = {},
                     const SelftestHooks &hooks = {});
}
