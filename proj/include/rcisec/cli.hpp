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

#include <iosfwd>

namespace rcisec
{
    // Command-line entry point. Subcommands: large-system, sweep, ccdf, power-alloc, alpha-search,
    // selftest. Returns 0 on success, 2 on a configuration or parse error, 1 on a runtime error.
    int parse_and_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
}
