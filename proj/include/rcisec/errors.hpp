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

#include <stdexcept>
#include <string>

namespace rcisec
{
    // Error categories raised by the library. Everything derives from std::runtime_error
    // or std::invalid_argument so callers can catch coarsely when they do not care.

    class DimensionError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class DomainError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class IndexError : public std::out_of_range
    {
    public:
        using std::out_of_range::out_of_range;
    };

    class SingularMatrix : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class ZeroChannel : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class PowerBudgetExceeded : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class MaxIterationsExceeded : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Thrown when a bracketed scalar search ends on the bracket boundary. Carries the best
    // point seen so callers that tolerate boundary optima can still use it.
    class BracketFailure : public std::runtime_error
    {
    public:
        BracketFailure(const std::string &what, double best_x, double best_value)
            : std::runtime_error(what), best_x(best_x), best_value(best_value) {}
        double best_x;
        double best_value;
    };

    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };
}
