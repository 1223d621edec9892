// Copyright 2026 The bfbench Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>

#include "bfbench/errors.hpp"

namespace bfbench {

/// 17 significant digits; parses back to the identical double.
inline std::string format_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Shortest representation that round-trips.
inline std::string format_short(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

/// At most `digits` significant digits, trailing zeros dropped.
inline std::string format_sig(double x, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

/// Fixed-point with `digits` decimals, e.g. for SVG coordinates.
inline std::string format_fixed(double x, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    std::string out = buf;
    if (out == "-0" || out.rfind("-0.", 0) == 0) {
        // normalize negative zero so output does not depend on rounding direction
        bool all_zero = out.find_first_not_of("-0.") == std::string::npos;
        if (all_zero) out.erase(0, 1);
    }
    return out;
}

inline double parse_double(std::string_view text, std::size_t line = 0) {
    double value = 0;
    auto first = text.data();
    auto last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw ParseError("expected a number, got '" + std::string(text) + "'", line);
    }
    return value;
}

template <class Int>
Int parse_int(std::string_view text, std::size_t line = 0) {
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError("expected an integer, got '" + std::string(text) + "'", line);
    }
    return value;
}

}  // namespace bfbench
