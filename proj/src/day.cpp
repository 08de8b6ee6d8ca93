/*
    Copyright (c) 2026 The limitlens Authors

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#include "limitlens/day.hpp"

#include <charconv>
#include <cstdio>

#include "limitlens/error.hpp"

namespace limitlens {

namespace {

int parse_field(std::string_view text, std::size_t pos, std::size_t len) {
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = first + len;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    return value;
}

}  // namespace

Day parse_day(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ConfigError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{parse_field(text, 0, 4)},
                                          std::chrono::month{static_cast<unsigned>(parse_field(text, 5, 2))},
                                          std::chrono::day{static_cast<unsigned>(parse_field(text, 8, 2))}};
    if (!ymd.ok()) {
        throw ConfigError("invalid calendar date '" + std::string(text) + "'");
    }
    return Day{ymd};
}

std::string format_day(Day day) {
    const std::chrono::year_month_day ymd{day};
    char buf[16];
    const int y = static_cast<int>(ymd.year());
    const unsigned m = static_cast<unsigned>(ymd.month());
    const unsigned d = static_cast<unsigned>(ymd.day());
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
    return buf;
}

int enforced_limit_on(Day day) noexcept {
    return day < Day{kSwitchDate} ? 140 : 280;
}

}  // namespace limitlens
