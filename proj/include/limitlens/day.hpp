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

#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace limitlens {

using Day = std::chrono::sys_days;

// Parses an ISO calendar date "YYYY-MM-DD"; throws ConfigError otherwise.
Day parse_day(std::string_view text);
std::string format_day(Day day);

// Inclusive span of calendar days.
struct DayRange {
    Day first;
    Day last;

    [[nodiscard]] bool contains(Day d) const noexcept { return first <= d && d <= last; }
    [[nodiscard]] bool empty() const noexcept { return last < first; }
    [[nodiscard]] long size() const noexcept { return empty() ? 0 : (last - first).count() + 1; }
};

// Day the 280-character limit took effect.
inline constexpr std::chrono::year_month_day kSwitchDate{
    std::chrono::year{2017}, std::chrono::month{11}, std::chrono::day{7}};

// The limit enforced on a given day for languages where the switch happened.
[[nodiscard]] int enforced_limit_on(Day day) noexcept;

}  // namespace limitlens
