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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "limitlens/day.hpp"

namespace limitlens {

enum class DeviceClass { web, mobile, excluded };

[[nodiscard]] std::string_view to_string(DeviceClass device) noexcept;
// Accepts "web" and "mobile"; throws ConfigError for anything else.
[[nodiscard]] DeviceClass parse_device(std::string_view name);

// Half-open code-point span [start, end) of the text that counts toward the limit.
struct DisplayRange {
    std::int64_t start = 0;
    std::int64_t end = 0;
};

// One parsed archive entry.
struct TweetRecord {
    std::int64_t id = 0;
    std::chrono::sys_seconds created_at{};
    std::string text;
    std::optional<DisplayRange> display_range;
    std::string lang;
    std::string source_label;
    bool is_retweet = false;
    bool is_delete_event = false;

    [[nodiscard]] Day day() const noexcept { return std::chrono::floor<std::chrono::days>(created_at); }
};

}  // namespace limitlens
