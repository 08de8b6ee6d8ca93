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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "limitlens/day.hpp"
#include "limitlens/record.hpp"

namespace limitlens {

enum class NormalizationForm { nfc, nfkc };

[[nodiscard]] std::string_view to_string(NormalizationForm form) noexcept;

// Inclusive code-point range.
struct CodePointRange {
    char32_t first = 0;
    char32_t last = 0;

    friend bool operator==(const CodePointRange&, const CodePointRange&) = default;
};

/// Weighted-length rules: every code point weighs `default_weight` unless it
/// falls inside one of the `light_ranges`, which weigh 1. `max_weighted_length`
/// is the enforced limit L.
struct CountingConfig {
    std::string name = "custom";
    NormalizationForm normalization = NormalizationForm::nfc;
    int default_weight = 1;
    std::vector<CodePointRange> light_ranges;
    int max_weighted_length = 140;

    // Throws ConfigError on overlapping/unsorted ranges, weight outside {1, 2},
    // or a non-positive limit.
    void validate() const;

    [[nodiscard]] int weight(char32_t cp) const noexcept;
};

// All code points weigh 1, limit 140.
[[nodiscard]] CountingConfig pre2017_config();
// Default weight 2 with the Latin/punctuation light ranges, limit 280.
[[nodiscard]] CountingConfig post2017_config();
// "pre2017" or "post2017".
[[nodiscard]] CountingConfig builtin_counting_config(std::string_view name);

/// Parses the key/value config format:
///
///     # comment
///     name = mycfg
///     normalization = NFC
///     default_weight = 2
///     light_ranges = 0000-10FF, 2000-200D
///     max_weighted_length = 280
///
/// `light_ranges` may repeat; ranges accumulate. Hex bounds, inclusive.
[[nodiscard]] CountingConfig parse_counting_config(std::string_view text);
[[nodiscard]] CountingConfig load_counting_config(const std::filesystem::path& path);
// Built-in name or a path to a config file.
[[nodiscard]] CountingConfig resolve_counting_config(std::string_view name_or_path);

struct WeightedLength {
    std::int64_t value = 0;

    friend auto operator<=>(const WeightedLength&, const WeightedLength&) = default;
};

// Strict decoder: rejects overlong forms, surrogates and code points past U+10FFFF.
[[nodiscard]] std::u32string decode_utf8(std::string_view bytes);
[[nodiscard]] std::string encode_utf8(std::u32string_view cps);

[[nodiscard]] std::string normalize_text(std::string_view raw,
                                         NormalizationForm form = NormalizationForm::nfc);

// Sum of per-code-point weights; `text` is expected to be normalized already.
[[nodiscard]] WeightedLength weighted_length(std::string_view text, const CountingConfig& config);

// The code-point slice [start, end) of the record text, or the whole text when
// the record has no display range. Throws MalformedRecord on a bad range.
[[nodiscard]] std::string extract_display_text(const TweetRecord& record);

// extract -> normalize -> weigh.
[[nodiscard]] WeightedLength count_tweet(const TweetRecord& record, const CountingConfig& config);

/// Which counting rules apply to a record's day. `auto` follows the platform
/// history (pre2017 before the switch date, post2017 from it on).
class CountingPolicy {
public:
    static CountingPolicy automatic();
    static CountingPolicy fixed(CountingConfig config);
    // "auto", a built-in name, or a config file path.
    static CountingPolicy resolve(std::string_view name);

    [[nodiscard]] const CountingConfig& for_day(Day day) const noexcept;
    [[nodiscard]] std::string describe() const;

private:
    bool automatic_ = true;
    CountingConfig before_;
    CountingConfig after_;
};

}  // namespace limitlens
