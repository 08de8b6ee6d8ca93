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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "limitlens/charcount.hpp"
#include "limitlens/record.hpp"

namespace limitlens {

// Lowercased tokens of `text`, split on anything that is not a Unicode letter or digit.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view text);

/// Word categories read from blocks of the form
///
///     [CategoryName]
///     word
///     prefix*
///
/// Patterns are lowercased; a trailing '*' makes a prefix pattern. Blank
/// lines and lines starting with '#' are ignored.
class Lexicon {
public:
    [[nodiscard]] static Lexicon parse(std::string_view text);
    [[nodiscard]] static Lexicon load(const std::filesystem::path& path);

    [[nodiscard]] std::size_t size() const noexcept { return categories_.size(); }
    [[nodiscard]] const std::string& name(std::size_t category) const { return categories_.at(category).name; }
    [[nodiscard]] bool matches(std::size_t category, std::string_view token) const;

    // For each category, whether any token of the text matches it.
    [[nodiscard]] std::vector<bool> categories_in(std::string_view text) const;

private:
    struct Category {
        std::string name;
        std::unordered_set<std::string> exact;
        std::unordered_set<std::string> prefixes;
        std::size_t shortest_prefix = 0;
        std::size_t longest_prefix = 0;
    };
    std::vector<Category> categories_;
};

/// Per weighted length: how many tweets, and how many hit each category.
class CurveCounts {
public:
    CurveCounts() = default;
    CurveCounts(std::size_t categories, int max_len);

    void add(int length, const std::vector<bool>& hits);
    void merge(const CurveCounts& other);

    [[nodiscard]] int max_len() const noexcept { return static_cast<int>(tweets_.size()) - 1; }
    [[nodiscard]] std::int64_t tweets(int length) const { return tweets_.at(static_cast<std::size_t>(length)); }
    [[nodiscard]] std::int64_t hits(std::size_t category, int length) const {
        return hits_.at(category).at(static_cast<std::size_t>(length));
    }
    [[nodiscard]] std::size_t categories() const noexcept { return hits_.size(); }

private:
    std::vector<std::int64_t> tweets_;
    std::vector<std::vector<std::int64_t>> hits_;
};

/// freq[l]: fraction of length-l tweets with at least one match (nullopt
/// when no tweet has length l); enrichment[l] = freq[l] / overall.
struct CategoryCurve {
    std::string name;
    double overall = 0.0;
    std::vector<std::optional<double>> freq;
    std::vector<std::optional<double>> enrichment;
};

[[nodiscard]] std::vector<CategoryCurve> category_curves(const CurveCounts& counts, const Lexicon& lexicon);

// Counts the records directly (display text, normalized, weighed by `config`);
// records longer than max_len or empty are skipped.
[[nodiscard]] std::vector<CategoryCurve> category_curves(std::span<const TweetRecord> records,
                                                         const Lexicon& lexicon, const CountingConfig& config,
                                                         int max_len = 280);

}  // namespace limitlens
