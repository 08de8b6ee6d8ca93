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

#include "limitlens/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <unicode/uchar.h>

#include "limitlens/error.hpp"

namespace limitlens {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::u32string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(encode_utf8(current));
            current.clear();
        }
    };
    for (char32_t cp : decode_utf8(text)) {
        if (u_isalnum(static_cast<UChar32>(cp))) {
            current.push_back(static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

namespace {

std::string lowercase(std::string_view s) {
    std::u32string cps = decode_utf8(s);
    for (auto& cp : cps) {
        cp = static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
    }
    return encode_utf8(cps);
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

}  // namespace

Lexicon Lexicon::parse(std::string_view text) {
    Lexicon lex;
    std::size_t line_no = 0;
    auto check_last = [&] {
        if (!lex.categories_.empty() && lex.categories_.back().exact.empty() &&
            lex.categories_.back().prefixes.empty()) {
            throw ConfigError("lexicon category '" + lex.categories_.back().name + "' has no patterns");
        }
    };
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("lexicon line " + std::to_string(line_no) + ": malformed category header");
            }
            check_last();
            std::string name(trim(line.substr(1, line.size() - 2)));
            const bool dup = std::any_of(lex.categories_.begin(), lex.categories_.end(),
                                         [&](const Category& c) { return c.name == name; });
            if (name.empty() || dup) {
                throw ConfigError("lexicon line " + std::to_string(line_no) + ": empty or duplicate category '" +
                                  name + "'");
            }
            lex.categories_.push_back(Category{std::move(name), {}, {}, 0, 0});
            continue;
        }
        if (lex.categories_.empty()) {
            throw ConfigError("lexicon line " + std::to_string(line_no) + ": pattern before any [Category]");
        }
        auto& cat = lex.categories_.back();
        std::string pattern = lowercase(line);
        if (pattern.back() == '*') {
            pattern.pop_back();
            if (pattern.empty()) {
                throw ConfigError("lexicon line " + std::to_string(line_no) + ": empty prefix pattern");
            }
            cat.shortest_prefix = cat.prefixes.empty() ? pattern.size() : std::min(cat.shortest_prefix, pattern.size());
            cat.longest_prefix = std::max(cat.longest_prefix, pattern.size());
            cat.prefixes.insert(std::move(pattern));
        } else {
            cat.exact.insert(std::move(pattern));
        }
    }
    check_last();
    if (lex.categories_.empty()) {
        throw ConfigError("lexicon has no categories");
    }
    return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read lexicon '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool Lexicon::matches(std::size_t category, std::string_view token) const {
    const auto& cat = categories_.at(category);
    if (cat.exact.contains(std::string(token))) {
        return true;
    }
    if (cat.prefixes.empty()) {
        return false;
    }
    const auto longest = std::min(cat.longest_prefix, token.size());
    for (std::size_t len = cat.shortest_prefix; len <= longest; ++len) {
        if (cat.prefixes.contains(std::string(token.substr(0, len)))) {
            return true;
        }
    }
    return false;
}

std::vector<bool> Lexicon::categories_in(std::string_view text) const {
    std::vector<bool> hits(categories_.size(), false);
    for (const auto& token : tokenize(text)) {
        for (std::size_t c = 0; c < categories_.size(); ++c) {
            if (!hits[c] && matches(c, token)) {
                hits[c] = true;
            }
        }
    }
    return hits;
}

CurveCounts::CurveCounts(std::size_t categories, int max_len)
    : tweets_(static_cast<std::size_t>(max_len) + 1, 0),
      hits_(categories, std::vector<std::int64_t>(static_cast<std::size_t>(max_len) + 1, 0)) {}

void CurveCounts::add(int length, const std::vector<bool>& hits) {
    if (length < 1 || length > max_len()) {
        throw DomainError("length outside curve range");
    }
    const auto l = static_cast<std::size_t>(length);
    ++tweets_[l];
    for (std::size_t c = 0; c < hits_.size() && c < hits.size(); ++c) {
        hits_[c][l] += hits[c] ? 1 : 0;
    }
}

void CurveCounts::merge(const CurveCounts& other) {
    if (tweets_.empty()) {
        *this = other;
        return;
    }
    if (other.tweets_.empty()) {
        return;
    }
    if (other.tweets_.size() != tweets_.size() || other.hits_.size() != hits_.size()) {
        throw DimensionError("curve counts differ in shape");
    }
    for (std::size_t l = 0; l < tweets_.size(); ++l) {
        tweets_[l] += other.tweets_[l];
    }
    for (std::size_t c = 0; c < hits_.size(); ++c) {
        for (std::size_t l = 0; l < tweets_.size(); ++l) {
            hits_[c][l] += other.hits_[c][l];
        }
    }
}

std::vector<CategoryCurve> category_curves(const CurveCounts& counts, const Lexicon& lexicon) {
    std::vector<CategoryCurve> curves;
    std::int64_t all_tweets = 0;
    for (int l = 1; l <= counts.max_len(); ++l) {
        all_tweets += counts.tweets(l);
    }
    for (std::size_t c = 0; c < counts.categories(); ++c) {
        CategoryCurve curve;
        curve.name = lexicon.name(c);
        curve.freq.assign(static_cast<std::size_t>(counts.max_len()) + 1, std::nullopt);
        curve.enrichment = curve.freq;
        std::int64_t all_hits = 0;
        for (int l = 1; l <= counts.max_len(); ++l) {
            all_hits += counts.hits(c, l);
        }
        curve.overall = all_tweets > 0 ? static_cast<double>(all_hits) / static_cast<double>(all_tweets) : 0.0;
        for (int l = 1; l <= counts.max_len(); ++l) {
            const auto n = counts.tweets(l);
            if (n == 0) {
                continue;
            }
            const double f = static_cast<double>(counts.hits(c, l)) / static_cast<double>(n);
            curve.freq[static_cast<std::size_t>(l)] = f;
            if (curve.overall > 0.0) {
                curve.enrichment[static_cast<std::size_t>(l)] = f / curve.overall;
            }
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<CategoryCurve> category_curves(std::span<const TweetRecord> records, const Lexicon& lexicon,
                                           const CountingConfig& config, int max_len) {
    CurveCounts counts(lexicon.size(), max_len);
    for (const auto& record : records) {
        const std::string text = normalize_text(extract_display_text(record), config.normalization);
        const auto length = weighted_length(text, config).value;
        if (length < 1 || length > max_len) {
            continue;
        }
        counts.add(static_cast<int>(length), lexicon.categories_in(text));
    }
    return category_curves(counts, lexicon);
}

}  // namespace limitlens
