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

#include "limitlens/charcount.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "limitlens/error.hpp"

namespace limitlens {

std::string_view to_string(NormalizationForm form) noexcept {
    return form == NormalizationForm::nfc ? "NFC" : "NFKC";
}

void CountingConfig::validate() const {
    if (default_weight != 1 && default_weight != 2) {
        throw ConfigError("counting config '" + name + "': default_weight must be 1 or 2");
    }
    if (max_weighted_length <= 0) {
        throw ConfigError("counting config '" + name + "': max_weighted_length must be positive");
    }
    for (std::size_t i = 0; i < light_ranges.size(); ++i) {
        const auto& r = light_ranges[i];
        if (r.first > r.last || r.last > 0x10FFFF) {
            throw ConfigError("counting config '" + name + "': invalid code-point range");
        }
        if (i > 0 && light_ranges[i - 1].last >= r.first) {
            throw ConfigError("counting config '" + name + "': light ranges must be sorted and non-overlapping");
        }
    }
}

int CountingConfig::weight(char32_t cp) const noexcept {
    if (default_weight == 1) {
        return 1;
    }
    // First range whose upper bound is >= cp.
    auto it = std::lower_bound(light_ranges.begin(), light_ranges.end(), cp,
                               [](const CodePointRange& r, char32_t c) { return r.last < c; });
    if (it != light_ranges.end() && it->first <= cp) {
        return 1;
    }
    return default_weight;
}

CountingConfig pre2017_config() {
    CountingConfig cfg;
    cfg.name = "pre2017";
    cfg.default_weight = 1;
    cfg.max_weighted_length = 140;
    return cfg;
}

CountingConfig post2017_config() {
    CountingConfig cfg;
    cfg.name = "post2017";
    cfg.default_weight = 2;
    cfg.light_ranges = {{0x0000, 0x10FF}, {0x2000, 0x200D}, {0x2010, 0x201F}, {0x2032, 0x2037}};
    cfg.max_weighted_length = 280;
    return cfg;
}

CountingConfig builtin_counting_config(std::string_view name) {
    if (name == "pre2017") {
        return pre2017_config();
    }
    if (name == "post2017") {
        return post2017_config();
    }
    throw ConfigError("unknown built-in counting config '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

char32_t parse_hex_cp(std::string_view s, std::size_t line_no) {
    s = trim(s);
    if (s.size() > 2 && (s.substr(0, 2) == "U+" || s.substr(0, 2) == "u+" || s.substr(0, 2) == "0x")) {
        s.remove_prefix(2);
    }
    unsigned long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, 16);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || value > 0x10FFFF) {
        throw ConfigError("counting config line " + std::to_string(line_no) + ": bad code point '" +
                          std::string(s) + "'");
    }
    return static_cast<char32_t>(value);
}

int parse_int(std::string_view s, std::size_t line_no) {
    s = trim(s);
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("counting config line " + std::to_string(line_no) + ": bad integer '" +
                          std::string(s) + "'");
    }
    return value;
}

}  // namespace

CountingConfig parse_counting_config(std::string_view text) {
    CountingConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("counting config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "name") {
            cfg.name = std::string(value);
        } else if (key == "normalization") {
            if (value == "NFC") {
                cfg.normalization = NormalizationForm::nfc;
            } else if (value == "NFKC") {
                cfg.normalization = NormalizationForm::nfkc;
            } else {
                throw ConfigError("counting config: unsupported normalization '" + std::string(value) + "'");
            }
        } else if (key == "default_weight") {
            cfg.default_weight = parse_int(value, line_no);
        } else if (key == "max_weighted_length") {
            cfg.max_weighted_length = parse_int(value, line_no);
        } else if (key == "light_ranges") {
            std::string_view rest = value;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const auto item = trim(rest.substr(0, comma));
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
                if (item.empty()) {
                    continue;
                }
                const auto dash = item.find('-');
                CodePointRange r;
                if (dash == std::string_view::npos) {
                    r.first = r.last = parse_hex_cp(item, line_no);
                } else {
                    r.first = parse_hex_cp(item.substr(0, dash), line_no);
                    r.last = parse_hex_cp(item.substr(dash + 1), line_no);
                }
                cfg.light_ranges.push_back(r);
            }
        } else {
            throw ConfigError("counting config line " + std::to_string(line_no) + ": unknown key '" +
                              std::string(key) + "'");
        }
    }
    cfg.validate();
    return cfg;
}

CountingConfig load_counting_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read counting config '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    auto cfg = parse_counting_config(ss.str());
    if (cfg.name == "custom") {
        cfg.name = path.stem().string();
    }
    return cfg;
}

CountingConfig resolve_counting_config(std::string_view name_or_path) {
    if (name_or_path == "pre2017" || name_or_path == "post2017") {
        return builtin_counting_config(name_or_path);
    }
    return load_counting_config(std::filesystem::path(name_or_path));
}

std::u32string decode_utf8(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    const auto* s = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t n = bytes.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char b0 = s[i];
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        char32_t min_cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
            min_cp = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
            min_cp = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
            min_cp = 0x10000;
        } else {
            throw DecodeError(i, "invalid lead byte");
        }
        if (i + len > n) {
            throw DecodeError(i, "truncated sequence");
        }
        for (int k = 1; k < len; ++k) {
            const unsigned char b = s[i + k];
            if ((b & 0xC0) != 0x80) {
                throw DecodeError(i, "invalid continuation byte");
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (cp < min_cp) {
            throw DecodeError(i, "overlong encoding");
        }
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            throw DecodeError(i, "code point out of range");
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

namespace {

bool is_ascii(std::string_view s) noexcept {
    return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

const icu::Normalizer2& normalizer(NormalizationForm form) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = form == NormalizationForm::nfc ? icu::Normalizer2::getNFCInstance(status)
                                                               : icu::Normalizer2::getNFKCInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
        throw Error(std::string("ICU normalizer unavailable: ") + u_errorName(status));
    }
    return *n;
}

}  // namespace

std::string normalize_text(std::string_view raw, NormalizationForm form) {
    // ASCII is invariant under NFC and NFKC.
    if (is_ascii(raw)) {
        return std::string(raw);
    }
    (void)decode_utf8(raw);  // validation with byte offsets

    const auto& norm = normalizer(form);
    const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
    UErrorCode status = U_ZERO_ERROR;
    if (norm.isNormalized(src, status) && U_SUCCESS(status)) {
        return std::string(raw);
    }
    status = U_ZERO_ERROR;
    const icu::UnicodeString dst = norm.normalize(src, status);
    if (U_FAILURE(status)) {
        throw Error(std::string("normalization failed: ") + u_errorName(status));
    }
    std::string out;
    dst.toUTF8String(out);
    return out;
}

WeightedLength weighted_length(std::string_view text, const CountingConfig& config) {
    if (config.default_weight == 1) {
        // Code-point count: every byte that is not a continuation byte starts one.
        std::int64_t n = 0;
        for (char c : text) {
            n += (static_cast<unsigned char>(c) & 0xC0) != 0x80;
        }
        return {n};
    }
    std::int64_t total = 0;
    for (char32_t cp : decode_utf8(text)) {
        total += config.weight(cp);
    }
    return {total};
}

std::string extract_display_text(const TweetRecord& record) {
    if (!record.display_range) {
        return record.text;
    }
    const auto [start, end] = *record.display_range;
    if (start < 0 || start > end) {
        throw MalformedRecord("display range [" + std::to_string(start) + ", " + std::to_string(end) +
                              "] is inverted or negative");
    }
    const std::u32string cps = decode_utf8(record.text);
    if (end > static_cast<std::int64_t>(cps.size())) {
        throw MalformedRecord("display range end " + std::to_string(end) + " exceeds text length " +
                              std::to_string(cps.size()));
    }
    if (start == 0 && end == static_cast<std::int64_t>(cps.size())) {
        return record.text;
    }
    return encode_utf8(std::u32string_view(cps).substr(static_cast<std::size_t>(start),
                                                       static_cast<std::size_t>(end - start)));
}

WeightedLength count_tweet(const TweetRecord& record, const CountingConfig& config) {
    return weighted_length(normalize_text(extract_display_text(record), config.normalization), config);
}

CountingPolicy CountingPolicy::automatic() {
    CountingPolicy p;
    p.automatic_ = true;
    p.before_ = pre2017_config();
    p.after_ = post2017_config();
    return p;
}

CountingPolicy CountingPolicy::fixed(CountingConfig config) {
    config.validate();
    CountingPolicy p;
    p.automatic_ = false;
    p.before_ = config;
    p.after_ = std::move(config);
    return p;
}

CountingPolicy CountingPolicy::resolve(std::string_view name) {
    if (name.empty() || name == "auto") {
        return automatic();
    }
    return fixed(resolve_counting_config(name));
}

const CountingConfig& CountingPolicy::for_day(Day day) const noexcept {
    if (!automatic_) {
        return before_;
    }
    return day < Day{kSwitchDate} ? before_ : after_;
}

std::string CountingPolicy::describe() const {
    return automatic_ ? "auto(pre2017|post2017)" : before_.name;
}

}  // namespace limitlens
