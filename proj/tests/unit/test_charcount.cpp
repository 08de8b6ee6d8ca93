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

#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"

#include "limitlens/charcount.hpp"
#include "limitlens/error.hpp"
#include "limitlens/record.hpp"

using namespace limitlens;

namespace {

std::int64_t post(std::string_view s) {
    return weighted_length(normalize_text(s), post2017_config()).value;
}

std::int64_t pre(std::string_view s) {
    return weighted_length(normalize_text(s), pre2017_config()).value;
}

TweetRecord with_text(std::string text, std::optional<DisplayRange> range = std::nullopt) {
    TweetRecord r;
    r.text = std::move(text);
    r.display_range = range;
    return r;
}

std::string from_hex_list(const std::string& list) {
    std::u32string cps;
    if (list == "-") {
        return {};
    }
    std::istringstream in(list);
    std::string tok;
    while (in >> tok) {
        cps.push_back(static_cast<char32_t>(std::stoul(tok, nullptr, 16)));
    }
    return encode_utf8(cps);
}

}  // namespace

TEST_CASE("normalize_text") {
    CHECK(normalize_text("hello") == "hello");
    CHECK(normalize_text("") == "");
    CHECK(normalize_text("e\xCC\x81") == "\xC3\xA9");
    // Angstrom sign composes to A with ring above.
    CHECK(normalize_text("\xE2\x84\xAB") == "\xC3\x85");
    CHECK(normalize_text("\xEF\xBC\xA1", NormalizationForm::nfkc) == "A");
    CHECK(normalize_text("\xEF\xBC\xA1") == "\xEF\xBC\xA1");
}

TEST_CASE("invalid UTF-8 names the byte offset") {
    try {
        (void)normalize_text("abc\xFF" "def");
        FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
        CHECK(e.offset() == 3);
        CHECK(std::string(e.what()).find("offset 3") != std::string::npos);
    }
    CHECK_THROWS_AS((void)decode_utf8("ok\xC0\xAF"), DecodeError);          // overlong '/'
    CHECK_THROWS_AS((void)decode_utf8("\xED\xA0\x80"), DecodeError);        // surrogate
    CHECK_THROWS_AS((void)decode_utf8("\xF4\x90\x80\x80"), DecodeError);    // > U+10FFFF
    CHECK_THROWS_AS((void)decode_utf8("\xE3\x81"), DecodeError);            // truncated
    try {
        (void)decode_utf8("\xE3\x81\x93\xE3\x81");
    } catch (const DecodeError& e) {
        CHECK(e.offset() == 3);
    }
}

TEST_CASE("weighted_length worked examples") {
    CHECK(post("hello") == 5);
    CHECK(post("\xE3\x81\x93\xE3\x82\x93\xE3\x81\xAB\xE3\x81\xA1\xE3\x81\xAF") == 10);
    CHECK(pre("\xE3\x81\x93\xE3\x82\x93\xE3\x81\xAB\xE3\x81\xA1\xE3\x81\xAF") == 5);
    CHECK(post("\xF0\x9F\x91\x8D") == 2);
    CHECK(post("\xF0\x9F\x91\xA8\xE2\x80\x8D\xF0\x9F\x91\xA9\xE2\x80\x8D\xF0\x9F\x91\xA7") == 8);
    CHECK(post("") == 0);
    CHECK(pre("") == 0);
}

TEST_CASE("display range slicing") {
    CHECK(extract_display_text(with_text("@alice hi", DisplayRange{7, 9})) == "hi");
    CHECK(extract_display_text(with_text("whole text", DisplayRange{0, 10})) == "whole text");
    CHECK(extract_display_text(with_text("no range")) == "no range");
    // Code points, not bytes: the emoji is one index.
    CHECK(extract_display_text(with_text("\xF0\x9F\x91\x8D ok", DisplayRange{2, 4})) == "ok");
    CHECK_THROWS_AS((void)extract_display_text(with_text("hello world", DisplayRange{5, 3})), MalformedRecord);
    CHECK_THROWS_AS((void)extract_display_text(with_text("short", DisplayRange{0, 6})), MalformedRecord);
    CHECK_THROWS_AS((void)extract_display_text(with_text("short", DisplayRange{-1, 2})), MalformedRecord);
    CHECK(count_tweet(with_text("@alice hi", DisplayRange{7, 9}), post2017_config()).value == 2);
}

TEST_CASE("golden counting vectors") {
    std::ifstream in(testutil::source_dir() / "data" / "counting_golden.tsv");
    REQUIRE(in);
    std::string line;
    int cases = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, '\t')) {
            f.push_back(cell);
        }
        REQUIRE(f.size() == 6);
        TweetRecord r = with_text(from_hex_list(f[1]));
        if (f[2] != "-") {
            r.display_range = DisplayRange{std::stoll(f[2]), std::stoll(f[3])};
        }
        INFO("case " << f[0]);
        CHECK(count_tweet(r, pre2017_config()).value == std::stoll(f[4]));
        CHECK(count_tweet(r, post2017_config()).value == std::stoll(f[5]));
        ++cases;
    }
    CHECK(cases == 50);
}

TEST_CASE("weight table boundaries") {
    const CountingConfig c = post2017_config();
    CHECK(c.weight(U'ჿ') == 1);
    CHECK(c.weight(U'ᄀ') == 2);
    CHECK(c.weight(U'‍') == 1);
    CHECK(c.weight(U'‎') == 2);
    CHECK(c.weight(U'‐') == 1);
    CHECK(c.weight(U'‟') == 1);
    CHECK(c.weight(U'†') == 2);
    CHECK(c.weight(U'′') == 1);
    CHECK(c.weight(U'‷') == 1);
    CHECK(c.weight(U'‸') == 2);
    CHECK(c.max_weighted_length == 280);
    CHECK(pre2017_config().max_weighted_length == 140);
}

TEST_CASE("counting properties over random text") {
    std::mt19937_64 rng(11);
    // Pools mixing Latin, combining marks, Hangul jamo, CJK, emoji and ZWJ.
    const std::vector<char32_t> pool{U'a',      U'Z',      U' ',      U'́', U'é', U'ᄀ',
                                     U'ᅡ', U'ᆨ', U'あ', U'漢', U'‍', U'…',
                                     U'\U0001F44D', U'\U0001F3FD', U'ا', U'ส'};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> len(0, 30);
    CountingConfig plain;
    plain.default_weight = 1;
    for (int trial = 0; trial < 500; ++trial) {
        std::u32string cps;
        for (int i = len(rng); i > 0; --i) {
            cps.push_back(pool[pick(rng)]);
        }
        const std::string raw = encode_utf8(cps);
        const std::string once = normalize_text(raw);
        CHECK(normalize_text(once) == once);
        CHECK(weighted_length(normalize_text(once), post2017_config()) ==
              weighted_length(once, post2017_config()));
        // Degenerate config counts code points.
        CHECK(weighted_length(once, plain).value == static_cast<std::int64_t>(decode_utf8(once).size()));
        // Appending any code point grows the (unnormalized) weighted length.
        std::u32string more = decode_utf8(once);
        more.push_back(pool[pick(rng)]);
        CHECK(weighted_length(encode_utf8(more), post2017_config()) > weighted_length(once, post2017_config()));
    }
}

TEST_CASE("pure CJK doubles under post-switch rules") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint32_t> han(0x4E00, 0x9FFF);
    for (int trial = 0; trial < 100; ++trial) {
        std::u32string cps(static_cast<std::size_t>(trial % 40 + 1), U'\0');
        for (auto& c : cps) {
            c = han(rng);
        }
        const std::string s = encode_utf8(cps);
        CHECK(post(s) == 2 * pre(s));
    }
}

TEST_CASE("counting config file format") {
    const CountingConfig c = parse_counting_config(
        "# custom rules\n"
        "name = halfheavy\n"
        "normalization = NFKC\n"
        "default_weight = 2\n"
        "light_ranges = 0000-007F, 3040-309F\n"
        "light_ranges = 4E00-4E00\n"
        "max_weighted_length = 200\n");
    CHECK(c.name == "halfheavy");
    CHECK(c.normalization == NormalizationForm::nfkc);
    CHECK(c.default_weight == 2);
    REQUIRE(c.light_ranges.size() == 3);
    CHECK(c.light_ranges[1] == CodePointRange{0x3040, 0x309F});
    CHECK(c.max_weighted_length == 200);
    CHECK(c.weight(U'あ') == 1);
    CHECK(c.weight(U'ア') == 2);

    CHECK_THROWS_AS((void)parse_counting_config("default_weight = 3\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_counting_config("max_weighted_length = 0\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_counting_config("light_ranges = 0100-0200, 0150-0300\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_counting_config("colour = blue\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_counting_config("normalization = NFD\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_counting_config("just words\n"), ConfigError);

    testutil::TempDir dir("cfg");
    testutil::spit(dir / "c.conf", "default_weight = 2\nlight_ranges = 0000-10FF\nmax_weighted_length = 280\n");
    CHECK(resolve_counting_config((dir / "c.conf").string()).default_weight == 2);
    CHECK(resolve_counting_config("pre2017").default_weight == 1);
    CHECK_THROWS_AS((void)resolve_counting_config("post2099"), IoError);
}

TEST_CASE("counting policy follows the switch date") {
    const CountingPolicy automatic = CountingPolicy::resolve("auto");
    CHECK(automatic.for_day(parse_day("2017-11-06")).max_weighted_length == 140);
    CHECK(automatic.for_day(parse_day("2017-11-07")).max_weighted_length == 280);
    const CountingPolicy fixed = CountingPolicy::resolve("post2017");
    CHECK(fixed.for_day(parse_day("2017-01-01")).default_weight == 2);
    CHECK(automatic.describe() != fixed.describe());
}
