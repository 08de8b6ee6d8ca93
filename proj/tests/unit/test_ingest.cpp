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

#include <algorithm>
#include <cstring>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

#include "limitlens/archive.hpp"
#include "limitlens/error.hpp"
#include "limitlens/ingest.hpp"

using namespace limitlens;
namespace fs = std::filesystem;

namespace {

const char* kTweet =
    R"({"created_at":"Wed Mar 01 12:00:00 +0000 2017","id":7,"id_str":"7","text":"hello there",)"
    R"("source":"<a href=\"http://twitter.com/download/iphone\" rel=\"nofollow\">Twitter for iPhone</a>",)"
    R"("lang":"en"})";

TweetRecord parsed(std::string_view line) {
    auto out = parse_record(line);
    REQUIRE(std::holds_alternative<TweetRecord>(out));
    return std::get<TweetRecord>(out);
}

SkipReason skipped(std::string_view line) {
    auto out = parse_record(line);
    REQUIRE(std::holds_alternative<Skip>(out));
    return std::get<Skip>(out).reason;
}

TweetRecord english(std::string label, std::string day = "2018-05-05") {
    TweetRecord r;
    r.text = "hi";
    r.lang = "en";
    r.source_label = std::move(label);
    r.created_at = parse_day(day) + std::chrono::hours(3);
    return r;
}

std::optional<DropReason> drop_of(const TweetRecord& r, const FilterConfig& cfg = FilterConfig::defaults()) {
    const auto out = filter_record(r, cfg);
    if (const auto* d = std::get_if<Drop>(&out)) {
        return d->reason;
    }
    return std::nullopt;
}

// 512-byte ustar header with a valid checksum.
std::string tar_header(const std::string& name, std::size_t size, char type) {
    std::string h(512, '\0');
    std::memcpy(h.data(), name.data(), std::min<std::size_t>(name.size(), 100));
    std::snprintf(h.data() + 100, 8, "%07o", 0644);
    std::snprintf(h.data() + 108, 8, "%07o", 0);
    std::snprintf(h.data() + 116, 8, "%07o", 0);
    std::snprintf(h.data() + 124, 12, "%011zo", size);
    std::snprintf(h.data() + 136, 12, "%011o", 0);
    h[156] = type;
    std::memcpy(h.data() + 257, "ustar", 6);
    std::memcpy(h.data() + 263, "00", 2);
    std::memset(h.data() + 148, ' ', 8);
    unsigned sum = 0;
    for (unsigned char c : h) {
        sum += c;
    }
    std::snprintf(h.data() + 148, 8, "%06o", sum);
    return h;
}

std::string padded(const std::string& data) {
    std::string out = data;
    out.resize((data.size() + 511) / 512 * 512, '\0');
    return out;
}

std::vector<std::string> lines_of(const fs::path& p) {
    std::vector<std::string> out;
    for_each_line(p, [&](std::string_view l) { out.emplace_back(l); });
    return out;
}

}  // namespace

TEST_CASE("parse_record extracts the fields") {
    const TweetRecord r = parsed(kTweet);
    CHECK(r.id == 7);
    CHECK(r.text == "hello there");
    CHECK(r.lang == "en");
    CHECK(r.source_label == "Twitter for iPhone");
    CHECK(format_day(r.day()) == "2017-03-01");
    CHECK_FALSE(r.display_range.has_value());
}

TEST_CASE("parse_record prefers the extended text and its display range") {
    const std::string line =
        R"({"created_at":"Tue Mar 05 01:02:03 +0000 2019","id_str":"12","text":"short…","truncated":true,)"
        R"("extended_tweet":{"full_text":"@x the whole long text","display_text_range":[3,22]},)"
        R"("source":"Twitter Web App","lang":"fr"})";
    const TweetRecord r = parsed(line);
    CHECK(r.id == 12);
    CHECK(r.text == "@x the whole long text");
    REQUIRE(r.display_range.has_value());
    CHECK(r.display_range->start == 3);
    CHECK(r.display_range->end == 22);
    CHECK(r.source_label == "Twitter Web App");

    const TweetRecord full = parsed(
        R"({"created_at":"Tue Mar 05 01:02:03 +0000 2019","id":1,"full_text":"ft","display_text_range":[0,2],)"
        R"("text":"t","source":"x","lang":"en"})");
    CHECK(full.text == "ft");
}

TEST_CASE("parse_record skips") {
    CHECK(skipped(R"({"delete":{"status":{"id":1}}})") == SkipReason::delete_event);
    CHECK(skipped(R"({"created_at":"Wed Mar 01 12:00:00 +0000 2017","id":1,"text":"RT x","source":"a",)"
                  R"("lang":"en","retweeted_status":{"id":2}})") == SkipReason::retweet);
    CHECK(skipped(R"({"created_at": "Wed Mar 01 12:00)") == SkipReason::unparseable);
    CHECK(skipped("[1,2,3]") == SkipReason::unparseable);
    CHECK(skipped("not json at all") == SkipReason::unparseable);
    CHECK(skipped(R"({"created_at":"Wed Mar 01 12:00:00 +0000 2017","id":1,"text":"x","source":"a"})") ==
          SkipReason::missing_fields);
    CHECK(skipped(R"({"id":1,"text":"x","source":"a","lang":"en"})") == SkipReason::missing_fields);
}

TEST_CASE("classify_device") {
    CHECK(classify_device("Twitter Web Client") == DeviceClass::web);
    CHECK(classify_device("Twitter Web App") == DeviceClass::web);
    CHECK(classify_device("Mobile Web (M2)") == DeviceClass::web);
    CHECK(classify_device("Twitter for Android") == DeviceClass::mobile);
    CHECK(classify_device("Twitter for iPhone") == DeviceClass::mobile);
    CHECK(classify_device("Twitter for iPad") == DeviceClass::mobile);
    CHECK(classify_device("Twitter for Windows Phone") == DeviceClass::mobile);
    CHECK(classify_device("Twitter Lite") == DeviceClass::mobile);
    CHECK(classify_device("SuperBot3000") == DeviceClass::excluded);
    CHECK(classify_device("TweetDeck") == DeviceClass::excluded);
    CHECK(classify_device("My Web Bot") == DeviceClass::excluded);
    CHECK(extract_source_label(R"(<a href="https://x" rel="nofollow">Twitter for iPad</a>)") == "Twitter for iPad");
    CHECK(extract_source_label("web") == "web");
}

TEST_CASE("filter_record") {
    const FilterConfig cfg = FilterConfig::defaults();
    CHECK(cfg.treated.size() == 20);
    CHECK(cfg.control.size() == 3);
    CHECK(cfg.languages().size() == 23);

    const auto keep = filter_record(english("Twitter for iPhone"), cfg);
    REQUIRE(std::holds_alternative<Keep>(keep));
    CHECK(std::get<Keep>(keep).device == DeviceClass::mobile);

    TweetRecord other = english("Twitter for iPhone");
    other.lang = "xx";
    CHECK(drop_of(other) == DropReason::language);
    CHECK(drop_of(english("Twitter for iPhone", "2016-12-31")) == DropReason::date);
    CHECK(drop_of(english("Twitter for iPhone", "2019-11-01")) == DropReason::date);
    CHECK_FALSE(drop_of(english("Twitter for iPhone", "2019-10-31")).has_value());
    CHECK(drop_of(english("SuperBot3000")) == DropReason::source);
    TweetRecord rt = english("Twitter for iPhone");
    rt.is_retweet = true;
    CHECK(drop_of(rt) == DropReason::retweet);
}

TEST_CASE("filter config JSON round trip and errors") {
    const FilterConfig d = FilterConfig::defaults();
    const FilterConfig back = parse_filter_config(d.to_json());
    CHECK(back.to_json() == d.to_json());
    CHECK(back.sources == d.sources);

    const FilterConfig custom = parse_filter_config(
        R"({"languages":{"treated":["en"],"control":["ja"]},"sources":{"web":["Twitter Web App"],)"
        R"("mobile":["Twitter Lite"]},"date_range":{"first":"2018-01-01","last":"2018-01-31"}})");
    CHECK(custom.classify("Twitter Lite") == DeviceClass::mobile);
    CHECK(custom.classify("Twitter for iPhone") == DeviceClass::excluded);
    CHECK(custom.allows_language("ja"));
    CHECK_FALSE(custom.allows_language("es"));

    CHECK_THROWS_AS((void)parse_filter_config("{"), ConfigError);
    CHECK_THROWS_AS((void)parse_filter_config(
                        R"({"languages":{"treated":[],"control":["ja"]},"sources":{"web":["a"]}})"),
                    ConfigError);
    CHECK_THROWS_AS((void)parse_filter_config(
                        R"({"languages":{"treated":["en"],"control":["ja"]},"sources":{"web":["a"]},)"
                        R"("date_range":{"first":"2018-13-01","last":"2018-01-31"}})"),
                    ConfigError);

    const FilterConfig shipped = load_filter_config(testutil::source_dir().parent_path() / "config" / "filter.json");
    CHECK(shipped.to_json() == d.to_json());
}

TEST_CASE("process_line tallies every record once") {
    ScanOptions options;
    IngestTally tally;
    int kept = 0;
    auto on_kept = [&](const KeptTweet& t) {
        ++kept;
        CHECK(t.length == 11);
        CHECK(t.device == DeviceClass::mobile);
    };
    process_line(kTweet, options, tally, on_kept);
    process_line("", options, tally, on_kept);
    process_line("   \r", options, tally, on_kept);
    process_line("garbage", options, tally, on_kept);
    process_line(R"({"delete":{}})", options, tally, on_kept);
    std::string empty_text = kTweet;
    empty_text.replace(empty_text.find("hello there"), 11, "");
    process_line(empty_text, options, tally, on_kept);
    std::string bad_range = kTweet;
    bad_range.insert(bad_range.size() - 1, R"(,"display_text_range":[9,2])");
    process_line(bad_range, options, tally, on_kept);
    std::string bad_utf8 = kTweet;
    bad_utf8.replace(bad_utf8.find("hello"), 1, "\xFF");
    process_line(bad_utf8, options, tally, on_kept);

    CHECK(kept == 1);
    CHECK(tally.records_in == 6);
    CHECK(tally.kept == 1);
    // The JSON parser itself rejects invalid UTF-8.
    CHECK(tally.drops[DropReason::unparseable] == 2);
    CHECK(tally.drops[DropReason::malformed] == 1);
    CHECK(tally.drops[DropReason::delete_event] == 1);
    CHECK(tally.drops[DropReason::empty_text] == 1);
    CHECK(tally.conserved());
}

TEST_CASE("process_line flags counting anomalies and over-length text") {
    ScanOptions options;
    options.counting = CountingPolicy::resolve("pre2017");
    IngestTally tally;
    std::string long_text = kTweet;
    long_text.replace(long_text.find("hello there"), 11, std::string(200, 'a'));
    process_line(long_text, options, tally, [](const KeptTweet&) {});
    CHECK(tally.kept == 1);
    CHECK(tally.counting_anomalies == 1);
    std::string too_long = kTweet;
    too_long.replace(too_long.find("hello there"), 11, std::string(281, 'a'));
    process_line(too_long, options, tally, [](const KeptTweet&) {});
    CHECK(tally.drops[DropReason::over_length] == 1);
    CHECK(tally.conserved());
}

TEST_CASE("archive formats") {
    const fs::path corpus = testutil::fixture("corpus");
    const auto plain = lines_of(corpus / "2017-03-01.jsonl");
    const auto gz = lines_of(corpus / "2017-03-02.jsonl.gz");
    const auto bz = lines_of(corpus / "2017-03-03.jsonl.bz2");
    const auto tar = lines_of(corpus / "2019-03.tar");
    // 980 tweets and 7 noise lines per day; the tar adds a README member.
    CHECK(plain.size() == 987);
    CHECK(gz.size() == 987);
    CHECK(bz.size() == 987);
    CHECK(tar.size() == 3 * 987 + 1);
    CHECK(std::count(tar.begin(), tar.end(), "not a shard, but lines are lines") == 1);

    testutil::TempDir dir("tar");
    const std::string a = "{\"a\":1}\n{\"a\":2}";
    const std::string b = "line b\r\n";
    const std::string long_name(150, 'n');
    std::string bytes = tar_header("dir/", 0, '5') + tar_header("a.jsonl", a.size(), '0') + padded(a) +
                        tar_header("././@LongLink", long_name.size() + 1, 'L') + padded(long_name + '\0') +
                        tar_header("truncated-name", b.size(), '0') + padded(b) + std::string(1024, '\0');
    testutil::spit(dir / "t.tar", bytes);
    CHECK(lines_of(dir / "t.tar") == std::vector<std::string>{"{\"a\":1}", "{\"a\":2}", "line b"});

    testutil::spit(dir / "broken.tar", tar_header("a.jsonl", 4096, '0') + "short");
    CHECK_THROWS((void)lines_of(dir / "broken.tar"));
    CHECK_THROWS((void)lines_of(testutil::fixture("corrupt") / "2017-03-02.jsonl.gz"));
    CHECK_THROWS_AS((void)lines_of(dir / "missing.jsonl"), IoError);
}

TEST_CASE("discover_shards") {
    const fs::path corpus = testutil::fixture("corpus");
    const std::vector<fs::path> in{corpus};
    const auto shards = discover_shards(in);
    REQUIRE(shards.size() == 5);
    CHECK(std::is_sorted(shards.begin(), shards.end()));
    CHECK(shards.back().filename() == "2016-12-31.jsonl");
    CHECK(discover_shards(std::vector<fs::path>{testutil::fixture("empty")}).empty());
    CHECK_THROWS_AS((void)discover_shards(std::vector<fs::path>{corpus / "nope"}), IoError);
}

TEST_CASE("ingest: conservation, order-insensitivity, serial equivalence") {
    auto shards = discover_shards(std::vector<fs::path>{testutil::fixture("corpus")});
    ScanOptions options;
    const IngestResult ref = serial::ingest(shards, options);
    CHECK(ref.tally.conserved());
    CHECK(ref.failed.empty());
    CHECK(ref.tally.kept == ref.store.total());
    CHECK(ref.tally.drops.at(DropReason::date) == 40);

    std::mt19937_64 rng(3);
    for (int workers : {1, 2, 8}) {
        std::shuffle(shards.begin(), shards.end(), rng);
        options.workers = workers;
        const IngestResult par = ingest(shards, options);
        CHECK(par.store == ref.store);
        CHECK(par.tally == ref.tally);
    }
}

TEST_CASE("a corrupt shard contributes nothing and is reported") {
    const auto shards = discover_shards(std::vector<fs::path>{testutil::fixture("corrupt")});
    REQUIRE(shards.size() == 2);
    const IngestResult r = ingest(shards, ScanOptions{});
    REQUIRE(r.failed.size() == 1);
    CHECK(fs::path(r.failed[0].path).filename() == "2017-03-02.jsonl.gz");
    CHECK(r.shards_ok.size() == 1);
    const IngestResult good = serial::ingest(std::span(shards).first(1), ScanOptions{});
    CHECK(r.store == good.store);
    CHECK(r.tally == good.tally);
    CHECK(ingest_summary_json(r, Metadata{}).find("2017-03-02.jsonl.gz") != std::string::npos);
}
