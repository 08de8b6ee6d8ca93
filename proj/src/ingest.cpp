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

#include "limitlens/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "limitlens/error.hpp"

namespace limitlens {

using nlohmann::json;

std::string_view to_string(SkipReason reason) noexcept {
    switch (reason) {
        case SkipReason::delete_event:
            return "delete_event";
        case SkipReason::retweet:
            return "retweet";
        case SkipReason::unparseable:
            return "unparseable";
        case SkipReason::missing_fields:
            break;
    }
    return "missing_fields";
}

std::string_view to_string(DropReason reason) noexcept {
    switch (reason) {
        case DropReason::delete_event:
            return "delete_event";
        case DropReason::retweet:
            return "retweet";
        case DropReason::unparseable:
            return "unparseable";
        case DropReason::missing_fields:
            return "missing_fields";
        case DropReason::source:
            return "source";
        case DropReason::language:
            return "language";
        case DropReason::date:
            return "date";
        case DropReason::malformed:
            return "malformed";
        case DropReason::empty_text:
            return "empty_text";
        case DropReason::over_length:
            break;
    }
    return "over_length";
}

namespace {

// "Wed Oct 10 20:19:24 +0000 2018"
std::optional<std::chrono::sys_seconds> parse_created_at(std::string_view s) {
    static constexpr std::array<std::string_view, 12> months = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                                 "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    if (s.size() != 30 || s[3] != ' ' || s[7] != ' ' || s[10] != ' ' || s[13] != ':' || s[16] != ':' ||
        s[19] != ' ' || s[25] != ' ') {
        return std::nullopt;
    }
    auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
        if (ec != std::errc{} || ptr != s.data() + pos + len) {
            return std::nullopt;
        }
        return v;
    };
    unsigned month = 0;
    for (unsigned m = 0; m < 12; ++m) {
        if (s.substr(4, 3) == months[m]) {
            month = m + 1;
        }
    }
    const auto day = num(8, 2);
    const auto hh = num(11, 2);
    const auto mm = num(14, 2);
    const auto ss = num(17, 2);
    const auto off_h = num(21, 2);
    const auto off_m = num(23, 2);
    const auto year = num(26, 4);
    if (month == 0 || !day || !hh || !mm || !ss || !off_h || !off_m || !year || (s[20] != '+' && s[20] != '-')) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{*year}, std::chrono::month{month},
                                          std::chrono::day{static_cast<unsigned>(*day)}};
    if (!ymd.ok() || *hh > 23 || *mm > 59 || *ss > 60) {
        return std::nullopt;
    }
    using namespace std::chrono;
    const auto offset = hours{*off_h} + minutes{*off_m};
    auto t = sys_seconds{sys_days{ymd}} + hours{*hh} + minutes{*mm} + seconds{*ss};
    return s[20] == '+' ? t - offset : t + offset;
}

std::optional<DisplayRange> read_range(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() ||
        !(*it)[1].is_number_integer()) {
        return std::nullopt;
    }
    return DisplayRange{(*it)[0].get<std::int64_t>(), (*it)[1].get<std::int64_t>()};
}

const json* string_field(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it != obj.end() && it->is_string() ? &*it : nullptr;
}

}  // namespace

ParseOutcome parse_record(std::string_view line) {
    json obj = json::parse(line.begin(), line.end(), nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        return Skip{SkipReason::unparseable};
    }
    if (obj.contains("delete")) {
        return Skip{SkipReason::delete_event};
    }
    if (obj.contains("retweeted_status")) {
        return Skip{SkipReason::retweet};
    }

    TweetRecord rec;
    if (const auto it = obj.find("id"); it != obj.end() && it->is_number_integer()) {
        rec.id = it->get<std::int64_t>();
    } else if (const auto* id_str = string_field(obj, "id_str")) {
        const auto& s = id_str->get_ref<const std::string&>();
        if (std::from_chars(s.data(), s.data() + s.size(), rec.id).ec != std::errc{}) {
            return Skip{SkipReason::missing_fields};
        }
    } else {
        return Skip{SkipReason::missing_fields};
    }

    if (const auto* created = string_field(obj, "created_at")) {
        const auto t = parse_created_at(created->get_ref<const std::string&>());
        if (!t) {
            return Skip{SkipReason::missing_fields};
        }
        rec.created_at = *t;
    } else if (const auto* ts = string_field(obj, "timestamp_ms")) {
        std::int64_t ms = 0;
        const auto& s = ts->get_ref<const std::string&>();
        if (std::from_chars(s.data(), s.data() + s.size(), ms).ec != std::errc{}) {
            return Skip{SkipReason::missing_fields};
        }
        rec.created_at = std::chrono::sys_seconds{std::chrono::seconds{ms / 1000}};
    } else {
        return Skip{SkipReason::missing_fields};
    }

    // Truncated tweets keep their full text under extended_tweet.
    const json* text = nullptr;
    if (const auto ext = obj.find("extended_tweet"); ext != obj.end() && ext->is_object()) {
        if ((text = string_field(*ext, "full_text")) != nullptr) {
            rec.display_range = read_range(*ext, "display_text_range");
        }
    }
    if (text == nullptr && (text = string_field(obj, "full_text")) != nullptr) {
        rec.display_range = read_range(obj, "display_text_range");
    }
    if (text == nullptr && (text = string_field(obj, "text")) != nullptr) {
        rec.display_range = read_range(obj, "display_text_range");
    }
    if (text == nullptr) {
        return Skip{SkipReason::missing_fields};
    }
    rec.text = text->get<std::string>();

    const auto* lang = string_field(obj, "lang");
    const auto* source = string_field(obj, "source");
    if (lang == nullptr || source == nullptr) {
        return Skip{SkipReason::missing_fields};
    }
    rec.lang = lang->get<std::string>();
    rec.source_label = extract_source_label(source->get_ref<const std::string&>());
    return rec;
}

std::string extract_source_label(std::string_view markup) {
    const auto open = markup.find("<a");
    if (open == std::string_view::npos) {
        return std::string(markup);
    }
    const auto gt = markup.find('>', open);
    const auto close = markup.find("</a>", gt == std::string_view::npos ? open : gt);
    if (gt == std::string_view::npos || close == std::string_view::npos) {
        return std::string(markup);
    }
    return std::string(markup.substr(gt + 1, close - gt - 1));
}

namespace {

const std::array<std::string_view, 10> kOfficialClients = {
    "Twitter for iPhone",  "Twitter for Android",     "Twitter for iPad",
    "Twitter for Windows Phone", "Twitter Lite",       "Twitter for Android Lite",
    "Twitter Web Client",  "Twitter Web App",         "Mobile Web (M2)",
    "Mobile Web (M5)",
};

DeviceClass default_class(std::string_view label) {
    return label.find("Web") != std::string_view::npos ? DeviceClass::web : DeviceClass::mobile;
}

}  // namespace

DeviceClass classify_device(std::string_view label) {
    for (auto client : kOfficialClients) {
        if (client == label) {
            return default_class(label);
        }
    }
    if (label == "Mobile Web") {
        return DeviceClass::web;
    }
    return DeviceClass::excluded;
}

FilterConfig FilterConfig::defaults() {
    FilterConfig cfg;
    for (auto client : kOfficialClients) {
        cfg.sources.emplace(std::string(client), default_class(client));
    }
    cfg.sources.emplace("Mobile Web", DeviceClass::web);
    cfg.treated = {"en", "es", "pt", "ar", "tr", "fr", "in", "tl", "ru", "hi",
                   "it", "de", "th", "ur", "nl", "pl", "fa", "ca", "el", "sv"};
    cfg.control = {"ja", "ko", "zh"};
    cfg.date_range = {parse_day("2017-01-01"), parse_day("2019-10-31")};
    return cfg;
}

bool FilterConfig::allows_language(std::string_view lang) const {
    return treated.contains(lang) || control.contains(lang);
}

DeviceClass FilterConfig::classify(std::string_view label) const {
    const auto it = sources.find(label);
    return it == sources.end() ? DeviceClass::excluded : it->second;
}

std::vector<std::string> FilterConfig::languages() const {
    std::vector<std::string> out(treated.begin(), treated.end());
    out.insert(out.end(), control.begin(), control.end());
    std::sort(out.begin(), out.end());
    return out;
}

void FilterConfig::validate() const {
    if (sources.empty()) {
        throw ConfigError("filter config: no allowed sources");
    }
    if (treated.empty() && control.empty()) {
        throw ConfigError("filter config: no languages");
    }
    if (date_range.empty()) {
        throw ConfigError("filter config: empty date range");
    }
    for (const auto& [label, device] : sources) {
        if (device == DeviceClass::excluded) {
            throw ConfigError("filter config: source '" + label + "' mapped to excluded");
        }
    }
}

std::string FilterConfig::to_json() const {
    json web = json::array();
    json mobile = json::array();
    for (const auto& [label, device] : sources) {
        (device == DeviceClass::web ? web : mobile).push_back(label);
    }
    json j;
    j["languages"]["treated"] = treated;
    j["languages"]["control"] = control;
    j["sources"]["web"] = web;
    j["sources"]["mobile"] = mobile;
    j["date_range"]["first"] = format_day(date_range.first);
    j["date_range"]["last"] = format_day(date_range.last);
    return j.dump(2);
}

FilterConfig parse_filter_config(std::string_view json_text) {
    const json j = json::parse(json_text.begin(), json_text.end(), nullptr, false, true);
    if (j.is_discarded() || !j.is_object()) {
        throw ConfigError("filter config is not a JSON object");
    }
    FilterConfig cfg;
    try {
        const auto& langs = j.at("languages");
        for (const auto& l : langs.value("treated", json::array())) {
            cfg.treated.insert(l.get<std::string>());
        }
        for (const auto& l : langs.value("control", json::array())) {
            cfg.control.insert(l.get<std::string>());
        }
        const auto& sources = j.at("sources");
        for (const auto& s : sources.value("web", json::array())) {
            cfg.sources.emplace(s.get<std::string>(), DeviceClass::web);
        }
        for (const auto& s : sources.value("mobile", json::array())) {
            cfg.sources.emplace(s.get<std::string>(), DeviceClass::mobile);
        }
        const auto& range = j.at("date_range");
        cfg.date_range = {parse_day(range.at("first").get<std::string>()),
                          parse_day(range.at("last").get<std::string>())};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("filter config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

FilterConfig load_filter_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read filter config '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_filter_config(ss.str());
}

FilterOutcome filter_record(const TweetRecord& record, const FilterConfig& config) {
    if (record.is_delete_event) {
        return Drop{DropReason::delete_event};
    }
    if (record.is_retweet) {
        return Drop{DropReason::retweet};
    }
    const DeviceClass device = config.classify(record.source_label);
    if (device == DeviceClass::excluded) {
        return Drop{DropReason::source};
    }
    if (!config.allows_language(record.lang)) {
        return Drop{DropReason::language};
    }
    if (!config.date_range.contains(record.day())) {
        return Drop{DropReason::date};
    }
    return Keep{device};
}

void IngestTally::merge(const IngestTally& other) {
    records_in += other.records_in;
    kept += other.kept;
    counting_anomalies += other.counting_anomalies;
    for (const auto& [reason, n] : other.drops) {
        drops[reason] += n;
    }
    for (const auto& [device, n] : other.kept_by_device) {
        kept_by_device[device] += n;
    }
}

std::int64_t IngestTally::dropped() const noexcept {
    std::int64_t n = 0;
    for (const auto& [reason, count] : drops) {
        n += count;
    }
    return n;
}

namespace {

DropReason drop_for(SkipReason r) {
    switch (r) {
        case SkipReason::delete_event:
            return DropReason::delete_event;
        case SkipReason::retweet:
            return DropReason::retweet;
        case SkipReason::unparseable:
            return DropReason::unparseable;
        case SkipReason::missing_fields:
            break;
    }
    return DropReason::missing_fields;
}

bool blank(std::string_view line) {
    return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

void process_line(std::string_view line, const ScanOptions& options, IngestTally& tally,
                  const std::function<void(const KeptTweet&)>& on_kept) {
    if (blank(line)) {
        return;
    }
    ++tally.records_in;
    auto parsed = parse_record(line);
    if (const auto* skip = std::get_if<Skip>(&parsed)) {
        ++tally.drops[drop_for(skip->reason)];
        return;
    }
    const auto& record = std::get<TweetRecord>(parsed);
    const auto outcome = filter_record(record, options.filter);
    if (const auto* drop = std::get_if<Drop>(&outcome)) {
        ++tally.drops[drop->reason];
        return;
    }
    const DeviceClass device = std::get<Keep>(outcome).device;
    const CountingConfig& config = options.counting.for_day(record.day());

    std::string text;
    std::int64_t length = 0;
    try {
        text = normalize_text(extract_display_text(record), config.normalization);
        length = weighted_length(text, config).value;
    } catch (const MalformedRecord&) {
        ++tally.drops[DropReason::malformed];
        return;
    } catch (const DecodeError&) {
        ++tally.drops[DropReason::malformed];
        return;
    }
    if (length == 0) {
        ++tally.drops[DropReason::empty_text];
        return;
    }
    if (length > options.max_len) {
        ++tally.drops[DropReason::over_length];
        return;
    }
    // Integer form of length > 1.1 * limit.
    if (10 * length > 11 * static_cast<std::int64_t>(config.max_weighted_length)) {
        ++tally.counting_anomalies;
    }
    ++tally.kept;
    ++tally.kept_by_device[device];
    on_kept(KeptTweet{record, device, text, static_cast<int>(length)});
}

namespace {

struct StoreVisit {
    void operator()(HistogramStore& store, const KeptTweet& t) const {
        store.add(CohortKey{t.record.day(), t.record.lang, t.device}, t.length);
    }
};

IngestResult to_ingest_result(ScanResult<HistogramStore>&& scan) {
    return IngestResult{std::move(scan.acc), std::move(scan.tally), std::move(scan.shards_ok),
                        std::move(scan.failed)};
}

}  // namespace

IngestResult ingest(std::span<const std::filesystem::path> shards, const ScanOptions& options) {
    return to_ingest_result(scan_archives(shards, options, HistogramStore(options.max_len), StoreVisit{}));
}

namespace serial {

IngestResult ingest(std::span<const std::filesystem::path> shards, const ScanOptions& options) {
    return to_ingest_result(
        serial::scan_archives(shards, options, HistogramStore(options.max_len), StoreVisit{}));
}

}  // namespace serial

std::string ingest_summary_json(const IngestResult& result, const Metadata& meta) {
    json j;
    j["meta"] = {{"tool", meta.tool}, {"version", meta.version}, {"seed", meta.seed}, {"config", meta.config_hash}};
    j["records_in"] = result.tally.records_in;
    j["kept"] = result.tally.kept;
    json by_device = json::object();
    for (const auto& [device, n] : result.tally.kept_by_device) {
        by_device[std::string(to_string(device))] = n;
    }
    j["kept_by_device"] = by_device;
    json drops = json::object();
    for (const auto& [reason, n] : result.tally.drops) {
        drops[std::string(to_string(reason))] = n;
    }
    j["drops"] = drops;
    j["counting_anomalies"] = result.tally.counting_anomalies;
    j["conserved"] = result.tally.conserved();
    j["cohorts"] = result.store.cohorts().size();
    j["shards_ok"] = result.shards_ok;
    json failed = json::array();
    for (const auto& f : result.failed) {
        failed.push_back({{"path", f.path}, {"error", f.message}});
    }
    j["shards_failed"] = failed;
    return j.dump(2) + "\n";
}

}  // namespace limitlens
