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
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "limitlens/archive.hpp"
#include "limitlens/charcount.hpp"
#include "limitlens/histstore.hpp"
#include "limitlens/record.hpp"

namespace limitlens {

enum class SkipReason { delete_event, retweet, unparseable, missing_fields };

struct Skip {
    SkipReason reason;
};

using ParseOutcome = std::variant<TweetRecord, Skip>;

[[nodiscard]] std::string_view to_string(SkipReason reason) noexcept;

/// Parses one archive line (a JSON tweet object). Prefers the extended full
/// text and its display range when the tweet was truncated. Never throws.
[[nodiscard]] ParseOutcome parse_record(std::string_view line);

// Text between the anchor tags of the `source` markup, or the markup itself.
[[nodiscard]] std::string extract_source_label(std::string_view source_markup);

// Default whitelist: official iPhone/Android/iPad/Windows Phone/Lite apps are
// mobile, labels containing "Web" are web, everything else is excluded.
[[nodiscard]] DeviceClass classify_device(std::string_view source_label);

struct FilterConfig {
    // Whitelisted client labels and their device class.
    std::map<std::string, DeviceClass, std::less<>> sources;
    // Languages where the switch happened / did not happen.
    std::set<std::string, std::less<>> treated;
    std::set<std::string, std::less<>> control;
    DayRange date_range{};

    // The 20 + 3 studied languages, official clients, 2017-01-01..2019-10-31.
    [[nodiscard]] static FilterConfig defaults();

    [[nodiscard]] bool allows_language(std::string_view lang) const;
    [[nodiscard]] DeviceClass classify(std::string_view source_label) const;
    [[nodiscard]] std::vector<std::string> languages() const;
    void validate() const;  // throws ConfigError on empty sets

    // Canonical JSON text; also the input to config hashing.
    [[nodiscard]] std::string to_json() const;
};

// JSON: {"languages": {"treated": [...], "control": [...]},
//        "sources": {"web": [...], "mobile": [...]},
//        "date_range": {"first": "YYYY-MM-DD", "last": "YYYY-MM-DD"}}
[[nodiscard]] FilterConfig parse_filter_config(std::string_view json_text);
[[nodiscard]] FilterConfig load_filter_config(const std::filesystem::path& path);

enum class DropReason {
    delete_event,
    retweet,
    unparseable,
    missing_fields,
    source,
    language,
    date,
    malformed,
    empty_text,
    over_length,
};

[[nodiscard]] std::string_view to_string(DropReason reason) noexcept;

struct Keep {
    DeviceClass device;
};
struct Drop {
    DropReason reason;
};
using FilterOutcome = std::variant<Keep, Drop>;

[[nodiscard]] FilterOutcome filter_record(const TweetRecord& record, const FilterConfig& config);

/// Counters for one ingestion pass. records_in == kept + sum(drops) always.
struct IngestTally {
    std::int64_t records_in = 0;
    std::int64_t kept = 0;
    std::map<DropReason, std::int64_t> drops;
    // Kept records whose weighted length exceeds the day's limit by > 10%.
    std::int64_t counting_anomalies = 0;
    std::map<DeviceClass, std::int64_t> kept_by_device;

    void merge(const IngestTally& other);
    [[nodiscard]] std::int64_t dropped() const noexcept;
    [[nodiscard]] bool conserved() const noexcept { return records_in == kept + dropped(); }

    friend bool operator==(const IngestTally&, const IngestTally&) = default;
};

struct ScanOptions {
    FilterConfig filter = FilterConfig::defaults();
    CountingPolicy counting = CountingPolicy::automatic();
    int max_len = kDefaultMaxLength;
    int workers = 0;  // <= 0: OpenMP default
    bool progress = false;
};

// A record that passed every filter, with its counted display text.
struct KeptTweet {
    const TweetRecord& record;
    DeviceClass device;
    std::string_view text;  // normalized display text
    int length;             // weighted length, 1..max_len
};

/// Classifies one archive line, updates `tally`, and calls `on_kept` for a
/// kept tweet. Blank lines are not records and leave the tally untouched.
void process_line(std::string_view line, const ScanOptions& options, IngestTally& tally,
                  const std::function<void(const KeptTweet&)>& on_kept);

struct ShardFailure {
    std::string path;
    std::string message;

    friend bool operator==(const ShardFailure&, const ShardFailure&) = default;
};

template <class Acc>
struct ScanResult {
    Acc acc;
    IngestTally tally;
    std::vector<std::string> shards_ok;
    std::vector<ShardFailure> failed;
};

namespace detail {

// Runs one shard into fresh accumulators; on failure nothing is kept.
template <class Acc, class Visit>
std::optional<std::string> scan_one(const std::filesystem::path& shard, const ScanOptions& options, const Acc& zero,
                                    Visit& visit, Acc& acc_out, IngestTally& tally_out) {
    Acc acc = zero;
    IngestTally tally;
    try {
        for_each_line(shard, [&](std::string_view line) {
            process_line(line, options, tally, [&](const KeptTweet& t) { visit(acc, t); });
        });
    } catch (const std::exception& e) {
        return std::string(e.what());
    }
    acc_out.merge(acc);
    tally_out.merge(tally);
    return std::nullopt;
}

template <class Acc>
void finish(ScanResult<Acc>& result, std::span<const std::filesystem::path> shards,
            const std::vector<std::optional<std::string>>& errors) {
    for (std::size_t i = 0; i < shards.size(); ++i) {
        if (errors[i]) {
            result.failed.push_back({shards[i].string(), *errors[i]});
        } else {
            result.shards_ok.push_back(shards[i].string());
        }
    }
}

}  // namespace detail

/// Parallel map over shards, then an order-insensitive merge of per-thread
/// accumulators. `Acc` needs `merge(const Acc&)` that is commutative and
/// associative; `visit(Acc&, const KeptTweet&)` folds one tweet in.
template <class Acc, class Visit>
ScanResult<Acc> scan_archives(std::span<const std::filesystem::path> shards, const ScanOptions& options, Acc zero,
                              Visit visit) {
    ScanResult<Acc> result{zero, {}, {}, {}};
    std::vector<std::optional<std::string>> errors(shards.size());
    std::size_t done = 0;
    const auto n = static_cast<std::ptrdiff_t>(shards.size());
#ifdef _OPENMP
    const int threads = options.workers > 0 ? options.workers : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
#endif
    {
        Acc local = zero;
        IngestTally local_tally;
        auto local_visit = visit;
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 1) nowait
#endif
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto& shard = shards[static_cast<std::size_t>(i)];
            errors[static_cast<std::size_t>(i)] =
                detail::scan_one(shard, options, zero, local_visit, local, local_tally);
            if (options.progress) {
#ifdef _OPENMP
#pragma omp critical(limitlens_progress)
#endif
                {
                    ++done;
                    std::cerr << "[scan] " << done << "/" << shards.size() << " " << shard.string()
                              << (errors[static_cast<std::size_t>(i)] ? " FAILED" : "") << '\n';
                }
            }
        }
#ifdef _OPENMP
#pragma omp critical(limitlens_merge)
#endif
        {
            result.acc.merge(local);
            result.tally.merge(local_tally);
        }
    }
    detail::finish(result, shards, errors);
    return result;
}

namespace serial {

// Reference: shards in order, one accumulator, one thread.
template <class Acc, class Visit>
ScanResult<Acc> scan_archives(std::span<const std::filesystem::path> shards, const ScanOptions& options, Acc zero,
                              Visit visit) {
    ScanResult<Acc> result{zero, {}, {}, {}};
    std::vector<std::optional<std::string>> errors(shards.size());
    for (std::size_t i = 0; i < shards.size(); ++i) {
        errors[i] = detail::scan_one(shards[i], options, zero, visit, result.acc, result.tally);
    }
    detail::finish(result, shards, errors);
    return result;
}

}  // namespace serial

struct IngestResult {
    HistogramStore store;
    IngestTally tally;
    std::vector<std::string> shards_ok;
    std::vector<ShardFailure> failed;
};

// Shards -> per-(day, lang, device) length histograms.
[[nodiscard]] IngestResult ingest(std::span<const std::filesystem::path> shards, const ScanOptions& options);

namespace serial {
[[nodiscard]] IngestResult ingest(std::span<const std::filesystem::path> shards, const ScanOptions& options);
}  // namespace serial

// Machine-readable summary (JSON text) of an ingestion run.
[[nodiscard]] std::string ingest_summary_json(const IngestResult& result, const Metadata& meta);

}  // namespace limitlens
