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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "limitlens/day.hpp"
#include "limitlens/metadata.hpp"
#include "limitlens/record.hpp"

namespace limitlens {

inline constexpr int kDefaultMaxLength = 280;

/// Integer counts of tweets per weighted length 1..max_len. Index 0 is never
/// populated (empty tweets are not recorded).
class LengthHistogram {
public:
    LengthHistogram() : LengthHistogram(kDefaultMaxLength) {}
    explicit LengthHistogram(int max_len);

    [[nodiscard]] int max_len() const noexcept { return static_cast<int>(counts_.size()) - 1; }
    [[nodiscard]] std::int64_t total() const noexcept { return total_; }
    [[nodiscard]] bool empty() const noexcept { return total_ == 0; }

    // Count at a length in [1, max_len]; 0 outside.
    [[nodiscard]] std::int64_t count(int length) const noexcept;
    // Raw counts indexed by length, element 0 unused.
    [[nodiscard]] std::span<const std::int64_t> counts() const noexcept { return counts_; }

    // Throws DomainError for a length outside [1, max_len] or a negative count.
    void add(int length, std::int64_t n = 1);

    // Element-wise sum; throws DimensionError on mismatched max_len.
    LengthHistogram& operator+=(const LengthHistogram& other);

    // counts / total, element 0 = 0. Throws UndefinedValue when empty.
    [[nodiscard]] std::vector<double> density() const;
    [[nodiscard]] double mean_length() const;

    friend bool operator==(const LengthHistogram&, const LengthHistogram&) = default;

private:
    std::vector<std::int64_t> counts_;
    std::int64_t total_ = 0;
};

[[nodiscard]] LengthHistogram merge(const LengthHistogram& a, const LengthHistogram& b);

// Fraction of tweets strictly longer than c. Throws UndefinedValue on an empty histogram.
[[nodiscard]] double fraction_exceeding(const LengthHistogram& h, int c);

struct CohortKey {
    Day day;
    std::string lang;
    DeviceClass device = DeviceClass::web;

    // (day, lang, device name) lexicographic; "mobile" < "web".
    friend bool operator<(const CohortKey& a, const CohortKey& b);
    friend bool operator==(const CohortKey&, const CohortKey&) = default;
};

/// Per-cohort histograms. All histograms share one max_len.
class HistogramStore {
public:
    explicit HistogramStore(int max_len = kDefaultMaxLength) : max_len_(max_len) {}

    [[nodiscard]] int max_len() const noexcept { return max_len_; }
    [[nodiscard]] const std::map<CohortKey, LengthHistogram>& cohorts() const noexcept { return cohorts_; }
    [[nodiscard]] bool empty() const noexcept { return cohorts_.empty(); }

    void add(const CohortKey& key, int length, std::int64_t n = 1);
    void add(const CohortKey& key, const LengthHistogram& h);
    // Order-insensitive: merging in any order yields the same store.
    void merge(const HistogramStore& other);

    // Days that hold at least one tweet, ascending.
    [[nodiscard]] std::vector<Day> days() const;
    [[nodiscard]] std::int64_t total() const noexcept;

    friend bool operator==(const HistogramStore&, const HistogramStore&) = default;

private:
    int max_len_;
    std::map<CohortKey, LengthHistogram> cohorts_;
};

// Merged histogram over every matching cohort; an empty selection gives total 0.
[[nodiscard]] LengthHistogram query(const HistogramStore& store, const DayRange& days,
                                    std::span<const std::string> langs,
                                    std::span<const DeviceClass> devices);

/// CSV `day,lang,device,length,count`, sparse, sorted, preceded by '#'
/// metadata lines. A ".gz" suffix selects gzip. The file is written next to
/// the target and renamed into place.
void write_store(const HistogramStore& store, const std::filesystem::path& path, const Metadata& meta);
void write_store(const HistogramStore& store, std::ostream& out, const Metadata& meta);
[[nodiscard]] HistogramStore read_store(const std::filesystem::path& path);
[[nodiscard]] HistogramStore read_store(std::istream& in, const std::string& origin = "<stream>");

// A single histogram as CSV `length,count` (sparse).
void write_histogram_csv(const LengthHistogram& h, std::ostream& out, const Metadata& meta);

}  // namespace limitlens
