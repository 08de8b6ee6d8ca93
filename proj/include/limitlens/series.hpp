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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "limitlens/histstore.hpp"
#include "limitlens/lengthmodel.hpp"

namespace limitlens {

enum class Quantity { cramming, fraction_exceeding, runover, solved_limit };

[[nodiscard]] std::string_view to_string(Quantity q) noexcept;
[[nodiscard]] Quantity parse_quantity(std::string_view name);

struct SeriesPoint {
    Day day;
    double value = 0.0;

    friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

struct SeriesGap {
    Day day;
    std::string reason;

    friend bool operator==(const SeriesGap&, const SeriesGap&) = default;
};

/// Per-day estimates; days strictly increasing. Days without data or with a
/// failed estimate are gaps, never zero-filled points.
struct DailySeries {
    Quantity quantity = Quantity::cramming;
    std::vector<SeriesPoint> points;
    std::vector<SeriesGap> gaps;

    [[nodiscard]] std::vector<double> values() const;

    friend bool operator==(const DailySeries&, const DailySeries&) = default;
};

struct SeriesParams {
    Quantity quantity = Quantity::cramming;
    int exceed_at = 140;       // fraction_exceeding threshold
    double runover_at = 280;   // runover evaluation length
    double target = 0.05;      // solved_limit run-over target
    ModelOptions model;
    std::optional<int> limit;      // overrides the day's enforced limit
    std::optional<DayRange> days;  // defaults to the store's day span
    int workers = 0;
};

// The requested quantity for one day's histogram, at the day's enforced limit.
// Throws UndefinedValue/FitError/DomainError.
[[nodiscard]] double evaluate_day(const LengthHistogram& h, Day day, const SeriesParams& params);

/// One estimate per day in the range over the selected cohorts. Days run in
/// parallel; results land in day order, so the worker count never matters.
[[nodiscard]] DailySeries daily_series(const HistogramStore& store, std::span<const DeviceClass> devices,
                                       std::span<const std::string> langs, const SeriesParams& params);

namespace serial {
[[nodiscard]] DailySeries daily_series(const HistogramStore& store, std::span<const DeviceClass> devices,
                                       std::span<const std::string> langs, const SeriesParams& params);
}  // namespace serial

// Trailing mean over up to `window` most recent present points; gaps carry over.
[[nodiscard]] DailySeries rolling_mean(const DailySeries& series, int window = 10);

}  // namespace limitlens
