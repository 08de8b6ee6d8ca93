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

#include "limitlens/series.hpp"

#include <algorithm>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "limitlens/error.hpp"

namespace limitlens {

std::string_view to_string(Quantity q) noexcept {
    switch (q) {
        case Quantity::cramming:
            return "cramming";
        case Quantity::fraction_exceeding:
            return "fraction_exceeding";
        case Quantity::runover:
            return "runover";
        case Quantity::solved_limit:
            break;
    }
    return "solved_limit";
}

Quantity parse_quantity(std::string_view name) {
    for (auto q : {Quantity::cramming, Quantity::fraction_exceeding, Quantity::runover, Quantity::solved_limit}) {
        if (to_string(q) == name) {
            return q;
        }
    }
    throw ConfigError("unknown quantity '" + std::string(name) +
                      "' (expected cramming, fraction_exceeding, runover or solved_limit)");
}

std::vector<double> DailySeries::values() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(p.value);
    }
    return out;
}

double evaluate_day(const LengthHistogram& h, Day day, const SeriesParams& params) {
    if (params.quantity == Quantity::fraction_exceeding) {
        return fraction_exceeding(h, params.exceed_at);
    }
    const int limit = params.limit.value_or(enforced_limit_on(day));
    const CramAnalysis analysis = analyze_histogram(h, limit, params.model);
    switch (params.quantity) {
        case Quantity::cramming:
            return analysis.cramming;
        case Quantity::runover:
            return runover(analysis.fit, params.runover_at);
        case Quantity::solved_limit:
            return solve_limit(analysis.fit, params.target);
        case Quantity::fraction_exceeding:
            break;
    }
    return fraction_exceeding(h, params.exceed_at);
}

namespace {

struct DayOutcome {
    std::optional<double> value;
    std::string reason;
};

DayOutcome evaluate_cohorts(const HistogramStore& store, Day day, std::span<const DeviceClass> devices,
                            std::span<const std::string> langs, const SeriesParams& params) {
    const LengthHistogram h = query(store, DayRange{day, day}, langs, devices);
    if (h.empty()) {
        return {std::nullopt, "missing"};
    }
    try {
        return {evaluate_day(h, day, params), {}};
    } catch (const FitError& e) {
        std::string_view what = e.what();
        what.remove_prefix(std::min(what.size(), std::string_view("fit error: ").size()));
        return {std::nullopt, "fit_error: " + std::string(what)};
    } catch (const Error& e) {
        return {std::nullopt, std::string("error: ") + e.what()};
    }
}

std::vector<Day> days_in(const HistogramStore& store, const SeriesParams& params) {
    std::vector<Day> out;
    DayRange range;
    if (params.days) {
        range = *params.days;
    } else {
        const auto present = store.days();
        if (present.empty()) {
            return out;
        }
        range = {present.front(), present.back()};
    }
    for (Day d = range.first; d <= range.last; d += std::chrono::days{1}) {
        out.push_back(d);
    }
    return out;
}

DailySeries assemble(Quantity quantity, const std::vector<Day>& days, std::vector<DayOutcome>& outcomes) {
    DailySeries series;
    series.quantity = quantity;
    for (std::size_t i = 0; i < days.size(); ++i) {
        if (outcomes[i].value) {
            series.points.push_back({days[i], *outcomes[i].value});
        } else {
            series.gaps.push_back({days[i], std::move(outcomes[i].reason)});
        }
    }
    return series;
}

}  // namespace

DailySeries daily_series(const HistogramStore& store, std::span<const DeviceClass> devices,
                         std::span<const std::string> langs, const SeriesParams& params) {
    const auto days = days_in(store, params);
    std::vector<DayOutcome> outcomes(days.size());
    const auto n = static_cast<std::ptrdiff_t>(days.size());
#ifdef _OPENMP
    const int threads = params.workers > 0 ? params.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        outcomes[k] = evaluate_cohorts(store, days[k], devices, langs, params);
    }
    return assemble(params.quantity, days, outcomes);
}

namespace serial {

DailySeries daily_series(const HistogramStore& store, std::span<const DeviceClass> devices,
                         std::span<const std::string> langs, const SeriesParams& params) {
    const auto days = days_in(store, params);
    std::vector<DayOutcome> outcomes;
    outcomes.reserve(days.size());
    for (const Day d : days) {
        outcomes.push_back(evaluate_cohorts(store, d, devices, langs, params));
    }
    return assemble(params.quantity, days, outcomes);
}

}  // namespace serial

DailySeries rolling_mean(const DailySeries& series, int window) {
    if (window < 1) {
        throw DomainError("rolling window must be >= 1");
    }
    DailySeries out;
    out.quantity = series.quantity;
    out.gaps = series.gaps;
    out.points.reserve(series.points.size());
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const std::size_t first = i + 1 >= static_cast<std::size_t>(window) ? i + 1 - window : 0;
        // Running mean: a constant window averages to exactly that constant.
        double mean = 0.0;
        for (std::size_t j = first; j <= i; ++j) {
            mean += (series.points[j].value - mean) / static_cast<double>(j - first + 1);
        }
        out.points.push_back({series.points[i].day, mean});
    }
    return out;
}

}  // namespace limitlens
