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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "limitlens/did.hpp"
#include "limitlens/lengthmodel.hpp"
#include "limitlens/lexicon.hpp"
#include "limitlens/metadata.hpp"
#include "limitlens/series.hpp"
#include "limitlens/stats.hpp"
#include "limitlens/threads.hpp"

namespace limitlens {

// `day,value,rolling_mean` rows for present days only; gaps are omitted.
void write_series_csv(std::ostream& out, const DailySeries& series, const Metadata& meta, int rolling_window = 10);
// Reads the CSV back (values only; gaps are not recorded in CSV).
[[nodiscard]] DailySeries read_series_csv(std::istream& in, Quantity quantity);

[[nodiscard]] std::string series_to_json(const DailySeries& series, const Metadata& meta, int rolling_window = 10,
                                         const std::optional<BootstrapCI>& ci = std::nullopt);
// Inverse of series_to_json for points, gaps and quantity.
[[nodiscard]] DailySeries series_from_json(std::string_view text);

struct FitReport {
    FitResult fit;
    double cramming = 0.0;
    std::int64_t tweets = 0;
    std::string label;  // free-form cohort description
};

[[nodiscard]] std::string fit_to_json(const FitReport& report, const Metadata& meta);
[[nodiscard]] FitReport fit_from_json(std::string_view text);

[[nodiscard]] std::string did_to_json(const DiDResult& result, const Metadata& meta);
[[nodiscard]] std::string threads_to_json(const ThreadEstimate& pre, const ThreadEstimate& post, const Metadata& meta);
[[nodiscard]] std::string spearman_to_json(const SpearmanResult& result, std::size_t n, const Metadata& meta);

// `length,<category>_freq,<category>_enrichment,...`; empty cells for undefined values.
void write_curves_csv(std::ostream& out, const std::vector<CategoryCurve>& curves, const Metadata& meta);

struct ChartSeries {
    std::string label;
    DailySeries series;
};

/// Static line chart: day on x, one circle per daily estimate, a line for the
/// rolling mean, gray bands over gap days.
[[nodiscard]] std::string render_svg(const std::vector<ChartSeries>& charts, std::string_view title,
                                     int rolling_window = 10);

}  // namespace limitlens
