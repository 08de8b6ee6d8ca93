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

#include "limitlens/did.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "limitlens/error.hpp"

namespace limitlens {

namespace {

std::size_t cell_index(Group g, Period p) {
    return (g == Group::treated ? 2U : 0U) + (p == Period::post ? 1U : 0U);
}

}  // namespace

DiDResult did_estimate(std::span<const PanelRow> panel) {
    // Cells: 0 control/pre, 1 control/post, 2 treated/pre, 3 treated/post.
    std::array<std::vector<double>, 4> cells;
    for (const auto& row : panel) {
        cells[cell_index(row.group, row.period)].push_back(row.y);
    }
    std::array<double, 4> mean{};
    for (std::size_t c = 0; c < 4; ++c) {
        if (cells[c].empty()) {
            throw DesignError("difference-in-differences needs all four group x period cells; one is empty");
        }
        // Sorted summation keeps the result independent of row order.
        std::sort(cells[c].begin(), cells[c].end());
        long double sum = 0;
        for (double y : cells[c]) {
            sum += y;
        }
        mean[c] = static_cast<double>(sum / static_cast<long double>(cells[c].size()));
    }

    DiDResult r;
    r.n = panel.size();
    r.alpha = mean[0];
    r.beta = mean[2] - mean[0];
    r.gamma = mean[1] - mean[0];
    r.delta = (mean[3] - mean[2]) - (mean[1] - mean[0]);
    r.effect = std::expm1(r.delta);

    long double rss = 0;
    double inv_n = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        for (double y : cells[c]) {
            rss += static_cast<long double>(y - mean[c]) * (y - mean[c]);
        }
        inv_n += 1.0 / static_cast<double>(cells[c].size());
    }
    const auto dof = static_cast<double>(r.n) - 4.0;
    if (dof < 1.0) {
        r.delta_se = std::numeric_limits<double>::quiet_NaN();
        r.ci95_lo = r.ci95_hi = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.delta_se = std::sqrt(static_cast<double>(rss) / dof * inv_n);
    const boost::math::students_t_distribution<double> t(dof);
    const double half = boost::math::quantile(t, 0.975) * r.delta_se;
    r.ci95_lo = std::expm1(r.delta - half);
    r.ci95_hi = std::expm1(r.delta + half);
    return r;
}

std::vector<PanelRow> build_did_panel(const HistogramStore& store, const DidDesign& design) {
    std::vector<PanelRow> rows;
    for (const Period period : {Period::pre, Period::post}) {
        const DayRange& range = period == Period::pre ? design.pre : design.post;
        for (Day d = range.first; d <= range.last; d += std::chrono::days{1}) {
            for (const Group group : {Group::control, Group::treated}) {
                const auto& langs = group == Group::treated ? design.treated : design.control;
                const LengthHistogram h = query(store, DayRange{d, d}, langs, design.devices);
                if (!h.empty()) {
                    rows.push_back({d, group, period, std::log(h.mean_length())});
                }
            }
        }
    }
    return rows;
}

}  // namespace limitlens
