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

#include <span>
#include <string>
#include <vector>

#include "limitlens/histstore.hpp"

namespace limitlens {

enum class Group { control, treated };
enum class Period { pre, post };

struct PanelRow {
    Day day;
    Group group = Group::control;
    Period period = Period::pre;
    double y = 0.0;  // ln(mean tweet length) for the day
};

/// Coefficients of y = alpha + beta*treated + gamma*post + delta*treated:post.
struct DiDResult {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double delta_se = 0.0;  // homoskedastic OLS; NaN with one row per cell
    double effect = 0.0;    // exp(delta) - 1
    double ci95_lo = 0.0;   // on the effect scale
    double ci95_hi = 0.0;
    std::size_t n = 0;
};

// Throws DesignError when any of the four cells is empty.
[[nodiscard]] DiDResult did_estimate(std::span<const PanelRow> panel);

struct DidDesign {
    std::vector<std::string> treated;
    std::vector<std::string> control;
    DayRange pre;
    DayRange post;
    std::vector<DeviceClass> devices{DeviceClass::web, DeviceClass::mobile};
};

// One row per (day, group) with data inside the pre or post period.
[[nodiscard]] std::vector<PanelRow> build_did_panel(const HistogramStore& store, const DidDesign& design);

}  // namespace limitlens
