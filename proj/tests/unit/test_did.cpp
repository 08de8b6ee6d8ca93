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
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "limitlens/did.hpp"
#include "limitlens/error.hpp"

using namespace limitlens;

namespace {

const Day kDay = parse_day("2017-01-01");

void push_cell(std::vector<PanelRow>& rows, Group g, Period p, std::initializer_list<double> ys) {
    for (double y : ys) {
        rows.push_back({kDay, g, p, y});
    }
}

}  // namespace

TEST_CASE("did on cell means") {
    std::vector<PanelRow> rows;
    push_cell(rows, Group::treated, Period::pre, {3.99, 4.01});
    push_cell(rows, Group::treated, Period::post, {4.14, 4.16});
    push_cell(rows, Group::control, Period::pre, {3.98, 4.02});
    push_cell(rows, Group::control, Period::post, {4.04, 4.06});
    const DiDResult r = did_estimate(rows);
    CHECK(r.delta == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(r.effect == doctest::Approx(std::exp(0.10) - 1.0).epsilon(1e-12));
    CHECK(std::round(r.effect * 10000.0) / 100.0 == 10.52);
    CHECK(r.alpha == doctest::Approx(4.00));
    CHECK(r.beta == doctest::Approx(0.0).scale(1.0));
    CHECK(r.gamma == doctest::Approx(0.05));
    CHECK(r.n == 8);
    CHECK(r.ci95_lo < r.effect);
    CHECK(r.effect < r.ci95_hi);
}

TEST_CASE("did effect conversion and interval") {
    CHECK(std::round(std::expm1(0.0598) * 10000.0) / 100.0 == 6.16);

    // 277 days per cell with residuals of +-a; pooled sd is a, so SE = a * sqrt(4 / 277).
    const double se = 0.0023;
    const double a = se * std::sqrt(277.0) / 2.0;
    const double base[4] = {4.30, 4.32, 4.10, 4.10 + 0.02 + 0.0598};
    std::vector<PanelRow> rows;
    for (int c = 0; c < 4; ++c) {
        const Group g = c < 2 ? Group::control : Group::treated;
        const Period p = c % 2 == 0 ? Period::pre : Period::post;
        for (int i = 0; i < 277; ++i) {
            const double e = i == 276 ? 0.0 : (i % 2 == 0 ? a : -a);
            rows.push_back({kDay, g, p, base[c] + e});
        }
    }
    const DiDResult r = did_estimate(rows);
    CHECK(r.n == 1108);
    CHECK(r.delta == doctest::Approx(0.0598).epsilon(1e-9));
    CHECK(r.delta_se == doctest::Approx(se).epsilon(1e-9));
    // The interval is symmetric on the log scale: [5.68%, 6.64%] around 6.16%.
    CHECK(std::abs(r.ci95_lo - 0.0568) < 2e-4);
    CHECK(std::abs(r.ci95_hi - 0.0664) < 2e-4);
    CHECK(std::log1p(r.ci95_lo) + std::log1p(r.ci95_hi) == doctest::Approx(2.0 * r.delta).epsilon(1e-9));
}

TEST_CASE("did matches least squares on unbalanced panels") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::uniform_int_distribution<int> size(2, 30);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<PanelRow> rows;
        std::vector<int> treated;
        std::vector<int> post;
        std::vector<double> y;
        std::size_t n_cell[4];
        for (int c = 0; c < 4; ++c) {
            const int t = c / 2;
            const int p = c % 2;
            n_cell[c] = static_cast<std::size_t>(size(rng));
            for (std::size_t i = 0; i < n_cell[c]; ++i) {
                const double v = 4.0 + 0.1 * t + 0.03 * p + 0.07 * t * p + noise(rng);
                rows.push_back({kDay, t ? Group::treated : Group::control, p ? Period::post : Period::pre, v});
                treated.push_back(t);
                post.push_back(p);
                y.push_back(v);
            }
        }
        const auto coef = oracle::ols_interaction(treated, post, y);
        const DiDResult r = did_estimate(rows);
        CHECK(std::abs(r.alpha - coef[0]) < 1e-10);
        CHECK(std::abs(r.beta - coef[1]) < 1e-10);
        CHECK(std::abs(r.gamma - coef[2]) < 1e-10);
        CHECK(std::abs(r.delta - coef[3]) < 1e-10);

        // Residual variance from the oracle fit, then s * sqrt(sum 1/n_cell).
        long double rss = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double fitted = coef[0] + coef[1] * treated[i] + coef[2] * post[i] + coef[3] * treated[i] * post[i];
            rss += static_cast<long double>(y[i] - fitted) * (y[i] - fitted);
        }
        const double s = std::sqrt(static_cast<double>(rss) / static_cast<double>(y.size() - 4));
        double inv = 0.0;
        for (std::size_t n : n_cell) {
            inv += 1.0 / static_cast<double>(n);
        }
        CHECK(r.delta_se == doctest::Approx(s * std::sqrt(inv)).epsilon(1e-9));

        std::shuffle(rows.begin(), rows.end(), rng);
        const DiDResult shuffled = did_estimate(rows);
        CHECK(shuffled.delta == r.delta);
        CHECK(shuffled.delta_se == r.delta_se);
    }
}

TEST_CASE("did design errors and panel building") {
    std::vector<PanelRow> rows;
    push_cell(rows, Group::treated, Period::pre, {1.0});
    push_cell(rows, Group::treated, Period::post, {1.1});
    push_cell(rows, Group::control, Period::pre, {1.0});
    CHECK_THROWS_AS((void)did_estimate(rows), DesignError);
    push_cell(rows, Group::control, Period::post, {1.0});
    const DiDResult one = did_estimate(rows);
    CHECK(one.delta == doctest::Approx(0.1));
    CHECK(std::isnan(one.delta_se));

    HistogramStore store;
    const Day pre = parse_day("2017-02-01");
    const Day post = parse_day("2018-02-01");
    store.add({pre, "en", DeviceClass::web}, 50, 3);
    store.add({pre, "en", DeviceClass::mobile}, 80, 1);
    store.add({post, "en", DeviceClass::web}, 60, 2);
    store.add({pre, "ja", DeviceClass::web}, 30, 5);
    store.add({post, "ja", DeviceClass::web}, 30, 5);
    store.add({post, "ko", DeviceClass::web}, 90, 5);
    DidDesign design;
    design.treated = {"en"};
    design.control = {"ja"};
    design.pre = {pre, pre + std::chrono::days{3}};
    design.post = {post, post};
    const auto panel = build_did_panel(store, design);
    REQUIRE(panel.size() == 4);
    const auto find = [&](Group g, Period p) {
        return std::find_if(panel.begin(), panel.end(), [&](const PanelRow& r) { return r.group == g && r.period == p; });
    };
    CHECK(find(Group::treated, Period::pre)->y == doctest::Approx(std::log((150.0 + 80.0) / 4.0)));
    CHECK(find(Group::treated, Period::post)->y == doctest::Approx(std::log(60.0)));
    CHECK(find(Group::control, Period::post)->y == doctest::Approx(std::log(30.0)));
    design.devices = {DeviceClass::web};
    CHECK(build_did_panel(store, design)[0].y == doctest::Approx(std::log(30.0)));
}
