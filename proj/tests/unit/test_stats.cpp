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

#include "limitlens/error.hpp"
#include "limitlens/stats.hpp"

using namespace limitlens;

TEST_CASE("bootstrap") {
    const std::vector<double> same(40, 0.25);
    const BootstrapCI c = bootstrap_ci(same, 1000, 0.95, 1);
    CHECK(c.mean == 0.25);
    CHECK(c.lo == 0.25);
    CHECK(c.hi == 0.25);

    std::mt19937_64 rng(77);
    std::normal_distribution<double> z;
    std::vector<double> normal(1000);
    for (auto& v : normal) {
        v = z(rng);
    }
    const BootstrapCI a = bootstrap_ci(normal, 1000, 0.95, 5);
    const BootstrapCI b = bootstrap_ci(normal, 1000, 0.95, 5);
    CHECK(a.lo == b.lo);
    CHECK(a.hi == b.hi);
    const double expected = 1.96 / std::sqrt(1000.0);
    CHECK(std::abs(0.5 * (a.hi - a.lo) - expected) < 0.2 * expected);
    CHECK(a.lo < a.mean);
    CHECK(a.mean < a.hi);

    // Symmetric input: the interval contains the sample mean.
    std::vector<double> sym;
    for (int i = -20; i <= 20; ++i) {
        sym.push_back(i * 0.5);
    }
    const BootstrapCI s = bootstrap_ci(sym, 500, 0.95, 3);
    CHECK(s.lo <= 0.0);
    CHECK(s.hi >= 0.0);
    CHECK_THROWS_AS((void)bootstrap_ci(std::vector<double>{}, 100, 0.95, 1), DomainError);
}

TEST_CASE("spearman basics") {
    const std::vector<double> x{1, 2, 3, 4, 5, 6};
    const std::vector<double> up{2, 4, 8, 16, 32, 64};
    const std::vector<double> down{9, 7, 5, 3, 1, -1};
    CHECK(spearman(x, up).rho == 1.0);
    CHECK(spearman(x, down).rho == -1.0);
    CHECK(spearman(x, up).p_value == 0.0);

    const std::vector<double> tied{3, 1, 3, 2, 2, 3, 0, 1};
    CHECK(average_ranks(tied) == oracle::brute_ranks(tied));
    const std::vector<double> other{0.1, 0.5, 0.2, 0.2, 0.9, 0.3, 0.3, 0.0};
    const double expected = oracle::brute_pearson(oracle::brute_ranks(tied), oracle::brute_ranks(other));
    CHECK(std::abs(spearman(tied, other).rho - expected) < 1e-12);

    // Invariant under strictly monotone transforms.
    std::vector<double> cubed;
    std::vector<double> logged;
    for (std::size_t i = 0; i < tied.size(); ++i) {
        cubed.push_back(tied[i] * tied[i] * tied[i] - 4.0);
        logged.push_back(std::log(other[i] + 1.0));
    }
    CHECK(spearman(cubed, logged).rho == spearman(tied, other).rho);

    const std::vector<double> flat{1, 1, 1, 1, 1, 1};
    CHECK_THROWS_AS((void)spearman(flat, x), UndefinedValue);
    CHECK_THROWS_AS((void)spearman(std::vector<double>{1, 2}, std::vector<double>{2, 1}), DomainError);
    CHECK_THROWS_AS((void)spearman(x, std::vector<double>{1, 2, 3}), DomainError);
}

TEST_CASE("spearman p-value") {
    // t approximation: t = rho * sqrt((n - 2) / (1 - rho^2)), two-sided, n - 2 dof.
    // 23 ranks with sum d^2 = 202: rho = 1 - 6 * 202 / (23 * 528).
    std::vector<double> x(23);
    std::vector<double> y(23);
    for (int i = 0; i < 23; ++i) {
        x[static_cast<std::size_t>(i)] = i;
        y[static_cast<std::size_t>(i)] = i;
    }
    std::swap(y[0], y[10]);
    std::swap(y[12], y[13]);
    const SpearmanResult r = spearman(x, y);
    CHECK(r.rho == doctest::Approx(1.0 - 6.0 * 202.0 / (23.0 * 528.0)).epsilon(1e-12));
    CHECK_FALSE(r.exact);
    // rho = 0.90 over 23 languages with p = 5.47e-9 sits inside the band the
    // t approximation gives for rho in [0.895, 0.905].
    CHECK(r.p_value > 3.0e-9);
    CHECK(r.p_value < 8.3e-9);
    CHECK(r.p_value == doctest::Approx(5.0e-9).epsilon(0.05));

    // Exact enumeration for small n: rho = 1 at n = 4 happens once in 24 orderings.
    const std::vector<double> a{1, 2, 3, 4};
    const SpearmanResult e = spearman(a, a, true);
    CHECK(e.exact);
    CHECK(e.p_value == doctest::Approx(2.0 / 24.0).epsilon(1e-12));
    const std::vector<double> b{1, 3, 2, 4, 5, 7, 6};
    const std::vector<double> c{2, 1, 4, 3, 6, 5, 7};
    const SpearmanResult approx = spearman(b, c);
    const SpearmanResult exact = spearman(b, c, true);
    CHECK(approx.rho == exact.rho);
    CHECK(exact.p_value > 0.0);
    CHECK(exact.p_value < 1.0);
}

TEST_CASE("spearman matches brute-force ranks on tied inputs") {
    // x over {0, 1, 2}^6 against a few fixed y vectors with ties.
    const std::vector<std::vector<double>> ys{{0, 1, 1, 2, 3, 3}, {5, 4, 3, 2, 1, 0}, {1, 0, 1, 0, 1, 2}};
    int checked = 0;
    for (int code = 0; code < 729; ++code) {
        std::vector<double> x(6);
        int c = code;
        for (auto& v : x) {
            v = c % 3;
            c /= 3;
        }
        if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
            continue;
        }
        REQUIRE(average_ranks(x) == oracle::brute_ranks(x));
        for (const auto& y : ys) {
            const double expected = oracle::brute_pearson(oracle::brute_ranks(x), oracle::brute_ranks(y));
            REQUIRE(std::abs(spearman(x, y).rho - expected) < 1e-12);
            ++checked;
        }
    }
    CHECK(checked == 3 * (729 - 3));
}
