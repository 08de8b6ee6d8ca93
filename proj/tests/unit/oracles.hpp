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

// Reference computations used as test oracles. They are deliberately naive
// and share no code with the library.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

// Phi(x) = 1/2 + integral_0^x phi(t) dt by composite Simpson on 2000 panels.
inline double phi_integrated(double x) {
    constexpr int panels = 2000;
    const double h = x / panels;
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < panels; ++i) {
        (i % 2 ? odd : even) += pdf(i * h);
    }
    return 0.5 + h / 3.0 * (pdf(0.0) + 4.0 * odd + 2.0 * even + pdf(x));
}

// Bisection on phi_integrated for p in (0, 1).
inline double quantile_bisect(double p) {
    double lo = -10.0;
    double hi = 10.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (phi_integrated(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// rank(i) = 1 + #{j : x_j < x_i} + (#{j : x_j == x_i} - 1) / 2
inline std::vector<double> brute_ranks(const std::vector<double>& x) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double less = 0;
        double equal = 0;
        for (double v : x) {
            less += v < x[i];
            equal += v == x[i];
        }
        r[i] = 1.0 + less + (equal - 1.0) / 2.0;
    }
    return r;
}

inline double brute_pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0;
    double mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i] / n;
        mb += b[i] / n;
    }
    double sab = 0;
    double saa = 0;
    double sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// OLS of y on [1, treated, post, treated*post] via the normal equations and
// Gauss-Jordan elimination in long double.
inline std::array<double, 4> ols_interaction(const std::vector<int>& treated, const std::vector<int>& post,
                                             const std::vector<double>& y) {
    long double m[4][5] = {};
    for (std::size_t i = 0; i < y.size(); ++i) {
        const long double row[4] = {1.0L, static_cast<long double>(treated[i]), static_cast<long double>(post[i]),
                                    static_cast<long double>(treated[i] * post[i])};
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                m[r][c] += row[r] * row[c];
            }
            m[r][4] += row[r] * static_cast<long double>(y[i]);
        }
    }
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r) {
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) {
                pivot = r;
            }
        }
        for (int c = 0; c < 5; ++c) {
            std::swap(m[col][c], m[pivot][c]);
        }
        for (int r = 0; r < 4; ++r) {
            if (r == col) {
                continue;
            }
            const long double f = m[r][col] / m[col][col];
            for (int c = 0; c < 5; ++c) {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    std::array<double, 4> beta{};
    for (int r = 0; r < 4; ++r) {
        beta[r] = static_cast<double>(m[r][4] / m[r][r]);
    }
    return beta;
}

}  // namespace oracle
