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

#include "limitlens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "limitlens/error.hpp"

namespace limitlens {

namespace {

double running_mean(std::span<const double> xs) {
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        m += (xs[i] - m) / static_cast<double>(i + 1);
    }
    return m;
}

// Linear interpolation between order statistics of sorted data.
double percentile(std::span<const double> sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

BootstrapCI bootstrap_ci(std::span<const double> values, int resamples, double level, std::uint64_t seed) {
    if (values.empty()) {
        throw DomainError("bootstrap of an empty sample");
    }
    if (resamples < 1) {
        throw DomainError("bootstrap needs at least one resample");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw DomainError("confidence level must lie in (0, 1)");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    std::vector<double> sample(values.size());
    for (auto& m : means) {
        for (auto& s : sample) {
            s = values[pick(rng)];
        }
        m = running_mean(sample);
    }
    std::sort(means.begin(), means.end());
    const double tail = 0.5 * (1.0 - level);
    return {running_mean(values), percentile(means, tail), percentile(means, 1.0 - tail)};
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // Positions i..j (0-based) share ranks i+1..j+1.
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw DomainError("correlation inputs differ in length");
    }
    const double mx = running_mean(xs);
    const double my = running_mean(ys);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw UndefinedValue("correlation undefined for a constant input");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SpearmanResult spearman(std::span<const double> xs, std::span<const double> ys, bool exact) {
    if (xs.size() != ys.size()) {
        throw DomainError("spearman inputs differ in length");
    }
    const std::size_t n = xs.size();
    if (n < 3) {
        throw DomainError("spearman needs at least 3 pairs");
    }
    const auto rx = average_ranks(xs);
    auto ry = average_ranks(ys);
    SpearmanResult out;
    out.rho = pearson(rx, ry);

    if (exact && n <= 10) {
        // Every assignment of the y ranks to positions is equally likely under H0.
        std::sort(ry.begin(), ry.end());
        const double observed = std::abs(out.rho) - 1e-12;
        std::uint64_t extreme = 0;
        std::uint64_t total = 0;
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<double> perm(n);
        do {
            for (std::size_t i = 0; i < n; ++i) {
                perm[i] = ry[idx[i]];
            }
            ++total;
            if (std::abs(pearson(rx, perm)) >= observed) {
                ++extreme;
            }
        } while (std::next_permutation(idx.begin(), idx.end()));
        out.p_value = static_cast<double>(extreme) / static_cast<double>(total);
        out.exact = true;
        return out;
    }

    const double df = static_cast<double>(n - 2);
    if (std::abs(out.rho) >= 1.0) {
        out.p_value = 0.0;
        return out;
    }
    const double t = out.rho * std::sqrt(df / (1.0 - out.rho * out.rho));
    const boost::math::students_t_distribution<double> dist(df);
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return out;
}

}  // namespace limitlens
