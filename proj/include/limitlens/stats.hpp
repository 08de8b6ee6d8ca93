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
#include <span>
#include <vector>

namespace limitlens {

struct BootstrapCI {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Percentile bootstrap of the mean: resample the values (days) with
/// replacement `resamples` times and take the (1-level)/2 and (1+level)/2
/// percentiles of the resample means. Deterministic for a fixed seed.
[[nodiscard]] BootstrapCI bootstrap_ci(std::span<const double> values, int resamples = 1000, double level = 0.95,
                                       std::uint64_t seed = 0);

// 1-based ranks; ties get the average of the ranks they span.
[[nodiscard]] std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation; throws UndefinedValue if either input is constant.
[[nodiscard]] double pearson(std::span<const double> xs, std::span<const double> ys);

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 1.0;
    bool exact = false;  // p from full permutation enumeration
};

/// Rank correlation with average-rank ties. The two-sided p-value uses the
/// t approximation with n - 2 degrees of freedom, or exact enumeration of all
/// rank permutations when `exact` is set and n <= 10.
[[nodiscard]] SpearmanResult spearman(std::span<const double> xs, std::span<const double> ys, bool exact = false);

}  // namespace limitlens
