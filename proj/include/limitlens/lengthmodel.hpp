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
#include <vector>

#include "limitlens/error.hpp"
#include "limitlens/histstore.hpp"

namespace limitlens {

/// Log-normal body fitted below the cramming threshold.
///
/// The fitted curve is `amplitude * lognormal_pdf(l; mu, sigma)` on integer
/// lengths `l` in [fit_lo, fit_hi]; `threshold` is the first excluded length
/// and `limit` the enforced limit the fit was made against.
struct FitResult {
    double mu = 0.0;
    double sigma = 1.0;
    double amplitude = 1.0;
    int threshold = 0;
    int fit_lo = 0;
    int fit_hi = 0;
    double sse = 0.0;
    int limit = 0;
    int iterations = 0;

    // amplitude * lognormal_pdf(length; mu, sigma)
    [[nodiscard]] double curve(double length) const noexcept;
};

// Carries the best parameters reached when the optimizer gives up.
class FitError : public Error {
public:
    explicit FitError(const std::string& what, std::optional<FitResult> best = std::nullopt)
        : Error("fit error: " + what), best_(best) {}

    [[nodiscard]] const std::optional<FitResult>& best_so_far() const noexcept { return best_; }

private:
    std::optional<FitResult> best_;
};

class LimitTooSmall : public DomainError {
public:
    using DomainError::DomainError;
};

struct ModelOptions {
    int fit_lo = 5;
    int smooth_window = 5;
    int max_iterations = 500;
};

// Centered moving average over indices 1..n-1 of `values` (index 0 is left
// at 0); windows are truncated at the edges. `window` must be odd and >= 1.
[[nodiscard]] std::vector<double> smooth(std::span<const double> values, int window);
// smooth(h.density(), window); throws UndefinedValue for an empty histogram.
[[nodiscard]] std::vector<double> smooth_density(const LengthHistogram& h, int window = 5);

/// Rightmost local minimum in [limit/2, limit-1]: the largest i with
/// density[i] < density[i-1] and density[i] <= density[i+1]. Falls back to
/// floor(0.9 * limit). `density` must cover indices 0..limit.
[[nodiscard]] int find_cramming_threshold(std::span<const double> density, int limit);

/// Least-squares fit of A * lognormal_pdf(l; mu, sigma) to density[l] for
/// l in [fit_lo, threshold). Levenberg-Marquardt on (mu, ln sigma, A),
/// started at mu = ln(median), sigma = sd of ln l (density-weighted), A = 1.
[[nodiscard]] FitResult fit_lognormal(std::span<const double> density, int fit_lo, int threshold, int limit,
                                      int max_iterations = 500);

// Sum over l in [threshold, limit] of max(0, density[l] - fit.curve(l)).
[[nodiscard]] double cramming_size(std::span<const double> density, const FitResult& fit);

// Normalized log-normal tail mass beyond c (amplitude not applied).
[[nodiscard]] double runover(const FitResult& fit, double c);

// exp(mu + sigma * quantile(1 - r)); throws DomainError unless 0 < r < 1.
[[nodiscard]] double solve_limit(const FitResult& fit, double target_runover);

struct CramAnalysis {
    FitResult fit;
    double cramming = 0.0;
};

// density -> smoothed density -> threshold -> fit -> cramming, at `limit`.
[[nodiscard]] CramAnalysis analyze_histogram(const LengthHistogram& h, int limit,
                                             const ModelOptions& options = {});

}  // namespace limitlens
