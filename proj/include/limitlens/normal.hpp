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

namespace limitlens {

// Standard normal CDF, accurate in both tails.
[[nodiscard]] double normal_cdf(double x) noexcept;
// 1 - normal_cdf(x) without cancellation.
[[nodiscard]] double normal_sf(double x) noexcept;

/// Inverse of the standard normal CDF on (0, 1). Rational initial guess
/// (Acklam) refined by Halley steps against the erfc-based CDF; absolute
/// error is at the level of double rounding. Throws DomainError outside (0, 1).
[[nodiscard]] double normal_quantile(double p);

// Log-normal density at x > 0 for log-location mu and log-scale sigma.
[[nodiscard]] double lognormal_pdf(double x, double mu, double sigma) noexcept;

}  // namespace limitlens
