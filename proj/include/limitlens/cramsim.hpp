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
#include <random>

#include "limitlens/histstore.hpp"

namespace limitlens {

using Rng = std::mt19937_64;

/// Parameters of the forward writing/editing model. Intended lengths are
/// round(exp(N(mu, sigma^2))); an over-limit draft is edited with probability
/// p (else abandoned), losing max(1, ceil(alpha * (x - L))) characters, and
/// the truncation is a valid sentence with probability q.
struct SimConfig {
    double mu = 3.9;
    double sigma = 0.9;
    int limit = 140;
    double p = 0.7;
    double q = 0.5;
    double alpha = 1.0;
    int max_rounds = 20;
    std::uint64_t seed = 0;
    // Multiplies alpha by U(0.8, 1.2) on every round.
    bool jitter = false;

    void validate() const;  // throws DomainError
    // Histogram width used for emitted lengths.
    [[nodiscard]] int max_len() const noexcept { return limit > kDefaultMaxLength ? limit : kDefaultMaxLength; }
};

struct SimResult {
    LengthHistogram histogram;
    std::int64_t n_drawn = 0;
    std::int64_t n_emitted = 0;
    std::int64_t n_abandoned = 0;
    std::int64_t n_edited_emitted = 0;
    // 1 - F(L) of the continuous intended distribution.
    double true_runover = 0.0;

    // Fraction of emitted tweets that were squeezed under the limit.
    [[nodiscard]] double edited_fraction() const noexcept {
        return n_emitted == 0 ? 0.0 : static_cast<double>(n_edited_emitted) / static_cast<double>(n_emitted);
    }

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

[[nodiscard]] std::int64_t draw_intended_length(double mu, double sigma, Rng& rng);

struct EditOutcome {
    enum class Kind { emitted, abandoned, carry_on };
    Kind kind = Kind::abandoned;
    std::int64_t length = 0;
};

// One edit round on a draft of length x (x > L on the first round; later
// rounds may carry an invalid truncation at or under L).
[[nodiscard]] EditOutcome edit_round(std::int64_t x, const SimConfig& config, Rng& rng);

// Draws per independent sub-stream; stream s is seeded from (seed, s).
inline constexpr std::int64_t kSimStreamSize = 1 << 16;

// Runs n pipelines across OpenMP threads. `workers` <= 0 uses the OpenMP
// default. The result does not depend on the worker count.
[[nodiscard]] SimResult simulate(const SimConfig& config, std::int64_t n, int workers = 0);

namespace serial {
// Reference kernel: same sub-streams, visited in order on one thread.
[[nodiscard]] SimResult simulate(const SimConfig& config, std::int64_t n);
}  // namespace serial

}  // namespace limitlens
