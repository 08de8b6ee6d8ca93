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

#include "limitlens/cramsim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "limitlens/error.hpp"
#include "limitlens/normal.hpp"

namespace limitlens {

void SimConfig::validate() const {
    if (!(sigma > 0.0)) {
        throw DomainError("sigma must be positive");
    }
    if (limit < 1) {
        throw DomainError("limit must be >= 1");
    }
    if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) {
        throw DomainError("p and q must lie in [0, 1]");
    }
    if (!(alpha > 0.0)) {
        throw DomainError("alpha must be positive");
    }
    if (max_rounds < 1) {
        throw DomainError("max_rounds must be >= 1");
    }
}

std::int64_t draw_intended_length(double mu, double sigma, Rng& rng) {
    std::normal_distribution<double> normal(mu, sigma);
    const double x = std::round(std::exp(normal(rng)));
    // Clamp before the cast; absurd draws stay far above any limit.
    return static_cast<std::int64_t>(std::clamp(x, 1.0, 1e15));
}

EditOutcome edit_round(std::int64_t x, const SimConfig& config, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (!(unit(rng) < config.p)) {
        return {EditOutcome::Kind::abandoned, x};
    }
    double alpha = config.alpha;
    if (config.jitter) {
        alpha *= std::uniform_real_distribution<double>(0.8, 1.2)(rng);
    }
    const auto excess = static_cast<double>(x - config.limit);
    const auto removed = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(alpha * excess)));
    const std::int64_t next = std::max<std::int64_t>(x - removed, 1);
    if (next <= config.limit && unit(rng) < config.q) {
        return {EditOutcome::Kind::emitted, next};
    }
    return {EditOutcome::Kind::carry_on, next};
}

namespace {

void run_stream(const SimConfig& config, std::int64_t stream, std::int64_t count, SimResult& out) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    Rng rng(seq);
    for (std::int64_t i = 0; i < count; ++i) {
        ++out.n_drawn;
        std::int64_t x = draw_intended_length(config.mu, config.sigma, rng);
        if (x <= config.limit) {
            out.histogram.add(static_cast<int>(x));
            ++out.n_emitted;
            continue;
        }
        bool emitted = false;
        for (int round = 0; round < config.max_rounds; ++round) {
            const auto outcome = edit_round(x, config, rng);
            if (outcome.kind == EditOutcome::Kind::emitted) {
                out.histogram.add(static_cast<int>(outcome.length));
                ++out.n_emitted;
                ++out.n_edited_emitted;
                emitted = true;
                break;
            }
            if (outcome.kind == EditOutcome::Kind::abandoned) {
                break;
            }
            x = outcome.length;
        }
        if (!emitted) {
            ++out.n_abandoned;
        }
    }
}

SimResult empty_result(const SimConfig& config) {
    SimResult r;
    r.histogram = LengthHistogram(config.max_len());
    r.true_runover = normal_sf((std::log(static_cast<double>(config.limit)) - config.mu) / config.sigma);
    return r;
}

void accumulate(SimResult& into, const SimResult& part) {
    into.histogram += part.histogram;
    into.n_drawn += part.n_drawn;
    into.n_emitted += part.n_emitted;
    into.n_abandoned += part.n_abandoned;
    into.n_edited_emitted += part.n_edited_emitted;
}

std::int64_t stream_count(std::int64_t n) { return (n + kSimStreamSize - 1) / kSimStreamSize; }

std::int64_t stream_length(std::int64_t n, std::int64_t s) {
    return std::min(kSimStreamSize, n - s * kSimStreamSize);
}

}  // namespace

SimResult simulate(const SimConfig& config, std::int64_t n, int workers) {
    config.validate();
    if (n < 1) {
        throw DomainError("simulate needs n >= 1");
    }
    const std::int64_t streams = stream_count(n);
    std::vector<SimResult> parts(static_cast<std::size_t>(streams), empty_result(config));
#ifdef _OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (std::int64_t s = 0; s < streams; ++s) {
        run_stream(config, s, stream_length(n, s), parts[static_cast<std::size_t>(s)]);
    }
    (void)workers;
    SimResult total = empty_result(config);
    for (const auto& part : parts) {
        accumulate(total, part);
    }
    return total;
}

namespace serial {

SimResult simulate(const SimConfig& config, std::int64_t n) {
    config.validate();
    if (n < 1) {
        throw DomainError("simulate needs n >= 1");
    }
    SimResult total = empty_result(config);
    for (std::int64_t s = 0; s < stream_count(n); ++s) {
        run_stream(config, s, stream_length(n, s), total);
    }
    return total;
}

}  // namespace serial

}  // namespace limitlens
