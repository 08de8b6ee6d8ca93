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
#include <map>
#include <optional>
#include <string_view>

namespace limitlens {

struct Pagination {
    int index = 0;
    int total = 0;

    friend bool operator==(const Pagination&, const Pagination&) = default;
};

/// Trailing "i/k" marker (surrounding whitespace allowed) with 1 <= i <= k <= k_max.
/// The marker must start the text or follow a non-alphanumeric character.
[[nodiscard]] std::optional<Pagination> detect_pagination(std::string_view text, int k_max = 50);

struct ThreadCounts {
    // n_k: tweets carrying an "i/k" marker, by k.
    std::map<int, std::int64_t> paginated;
    // Tweets without a marker; they count as threads of length 1.
    std::int64_t unpaginated = 0;

    void add(std::string_view text, int k_max = 50);
    void merge(const ThreadCounts& other);
};

struct ThreadEstimate {
    double epsilon = 0.01;
    std::map<int, std::int64_t> n;
    std::map<int, double> m;             // n_k / (epsilon * k)
    std::map<int, double> distribution;  // m normalized over k
};

// Throws DomainError unless 0 < epsilon <= 1.
[[nodiscard]] ThreadEstimate estimate_threads(const ThreadCounts& counts, double epsilon = 0.01, int k_max = 50);

}  // namespace limitlens
