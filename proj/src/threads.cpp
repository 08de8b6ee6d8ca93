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

#include "limitlens/threads.hpp"

#include <cctype>
#include <charconv>

#include "limitlens/error.hpp"

namespace limitlens {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ascii_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::optional<Pagination> detect_pagination(std::string_view text, int k_max) {
    std::size_t end = text.size();
    while (end > 0 && is_space(text[end - 1])) {
        --end;
    }
    std::size_t k_begin = end;
    while (k_begin > 0 && is_digit(text[k_begin - 1])) {
        --k_begin;
    }
    if (k_begin == end || k_begin == 0 || text[k_begin - 1] != '/') {
        return std::nullopt;
    }
    const std::size_t i_end = k_begin - 1;
    std::size_t i_begin = i_end;
    while (i_begin > 0 && is_digit(text[i_begin - 1])) {
        --i_begin;
    }
    if (i_begin == i_end) {
        return std::nullopt;
    }
    // "abc3/7" or "2019/10/3" are not markers. Non-ASCII bytes (e.g. CJK
    // punctuation) count as separators.
    if (i_begin > 0) {
        const char before = text[i_begin - 1];
        if (is_ascii_alnum(before) || before == '/') {
            return std::nullopt;
        }
    }
    if (end - k_begin > 4 || i_end - i_begin > 4) {
        return std::nullopt;
    }
    int i = 0;
    int k = 0;
    std::from_chars(text.data() + i_begin, text.data() + i_end, i);
    std::from_chars(text.data() + k_begin, text.data() + end, k);
    if (i < 1 || i > k || k > k_max) {
        return std::nullopt;
    }
    return Pagination{i, k};
}

void ThreadCounts::add(std::string_view text, int k_max) {
    if (const auto p = detect_pagination(text, k_max)) {
        ++paginated[p->total];
    } else {
        ++unpaginated;
    }
}

void ThreadCounts::merge(const ThreadCounts& other) {
    for (const auto& [k, n] : other.paginated) {
        paginated[k] += n;
    }
    unpaginated += other.unpaginated;
}

ThreadEstimate estimate_threads(const ThreadCounts& counts, double epsilon, int k_max) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw DomainError("sampling rate epsilon must lie in (0, 1]");
    }
    ThreadEstimate est;
    est.epsilon = epsilon;
    est.n[1] = counts.unpaginated;
    for (const auto& [k, n] : counts.paginated) {
        if (k >= 1 && k <= k_max) {
            est.n[k] += n;
        }
    }
    double total = 0.0;
    for (const auto& [k, n] : est.n) {
        const double m = static_cast<double>(n) / (epsilon * static_cast<double>(k));
        est.m[k] = m;
        total += m;
    }
    for (const auto& [k, m] : est.m) {
        est.distribution[k] = total > 0.0 ? m / total : 0.0;
    }
    return est;
}

}  // namespace limitlens
