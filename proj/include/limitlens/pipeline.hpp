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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "limitlens/metadata.hpp"

namespace limitlens {

struct RunConfig {
    std::vector<std::filesystem::path> inputs;
    std::string counting = "auto";  // "auto", a built-in name, or a config file
    std::optional<std::filesystem::path> filter_path;
    std::optional<std::filesystem::path> store_path;  // default: <out_dir>/store.csv
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    int workers = 0;
    int bootstrap_resamples = 1000;
    int rolling_window = 10;
    bool svg = true;
    bool progress = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitFatal = 2;

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
    // Output files relative to the output directory, in write order.
    std::vector<std::string> artifacts;
};

// Hash input for the run: everything that shapes outputs except the worker count.
[[nodiscard]] std::string canonical_run_config(const RunConfig& config);

/// ingest -> store -> daily series, pooled fits and DiD -> CSV/JSON/SVG.
/// Never throws; fatal problems come back as exit 2 with a message.
[[nodiscard]] RunOutcome run_pipeline(const RunConfig& config);

}  // namespace limitlens
