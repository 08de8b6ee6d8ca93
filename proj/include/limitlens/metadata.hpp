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
#include <iosfwd>
#include <string>
#include <string_view>

namespace limitlens {

[[nodiscard]] std::string_view tool_version() noexcept;

/// Provenance carried by every output file. Nothing here may depend on the
/// wall clock or the worker count, so identical runs give identical bytes.
struct Metadata {
    std::string tool = "limitlens";
    std::string version{tool_version()};
    std::uint64_t seed = 0;
    std::string config_hash = "0000000000000000";
};

// 64-bit FNV-1a of a canonical config string, as 16 hex digits.
[[nodiscard]] std::string config_hash(std::string_view canonical);

// "# tool=...", "# seed=...", "# config=..." lines.
void write_preamble(std::ostream& out, const Metadata& meta);

}  // namespace limitlens
