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

#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace limitlens {

/// Expands input paths into an ordered list of shard files: regular files are
/// kept, directories are walked recursively (sorted by path). Throws IoError
/// for a path that does not exist.
[[nodiscard]] std::vector<std::filesystem::path> discover_shards(std::span<const std::filesystem::path> inputs);

using LineVisitor = std::function<void(std::string_view line)>;

/// Streams every line of a shard. Handles newline-delimited JSON, ".gz" and
/// ".bz2" compression, and ".tar" / ".tar.gz" / ".tgz" / ".tar.bz2" archives
/// whose members may themselves be compressed. Only one line is held in
/// memory at a time. Throws on IO or decompression failure.
void for_each_line(const std::filesystem::path& shard, const LineVisitor& visit);

}  // namespace limitlens
