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

#include "limitlens/metadata.hpp"

#include <cstdio>
#include <ostream>

#ifndef LIMITLENS_VERSION
#define LIMITLENS_VERSION "0.0.0"
#endif

namespace limitlens {

std::string_view tool_version() noexcept { return LIMITLENS_VERSION; }

std::string config_hash(std::string_view canonical) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_preamble(std::ostream& out, const Metadata& meta) {
    out << "# tool=" << meta.tool << ' ' << meta.version << '\n'
        << "# seed=" << meta.seed << '\n'
        << "# config=" << meta.config_hash << '\n';
}

}  // namespace limitlens
