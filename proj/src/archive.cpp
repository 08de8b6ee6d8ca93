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

#include "limitlens/archive.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <streambuf>
#include <string>

#include <boost/iostreams/filter/bzip2.hpp>
#include <boost/iostreams/filter/gzip.hpp>
#include <boost/iostreams/filtering_stream.hpp>

#include "limitlens/error.hpp"

namespace limitlens {

namespace io = boost::iostreams;
namespace fs = std::filesystem;

std::vector<fs::path> discover_shards(std::span<const fs::path> inputs) {
    std::vector<fs::path> shards;
    for (const auto& input : inputs) {
        std::error_code ec;
        const auto status = fs::status(input, ec);
        if (ec || !fs::exists(status)) {
            throw IoError("input path does not exist: '" + input.string() + "'");
        }
        if (fs::is_directory(status)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::recursive_directory_iterator(input)) {
                if (entry.is_regular_file() && entry.path().filename().string().front() != '.') {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            shards.insert(shards.end(), found.begin(), found.end());
        } else {
            shards.push_back(input);
        }
    }
    return shards;
}

namespace {

enum class Compression { none, gzip, bzip2 };

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Strips the compression suffix; reports which one it was.
Compression split_compression(std::string& name) {
    if (ends_with(name, ".gz")) {
        name.resize(name.size() - 3);
        return Compression::gzip;
    }
    if (ends_with(name, ".tgz")) {
        name.resize(name.size() - 4);
        name += ".tar";
        return Compression::gzip;
    }
    if (ends_with(name, ".bz2")) {
        name.resize(name.size() - 4);
        return Compression::bzip2;
    }
    return Compression::none;
}

void push_decompressor(io::filtering_istream& in, Compression c) {
    if (c == Compression::gzip) {
        in.push(io::gzip_decompressor());
    } else if (c == Compression::bzip2) {
        in.push(io::bzip2_decompressor());
    }
}

void stream_lines(std::istream& in, const LineVisitor& visit) {
    // Rethrow decompressor errors instead of folding them into badbit.
    in.exceptions(std::ios::badbit);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        visit(line);
    }
    if (in.bad()) {
        throw IoError("read error");
    }
}

// Exposes the next `remaining` bytes of an underlying stream as a stream.
class BoundedBuf : public std::streambuf {
public:
    BoundedBuf(std::istream& source, std::uint64_t size) : source_(source), remaining_(size) {}

    [[nodiscard]] std::uint64_t remaining() const noexcept { return remaining_; }

protected:
    int_type underflow() override {
        if (gptr() < egptr()) {
            return traits_type::to_int_type(*gptr());
        }
        if (remaining_ == 0) {
            return traits_type::eof();
        }
        const auto want = static_cast<std::streamsize>(std::min<std::uint64_t>(buffer_.size(), remaining_));
        source_.read(buffer_.data(), want);
        const auto got = source_.gcount();
        if (got <= 0) {
            throw IoError("tar member truncated");
        }
        remaining_ -= static_cast<std::uint64_t>(got);
        setg(buffer_.data(), buffer_.data(), buffer_.data() + got);
        return traits_type::to_int_type(*gptr());
    }

private:
    std::istream& source_;
    std::uint64_t remaining_;
    std::array<char, 1 << 16> buffer_{};
};

std::uint64_t parse_octal(const char* field, std::size_t len) {
    std::uint64_t value = 0;
    std::size_t i = 0;
    while (i < len && (field[i] == ' ' || field[i] == '\0')) {
        ++i;
    }
    for (; i < len && field[i] >= '0' && field[i] <= '7'; ++i) {
        value = value * 8 + static_cast<std::uint64_t>(field[i] - '0');
    }
    return value;
}

std::string c_field(const char* field, std::size_t len) {
    return std::string(field, strnlen(field, len));
}

void skip_bytes(std::istream& in, std::uint64_t n) {
    std::array<char, 4096> sink{};
    while (n > 0) {
        const auto chunk = static_cast<std::streamsize>(std::min<std::uint64_t>(n, sink.size()));
        in.read(sink.data(), chunk);
        if (in.gcount() != chunk) {
            throw IoError("tar archive truncated");
        }
        n -= static_cast<std::uint64_t>(chunk);
    }
}

void visit_member(std::istream& in, std::string name, const LineVisitor& visit) {
    const Compression c = split_compression(name);
    if (c == Compression::none) {
        stream_lines(in, visit);
        return;
    }
    io::filtering_istream decoded;
    push_decompressor(decoded, c);
    decoded.push(in);
    stream_lines(decoded, visit);
}

void walk_tar(std::istream& in, const LineVisitor& visit) {
    std::array<char, 512> header{};
    std::string long_name;
    while (true) {
        in.read(header.data(), header.size());
        if (in.gcount() == 0) {
            return;  // tolerate a missing end-of-archive marker
        }
        if (in.gcount() != static_cast<std::streamsize>(header.size())) {
            throw IoError("tar header truncated");
        }
        if (std::all_of(header.begin(), header.end(), [](char b) { return b == 0; })) {
            return;
        }
        const std::uint64_t size = parse_octal(header.data() + 124, 12);
        const char type = header[156];
        const std::uint64_t padded = (size + 511) / 512 * 512;

        std::string name = c_field(header.data(), 100);
        if (std::memcmp(header.data() + 257, "ustar", 5) == 0) {
            const std::string prefix = c_field(header.data() + 345, 155);
            if (!prefix.empty()) {
                name = prefix + "/" + name;
            }
        }
        if (!long_name.empty()) {
            name = std::move(long_name);
            long_name.clear();
        }

        if (type == 'L') {  // GNU long name for the next member
            long_name.resize(size);
            in.read(long_name.data(), static_cast<std::streamsize>(size));
            long_name.resize(strnlen(long_name.c_str(), long_name.size()));
            skip_bytes(in, padded - size);
            continue;
        }
        if (type != '0' && type != '\0') {  // directories, links, pax headers
            skip_bytes(in, padded);
            continue;
        }
        const auto base = fs::path(name).filename().string();
        if (base.empty() || base.front() == '.') {
            skip_bytes(in, padded);
            continue;
        }
        BoundedBuf member_buf(in, size);
        std::istream member(&member_buf);
        visit_member(member, name, visit);
        // Drain whatever the member reader did not consume, then the padding.
        skip_bytes(in, member_buf.remaining());
        skip_bytes(in, padded - size);
    }
}

}  // namespace

void for_each_line(const fs::path& shard, const LineVisitor& visit) {
    std::ifstream file(shard, std::ios::binary);
    if (!file) {
        throw IoError("cannot open shard '" + shard.string() + "'");
    }
    std::string name = shard.filename().string();
    const Compression outer = split_compression(name);
    const bool is_tar = ends_with(name, ".tar");

    if (outer == Compression::none) {
        if (is_tar) {
            walk_tar(file, visit);
        } else {
            stream_lines(file, visit);
        }
        return;
    }
    io::filtering_istream in;
    push_decompressor(in, outer);
    in.push(file);
    if (is_tar) {
        walk_tar(in, visit);
    } else {
        stream_lines(in, visit);
    }
}

}  // namespace limitlens
