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

#include "limitlens/histstore.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/iostreams/filter/gzip.hpp>
#include <boost/iostreams/filtering_stream.hpp>

#include "limitlens/error.hpp"

namespace limitlens {

namespace io = boost::iostreams;

LengthHistogram::LengthHistogram(int max_len) {
    if (max_len < 1) {
        throw DomainError("histogram max_len must be >= 1");
    }
    counts_.assign(static_cast<std::size_t>(max_len) + 1, 0);
}

std::int64_t LengthHistogram::count(int length) const noexcept {
    if (length < 1 || length > max_len()) {
        return 0;
    }
    return counts_[static_cast<std::size_t>(length)];
}

void LengthHistogram::add(int length, std::int64_t n) {
    if (length < 1 || length > max_len()) {
        throw DomainError("length " + std::to_string(length) + " outside histogram range [1, " +
                          std::to_string(max_len()) + "]");
    }
    if (n < 0) {
        throw DomainError("negative histogram count");
    }
    counts_[static_cast<std::size_t>(length)] += n;
    total_ += n;
}

LengthHistogram& LengthHistogram::operator+=(const LengthHistogram& other) {
    if (other.max_len() != max_len()) {
        throw DimensionError("cannot merge histograms with max_len " + std::to_string(max_len()) + " and " +
                             std::to_string(other.max_len()));
    }
    for (std::size_t i = 1; i < counts_.size(); ++i) {
        counts_[i] += other.counts_[i];
    }
    total_ += other.total_;
    return *this;
}

std::vector<double> LengthHistogram::density() const {
    if (total_ == 0) {
        throw UndefinedValue("density of an empty histogram");
    }
    std::vector<double> d(counts_.size(), 0.0);
    const double n = static_cast<double>(total_);
    for (std::size_t i = 1; i < counts_.size(); ++i) {
        d[i] = static_cast<double>(counts_[i]) / n;
    }
    return d;
}

double LengthHistogram::mean_length() const {
    if (total_ == 0) {
        throw UndefinedValue("mean length of an empty histogram");
    }
    long double sum = 0;
    for (std::size_t i = 1; i < counts_.size(); ++i) {
        sum += static_cast<long double>(i) * static_cast<long double>(counts_[i]);
    }
    return static_cast<double>(sum / static_cast<long double>(total_));
}

LengthHistogram merge(const LengthHistogram& a, const LengthHistogram& b) {
    LengthHistogram out = a;
    out += b;
    return out;
}

double fraction_exceeding(const LengthHistogram& h, int c) {
    if (h.empty()) {
        throw UndefinedValue("fraction_exceeding on an empty histogram");
    }
    std::int64_t above = 0;
    for (int l = std::max(c + 1, 1); l <= h.max_len(); ++l) {
        above += h.count(l);
    }
    return static_cast<double>(above) / static_cast<double>(h.total());
}

bool operator<(const CohortKey& a, const CohortKey& b) {
    if (a.day != b.day) {
        return a.day < b.day;
    }
    if (a.lang != b.lang) {
        return a.lang < b.lang;
    }
    return to_string(a.device) < to_string(b.device);
}

void HistogramStore::add(const CohortKey& key, int length, std::int64_t n) {
    auto [it, inserted] = cohorts_.try_emplace(key, max_len_);
    it->second.add(length, n);
}

void HistogramStore::add(const CohortKey& key, const LengthHistogram& h) {
    auto [it, inserted] = cohorts_.try_emplace(key, max_len_);
    it->second += h;
}

void HistogramStore::merge(const HistogramStore& other) {
    if (other.max_len_ != max_len_) {
        throw DimensionError("cannot merge stores with max_len " + std::to_string(max_len_) + " and " +
                             std::to_string(other.max_len_));
    }
    for (const auto& [key, h] : other.cohorts_) {
        add(key, h);
    }
}

std::vector<Day> HistogramStore::days() const {
    std::vector<Day> out;
    for (const auto& [key, h] : cohorts_) {
        if (h.total() > 0 && (out.empty() || out.back() != key.day)) {
            out.push_back(key.day);
        }
    }
    return out;
}

std::int64_t HistogramStore::total() const noexcept {
    std::int64_t n = 0;
    for (const auto& [key, h] : cohorts_) {
        n += h.total();
    }
    return n;
}

LengthHistogram query(const HistogramStore& store, const DayRange& days, std::span<const std::string> langs,
                      std::span<const DeviceClass> devices) {
    LengthHistogram out(store.max_len());
    if (days.empty() || langs.empty() || devices.empty()) {
        return out;
    }
    const auto& cohorts = store.cohorts();
    auto it = cohorts.lower_bound(CohortKey{days.first, std::string{}, DeviceClass::web});
    for (; it != cohorts.end() && it->first.day <= days.last; ++it) {
        const auto& key = it->first;
        if (std::find(langs.begin(), langs.end(), key.lang) == langs.end()) {
            continue;
        }
        if (std::find(devices.begin(), devices.end(), key.device) == devices.end()) {
            continue;
        }
        out += it->second;
    }
    return out;
}

void write_store(const HistogramStore& store, std::ostream& out, const Metadata& meta) {
    write_preamble(out, meta);
    out << "# max_len=" << store.max_len() << '\n';
    out << "day,lang,device,length,count\n";
    for (const auto& [key, h] : store.cohorts()) {
        const std::string prefix = format_day(key.day) + ',' + key.lang + ',' + std::string(to_string(key.device)) + ',';
        for (int l = 1; l <= h.max_len(); ++l) {
            if (const auto c = h.count(l); c != 0) {
                out << prefix << l << ',' << c << '\n';
            }
        }
    }
}

namespace {

bool has_gz_suffix(const std::filesystem::path& p) { return p.extension() == ".gz"; }

}  // namespace

void write_store(const HistogramStore& store, const std::filesystem::path& path, const Metadata& meta) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw IoError("cannot write store '" + tmp.string() + "'");
        }
        if (has_gz_suffix(path)) {
            io::filtering_ostream out;
            io::gzip_params params;
            params.mtime = 0;
            out.push(io::gzip_compressor(params));
            out.push(file);
            write_store(store, out, meta);
        } else {
            write_store(store, file, meta);
        }
        file.flush();
        if (!file) {
            throw IoError("short write to '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

namespace {

std::int64_t parse_i64(std::string_view s, const std::string& origin, std::size_t line_no) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw IoError(origin + ":" + std::to_string(line_no) + ": bad integer '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

HistogramStore read_store(std::istream& in, const std::string& origin) {
    struct Row {
        CohortKey key;
        int length;
        std::int64_t count;
    };
    std::vector<Row> rows;
    int max_len = 0;
    int max_seen = 0;
    bool header_seen = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            constexpr std::string_view tag = "# max_len=";
            if (line.starts_with(tag)) {
                max_len = static_cast<int>(parse_i64(std::string_view(line).substr(tag.size()), origin, line_no));
            }
            continue;
        }
        if (!header_seen) {
            if (line != "day,lang,device,length,count") {
                throw IoError(origin + ":" + std::to_string(line_no) + ": unexpected header '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        std::string_view fields[5];
        std::string_view rest = line;
        for (int f = 0; f < 5; ++f) {
            const auto comma = rest.find(',');
            if ((f < 4) == (comma == std::string_view::npos)) {
                throw IoError(origin + ":" + std::to_string(line_no) + ": expected 5 fields");
            }
            fields[f] = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        Row row{CohortKey{parse_day(fields[0]), std::string(fields[1]), parse_device(fields[2])},
                static_cast<int>(parse_i64(fields[3], origin, line_no)), parse_i64(fields[4], origin, line_no)};
        max_seen = std::max(max_seen, row.length);
        rows.push_back(std::move(row));
    }
    if (!header_seen) {
        throw IoError(origin + ": missing store header");
    }
    HistogramStore store(max_len > 0 ? max_len : std::max(max_seen, kDefaultMaxLength));
    for (const auto& row : rows) {
        store.add(row.key, row.length, row.count);
    }
    return store;
}

HistogramStore read_store(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot read store '" + path.string() + "'");
    }
    if (has_gz_suffix(path)) {
        io::filtering_istream in;
        in.push(io::gzip_decompressor());
        in.push(file);
        return read_store(in, path.string());
    }
    return read_store(file, path.string());
}

void write_histogram_csv(const LengthHistogram& h, std::ostream& out, const Metadata& meta) {
    write_preamble(out, meta);
    out << "# max_len=" << h.max_len() << '\n';
    out << "length,count\n";
    for (int l = 1; l <= h.max_len(); ++l) {
        if (const auto c = h.count(l); c != 0) {
            out << l << ',' << c << '\n';
        }
    }
}

}  // namespace limitlens
