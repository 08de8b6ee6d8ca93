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

#include "limitlens/pipeline.hpp"

#include <array>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "limitlens/archive.hpp"
#include "limitlens/did.hpp"
#include "limitlens/error.hpp"
#include "limitlens/ingest.hpp"
#include "limitlens/report.hpp"
#include "limitlens/series.hpp"
#include "limitlens/stats.hpp"

namespace limitlens {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array kQuantities{Quantity::cramming, Quantity::fraction_exceeding, Quantity::runover,
                                 Quantity::solved_limit};
constexpr std::array kDevices{DeviceClass::web, DeviceClass::mobile};

// Per-artifact bootstrap seed: FNV-1a of the label, folded with the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Writer {
public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

    void text(const std::string& name, const std::string& body) {
        const fs::path target = dir_ / name;
        const fs::path tmp = dir_ / (name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary);
            out << body;
            if (!out.flush()) {
                throw IoError("cannot write " + target.string());
            }
        }
        fs::rename(tmp, target);
        names_.push_back(name);
    }

    void store(const std::string& name, const HistogramStore& s, const Metadata& meta) {
        write_store(s, dir_ / name, meta);
        names_.push_back(name);
    }

    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }

private:
    fs::path dir_;
    std::vector<std::string> names_;
};

// Day-policy lengths for the series and fits; plain code-point counts for the
// DiD, whose periods straddle the counting change.
struct RunStores {
    HistogramStore weighted;
    HistogramStore code_points;

    void merge(const RunStores& other) {
        weighted.merge(other.weighted);
        code_points.merge(other.code_points);
    }
};

bool is_failure(const SeriesGap& gap) {
    return gap.reason != "missing";
}

FilterConfig load_filter(const RunConfig& config) {
    return config.filter_path ? load_filter_config(*config.filter_path) : FilterConfig::defaults();
}

}  // namespace

std::string canonical_run_config(const RunConfig& config) {
    std::ostringstream out;
    for (const auto& p : config.inputs) {
        out << "input=" << p.generic_string() << '\n';
    }
    out << "counting=" << CountingPolicy::resolve(config.counting).describe() << '\n';
    out << "filter=" << load_filter(config).to_json() << '\n';
    out << "bootstrap=" << config.bootstrap_resamples << '\n';
    out << "rolling=" << config.rolling_window << '\n';
    out << "svg=" << config.svg << '\n';
    return out.str();
}

RunOutcome run_pipeline(const RunConfig& config) {
    RunOutcome outcome;
    try {
        if (config.inputs.empty()) {
            throw IoError("no input paths given");
        }
        const std::vector<fs::path> shards = discover_shards(config.inputs);
        if (shards.empty()) {
            std::string names;
            for (const auto& p : config.inputs) {
                names += (names.empty() ? "" : ", ") + p.string();
            }
            throw IoError("no input shards found in " + names);
        }
        std::error_code ec;
        fs::create_directories(config.out_dir, ec);
        if (ec || !fs::is_directory(config.out_dir)) {
            throw IoError("cannot create output directory " + config.out_dir.string());
        }

        ScanOptions options;
        options.filter = load_filter(config);
        options.filter.validate();
        options.counting = CountingPolicy::resolve(config.counting);
        options.workers = config.workers;
        options.progress = config.progress;

        Metadata meta;
        meta.seed = config.seed;
        meta.config_hash = config_hash(canonical_run_config(config));

        const CountingConfig chars = pre2017_config();
        auto scan = scan_archives(shards, options, RunStores{HistogramStore(options.max_len), HistogramStore(options.max_len)},
                                  [&chars](RunStores& acc, const KeptTweet& t) {
                                      const CohortKey key{t.record.day(), t.record.lang, t.device};
                                      acc.weighted.add(key, t.length);
                                      acc.code_points.add(key, static_cast<int>(weighted_length(t.text, chars).value));
                                  });
        const IngestResult ingested{std::move(scan.acc.weighted), scan.tally, scan.shards_ok, scan.failed};
        const HistogramStore& code_points = scan.acc.code_points;
        Writer out(config.out_dir);
        out.text("ingest_summary.json", ingest_summary_json(ingested, meta));
        if (ingested.shards_ok.empty()) {
            throw IoError("every input shard failed; see ingest_summary.json");
        }
        if (config.store_path) {
            write_store(ingested.store, *config.store_path, meta);
        } else {
            out.store("store.csv", ingested.store, meta);
        }
        if (ingested.store.empty()) {
            throw IoError("no tweets passed the filters");
        }
        const HistogramStore& store = ingested.store;
        const std::vector<std::string> treated(options.filter.treated.begin(), options.filter.treated.end());
        const std::vector<std::string> control(options.filter.control.begin(), options.filter.control.end());

        json failures = json::array();
        for (const auto& f : ingested.failed) {
            failures.push_back({{"kind", "shard"}, {"path", f.path}, {"error", f.message}});
        }

        for (Quantity q : kQuantities) {
            std::vector<ChartSeries> charts;
            for (DeviceClass device : kDevices) {
                SeriesParams params;
                params.quantity = q;
                params.workers = config.workers;
                const std::array one{device};
                const DailySeries series = daily_series(store, one, treated, params);
                const std::string stem =
                    "series_" + std::string(to_string(q)) + "_" + std::string(to_string(device));
                for (const auto& gap : series.gaps) {
                    if (is_failure(gap)) {
                        failures.push_back({{"kind", "day"},
                                            {"series", stem},
                                            {"day", format_day(gap.day)},
                                            {"error", gap.reason}});
                    }
                }
                std::ostringstream csv;
                write_series_csv(csv, series, meta, config.rolling_window);
                out.text(stem + ".csv", csv.str());
                std::optional<BootstrapCI> ci;
                if (!series.points.empty()) {
                    const auto values = series.values();
                    ci = bootstrap_ci(values, config.bootstrap_resamples, 0.95, derive_seed(config.seed, stem));
                }
                out.text(stem + ".json", series_to_json(series, meta, config.rolling_window, ci));
                charts.push_back({std::string(to_string(device)), series});
            }
            if (config.svg) {
                out.text("series_" + std::string(to_string(q)) + ".svg",
                         render_svg(charts, "daily " + std::string(to_string(q)) + ", treated languages",
                                    config.rolling_window));
            }
        }

        // Pooled fits per device and side of the switch.
        const std::vector<Day> days = store.days();
        const std::array<std::pair<const char*, DayRange>, 2> periods{
            std::pair<const char*, DayRange>{"pre", DayRange{days.front(), Day{kSwitchDate} - std::chrono::days{1}}},
            std::pair<const char*, DayRange>{"post", DayRange{Day{kSwitchDate}, days.back()}}};
        for (DeviceClass device : kDevices) {
            for (const auto& [period, range] : periods) {
                if (range.empty()) {
                    continue;
                }
                const std::array one{device};
                const LengthHistogram h = query(store, range, treated, one);
                if (h.empty()) {
                    continue;
                }
                const std::string name = "fit_" + std::string(to_string(device)) + "_" + period + ".json";
                try {
                    const CramAnalysis a = analyze_histogram(h, enforced_limit_on(range.first));
                    FitReport report{a.fit, a.cramming, h.total(),
                                     std::string(to_string(device)) + " " + period + " " + format_day(range.first) +
                                         ".." + format_day(range.last)};
                    out.text(name, fit_to_json(report, meta));
                } catch (const Error& e) {
                    failures.push_back({{"kind", "fit"}, {"artifact", name}, {"error", e.what()}});
                }
            }
        }

        DidDesign design;
        design.treated = treated;
        design.control = control;
        design.pre = {parse_day("2017-01-01"), parse_day("2017-10-31")};
        design.post = {parse_day("2019-01-01"), parse_day("2019-10-31")};
        json did_status = "ok";
        try {
            out.text("did.json", did_to_json(did_estimate(build_did_panel(code_points, design)), meta));
        } catch (const DesignError& e) {
            did_status = std::string("skipped: ") + e.what();
        }

        outcome.exit_code = failures.empty() ? kExitOk : kExitPartial;
        json summary;
        summary["meta"] = {{"tool", meta.tool}, {"version", meta.version}, {"seed", meta.seed},
                           {"config", meta.config_hash}};
        summary["exit_code"] = outcome.exit_code;
        summary["shards"] = shards.size();
        summary["shards_failed"] = ingested.failed.size();
        summary["days"] = days.size();
        summary["did"] = did_status;
        summary["did_length_unit"] = "code_points";
        summary["failures"] = failures;
        summary["artifacts"] = out.names();
        out.text("run_summary.json", summary.dump(2) + "\n");
        outcome.artifacts = out.names();
        if (outcome.exit_code == kExitPartial) {
            outcome.message = std::to_string(failures.size()) + " failure(s); see run_summary.json";
        }
    } catch (const std::exception& e) {
        outcome.exit_code = kExitFatal;
        outcome.message = e.what();
    }
    return outcome;
}

}  // namespace limitlens
