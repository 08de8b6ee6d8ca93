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

// limitlens command-line front end. Results go to files (or stdout when no
// --out is given); diagnostics go to stderr.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "limitlens/archive.hpp"
#include "limitlens/cramsim.hpp"
#include "limitlens/did.hpp"
#include "limitlens/error.hpp"
#include "limitlens/histstore.hpp"
#include "limitlens/ingest.hpp"
#include "limitlens/lengthmodel.hpp"
#include "limitlens/lexicon.hpp"
#include "limitlens/pipeline.hpp"
#include "limitlens/report.hpp"
#include "limitlens/series.hpp"
#include "limitlens/stats.hpp"
#include "limitlens/threads.hpp"

namespace fs = std::filesystem;
using namespace limitlens;

namespace {

// Options that never change the bytes of a result.
bool affects_output(const CLI::Option* opt) {
    static const std::set<std::string> ignored{"--workers", "--progress", "--out", "--summary",
                                               "--json",    "--svg",      "--help"};
    return !ignored.contains(opt->get_name());
}

// Metadata for a subcommand: the seed and a hash over the options it was given.
Metadata metadata_for(const CLI::App* sub, std::uint64_t seed) {
    std::map<std::string, std::string> given;
    for (const CLI::Option* opt : sub->get_options()) {
        if (!affects_output(opt) || opt->count() == 0) {
            continue;
        }
        std::string joined;
        for (const auto& r : opt->results()) {
            joined += r + "\x1f";
        }
        given[opt->get_name()] = joined;
    }
    std::string canonical = sub->get_name() + "\n";
    for (const auto& [name, value] : given) {
        canonical += name + "=" + value + "\n";
    }
    Metadata meta;
    meta.seed = seed;
    meta.config_hash = config_hash(canonical);
    return meta;
}

void emit(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body << std::flush;
        return;
    }
    const fs::path target(path);
    const fs::path tmp(path + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw IoError("cannot write " + path);
        }
        out << body;
        if (!out.flush()) {
            throw IoError("cannot write " + path);
        }
    }
    fs::rename(tmp, target);
}

std::vector<DeviceClass> parse_devices(const std::string& name) {
    if (name == "all") {
        return {DeviceClass::web, DeviceClass::mobile};
    }
    return {parse_device(name)};
}

FilterConfig filter_from(const std::string& path) {
    return path.empty() ? FilterConfig::defaults() : load_filter_config(path);
}

std::vector<std::string> langs_or_treated(const std::vector<std::string>& langs, const std::string& filter_path) {
    if (!langs.empty()) {
        return langs;
    }
    const FilterConfig filter = filter_from(filter_path);
    return {filter.treated.begin(), filter.treated.end()};
}

DayRange range_from(const HistogramStore& store, const std::string& from, const std::string& to) {
    const auto days = store.days();
    DayRange r{days.empty() ? Day{} : days.front(), days.empty() ? Day{} : days.back()};
    if (!from.empty()) {
        r.first = parse_day(from);
    }
    if (!to.empty()) {
        r.last = parse_day(to);
    }
    return r;
}

void print_tally(const IngestTally& tally) {
    std::cerr << "records: " << tally.records_in << ", kept: " << tally.kept;
    for (const auto& [device, n] : tally.kept_by_device) {
        std::cerr << " (" << to_string(device) << ' ' << n << ')';
    }
    std::cerr << '\n';
    for (const auto& [reason, n] : tally.drops) {
        std::cerr << "  dropped " << to_string(reason) << ": " << n << '\n';
    }
    if (tally.counting_anomalies > 0) {
        std::cerr << "  counting anomalies (over 1.1x the limit): " << tally.counting_anomalies << '\n';
    }
}

void report_failures(const std::vector<ShardFailure>& failed) {
    for (const auto& f : failed) {
        std::cerr << "shard failed: " << f.path << ": " << f.message << '\n';
    }
}

std::vector<fs::path> to_paths(const std::vector<std::string>& inputs) {
    return {inputs.begin(), inputs.end()};
}

// Splits one CSV line on commas; no quoting support beyond stripping "..." around a cell.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
            cell = cell.substr(1, cell.size() - 2);
        }
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

struct PeriodThreads {
    ThreadCounts pre;
    ThreadCounts post;
    int k_max = 50;

    void merge(const PeriodThreads& other) {
        pre.merge(other.pre);
        post.merge(other.post);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"limitlens: tweet-length limit impact analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));

    int workers = 0;
    std::uint64_t seed = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--workers", workers, "Worker threads (0: all cores); never changes results");
        sub->add_option("--seed", seed, "Seed recorded in output metadata");
    };

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "Archives -> per-day length histogram store");
    std::vector<std::string> inputs;
    std::string filter_path;
    std::string counting = "auto";
    std::string out_path;
    std::string summary_path;
    bool progress = false;
    ingest_cmd->add_option("--input", inputs, "Archive files or directories")->required();
    ingest_cmd->add_option("--config", filter_path, "Filter config (JSON); default: built-in");
    ingest_cmd->add_option("--counting", counting, "auto | pre2017 | post2017 | counting config file");
    ingest_cmd->add_option("--out", out_path, "Store CSV (.gz for gzip)")->required();
    ingest_cmd->add_option("--summary", summary_path, "Ingest summary JSON; default: <out>.summary.json");
    ingest_cmd->add_flag("--progress", progress, "Per-shard progress on stderr");
    add_common(ingest_cmd);

    // hist query
    auto* hist_cmd = app.add_subcommand("hist", "Histogram store queries");
    hist_cmd->require_subcommand(1);
    auto* hist_query = hist_cmd->add_subcommand("query", "Merged length histogram for a selection");
    std::string store_path;
    std::string from;
    std::string to;
    std::vector<std::string> langs;
    std::string device = "all";
    hist_query->add_option("--store", store_path)->required();
    hist_query->add_option("--from", from, "First day (YYYY-MM-DD)");
    hist_query->add_option("--to", to, "Last day (YYYY-MM-DD)");
    hist_query->add_option("--langs", langs, "Languages (comma list); default: treated")->delimiter(',');
    hist_query->add_option("--device", device, "web | mobile | all");
    hist_query->add_option("--config", filter_path, "Filter config for the default languages");
    hist_query->add_option("--out", out_path, "Output CSV; default: stdout");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Log-normal fit, threshold and cramming for one selection");
    std::string day;
    std::optional<int> limit;
    ModelOptions model;
    fit_cmd->add_option("--store", store_path)->required();
    fit_cmd->add_option("--day", day, "First (or only) day")->required();
    fit_cmd->add_option("--to", to, "Last day; default: --day");
    fit_cmd->add_option("--device", device, "web | mobile | all");
    fit_cmd->add_option("--langs", langs)->delimiter(',');
    fit_cmd->add_option("--config", filter_path);
    fit_cmd->add_option("--limit", limit, "Enforced limit; default: by date");
    fit_cmd->add_option("--fit-lo", model.fit_lo, "Shortest length in the fit");
    fit_cmd->add_option("--window", model.smooth_window, "Smoothing window for the threshold");
    fit_cmd->add_option("--out", out_path, "Fit JSON; default: stdout");

    // daily
    auto* daily_cmd = app.add_subcommand("daily", "Per-day series of one quantity");
    std::string quantity = "cramming";
    SeriesParams params;
    int rolling = 10;
    int resamples = 1000;
    std::string json_path;
    std::string svg_path;
    daily_cmd->add_option("--store", store_path)->required();
    daily_cmd->add_option("--quantity", quantity, "cramming | fraction_exceeding | runover | solved_limit");
    daily_cmd->add_option("--device", device, "web | mobile | all");
    daily_cmd->add_option("--langs", langs)->delimiter(',');
    daily_cmd->add_option("--config", filter_path);
    daily_cmd->add_option("--from", from);
    daily_cmd->add_option("--to", to);
    daily_cmd->add_option("--limit", limit, "Limit for cramming; default: by date");
    daily_cmd->add_option("--exceed-at", params.exceed_at, "Length for fraction_exceeding");
    daily_cmd->add_option("--runover-at", params.runover_at, "Length for runover");
    daily_cmd->add_option("--target", params.target, "Run-over target for solved_limit");
    daily_cmd->add_option("--rolling", rolling, "Rolling-mean window in days");
    daily_cmd->add_option("--bootstrap", resamples, "Bootstrap resamples for the JSON summary");
    daily_cmd->add_option("--out", out_path, "Series CSV; default: stdout");
    daily_cmd->add_option("--json", json_path, "Series JSON with bootstrap CI");
    daily_cmd->add_option("--svg", svg_path, "SVG chart");
    add_common(daily_cmd);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Generative cramming simulator -> store CSV");
    SimConfig sim;
    std::int64_t n = 1000000;
    std::string sim_day = "2017-06-01";
    sim_cmd->add_option("--mu", sim.mu);
    sim_cmd->add_option("--sigma", sim.sigma);
    sim_cmd->add_option("--limit", sim.limit);
    sim_cmd->add_option("--p", sim.p, "Probability of editing an over-limit draft");
    sim_cmd->add_option("--q", sim.q, "Probability a truncation is acceptable");
    sim_cmd->add_option("--alpha", sim.alpha, "Deletion per excess character");
    sim_cmd->add_option("--max-rounds", sim.max_rounds);
    sim_cmd->add_flag("--jitter", sim.jitter, "Randomize deletions around alpha * excess");
    sim_cmd->add_option("--n", n, "Intended tweets to draw");
    sim_cmd->add_option("--day", sim_day, "Day label of the simulated cohort");
    sim_cmd->add_option("--out", out_path, "Store CSV")->required();
    sim_cmd->add_option("--summary", summary_path, "SimResult JSON; default: stderr");
    add_common(sim_cmd);

    // solve-limit
    auto* solve_cmd = app.add_subcommand("solve-limit", "Limit at which a fitted model runs over by a target");
    std::string fit_path;
    double target = 0.05;
    std::optional<double> mu;
    std::optional<double> sigma;
    solve_cmd->add_option("--fit", fit_path, "Fit JSON from `fit`");
    solve_cmd->add_option("--mu", mu);
    solve_cmd->add_option("--sigma", sigma);
    solve_cmd->add_option("--target", target, "Run-over fraction in (0, 1)");

    // did
    auto* did_cmd = app.add_subcommand("did", "Difference-in-differences on ln(mean length)");
    std::string pre_from = "2017-01-01";
    std::string pre_to = "2017-10-31";
    std::string post_from = "2019-01-01";
    std::string post_to = "2019-10-31";
    did_cmd->add_option("--store", store_path)->required();
    did_cmd->add_option("--config", filter_path, "Filter config with treated/control languages");
    did_cmd->add_option("--pre-from", pre_from);
    did_cmd->add_option("--pre-to", pre_to);
    did_cmd->add_option("--post-from", post_from);
    did_cmd->add_option("--post-to", post_to);
    did_cmd->add_option("--device", device, "web | mobile | all");
    did_cmd->add_option("--out", out_path, "DiD JSON; default: stdout");

    // threads
    auto* threads_cmd = app.add_subcommand("threads", "Thread-length estimate from i/k pagination");
    double epsilon = 0.01;
    int k_max = 50;
    threads_cmd->add_option("--input", inputs)->required();
    threads_cmd->add_option("--config", filter_path);
    threads_cmd->add_option("--counting", counting);
    threads_cmd->add_option("--epsilon", epsilon, "Sampling rate of the archive");
    threads_cmd->add_option("--k-max", k_max, "Largest plausible thread length");
    threads_cmd->add_option("--out", out_path, "JSON; default: stdout");
    add_common(threads_cmd);

    // curves
    auto* curves_cmd = app.add_subcommand("curves", "Length-conditioned lexicon category curves");
    std::string lexicon_path;
    int max_len = kDefaultMaxLength;
    curves_cmd->add_option("--input", inputs)->required();
    curves_cmd->add_option("--lexicon", lexicon_path)->required();
    curves_cmd->add_option("--config", filter_path);
    curves_cmd->add_option("--counting", counting);
    curves_cmd->add_option("--max-len", max_len);
    curves_cmd->add_option("--out", out_path, "CSV; default: stdout");
    add_common(curves_cmd);

    // correlate
    auto* corr_cmd = app.add_subcommand("correlate", "Spearman rank correlation of two table columns");
    std::string table_path;
    std::string x_col;
    std::string y_col;
    bool exact = false;
    corr_cmd->add_option("--table", table_path, "CSV with a header row")->required();
    corr_cmd->add_option("--x", x_col)->required();
    corr_cmd->add_option("--y", y_col)->required();
    corr_cmd->add_flag("--exact", exact, "Exact permutation p-value (n <= 10)");
    corr_cmd->add_option("--out", out_path, "JSON; default: stdout");

    // report
    auto* report_cmd = app.add_subcommand("report", "Render series CSV/JSON files as one SVG chart");
    std::vector<std::string> series_paths;
    std::vector<std::string> labels;
    std::string title = "daily series";
    report_cmd->add_option("--series", series_paths, "Series CSV or JSON files")->required();
    report_cmd->add_option("--labels", labels, "Legend labels; default: file stems")->delimiter(',');
    report_cmd->add_option("--quantity", quantity, "Quantity of CSV inputs");
    report_cmd->add_option("--title", title);
    report_cmd->add_option("--rolling", rolling);
    report_cmd->add_option("--out", out_path, "SVG; default: stdout");

    // run
    auto* run_cmd = app.add_subcommand("run", "Full pipeline: ingest, store, series, fits, DiD, charts");
    RunConfig run;
    std::string out_dir;
    bool no_svg = false;
    run_cmd->add_option("--input", inputs)->required();
    run_cmd->add_option("--out-dir", out_dir)->required();
    run_cmd->add_option("--config", filter_path);
    run_cmd->add_option("--counting", counting);
    run_cmd->add_option("--store", store_path, "Store path; default: <out-dir>/store.csv");
    run_cmd->add_option("--bootstrap", resamples);
    run_cmd->add_option("--rolling", rolling);
    run_cmd->add_flag("--no-svg", no_svg);
    run_cmd->add_flag("--progress", progress);
    add_common(run_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitFatal;
    }

    try {
        if (*ingest_cmd) {
            ScanOptions options;
            options.filter = filter_from(filter_path);
            options.filter.validate();
            options.counting = CountingPolicy::resolve(counting);
            options.workers = workers;
            options.progress = progress;
            const auto shards = discover_shards(to_paths(inputs));
            if (shards.empty()) {
                throw IoError("no input shards found in " + inputs.front());
            }
            Metadata meta = metadata_for(ingest_cmd, seed);
            const IngestResult result = ingest(shards, options);
            print_tally(result.tally);
            report_failures(result.failed);
            write_store(result.store, out_path, meta);
            emit(summary_path.empty() ? out_path + ".summary.json" : summary_path, ingest_summary_json(result, meta));
            if (result.shards_ok.empty()) {
                std::cerr << "limitlens: error: every shard failed\n";
                return kExitFatal;
            }
            return result.failed.empty() ? kExitOk : kExitPartial;
        }

        if (*hist_query) {
            const HistogramStore store = read_store(store_path);
            const auto selected = langs_or_treated(langs, filter_path);
            const auto devices = parse_devices(device);
            const LengthHistogram h = query(store, range_from(store, from, to), selected, devices);
            std::ostringstream csv;
            write_histogram_csv(h, csv, metadata_for(hist_query, 0));
            emit(out_path, csv.str());
            std::cerr << "tweets: " << h.total() << '\n';
            return kExitOk;
        }

        if (*fit_cmd) {
            const HistogramStore store = read_store(store_path);
            const DayRange range{parse_day(day), parse_day(to.empty() ? day : to)};
            const auto devices = parse_devices(device);
            const LengthHistogram h = query(store, range, langs_or_treated(langs, filter_path), devices);
            if (h.empty()) {
                throw UndefinedValue("no tweets in the selection");
            }
            const int L = limit.value_or(enforced_limit_on(range.first));
            const CramAnalysis a = analyze_histogram(h, L, model);
            FitReport report{a.fit, a.cramming, h.total(), device + " " + format_day(range.first) + ".." +
                                                                 format_day(range.last)};
            emit(out_path, fit_to_json(report, metadata_for(fit_cmd, 0)));
            return kExitOk;
        }

        if (*daily_cmd) {
            const HistogramStore store = read_store(store_path);
            params.quantity = parse_quantity(quantity);
            params.limit = limit;
            params.workers = workers;
            if (!from.empty() || !to.empty()) {
                params.days = range_from(store, from, to);
            }
            const auto devices = parse_devices(device);
            const DailySeries series = daily_series(store, devices, langs_or_treated(langs, filter_path), params);
            const Metadata meta = metadata_for(daily_cmd, seed);
            std::ostringstream csv;
            write_series_csv(csv, series, meta, rolling);
            emit(out_path, csv.str());
            std::optional<BootstrapCI> ci;
            if (!series.points.empty()) {
                const auto values = series.values();
                ci = bootstrap_ci(values, resamples, 0.95, seed);
                std::cerr << quantity << ": mean " << ci->mean << " (95% CI " << ci->lo << ", " << ci->hi << ") over "
                          << values.size() << " days\n";
            }
            if (!json_path.empty()) {
                emit(json_path, series_to_json(series, meta, rolling, ci));
            }
            if (!svg_path.empty()) {
                emit(svg_path, render_svg({{device, series}}, quantity, rolling));
            }
            int failed = 0;
            for (const auto& gap : series.gaps) {
                if (gap.reason != "missing") {
                    std::cerr << "gap " << format_day(gap.day) << ": " << gap.reason << '\n';
                    ++failed;
                }
            }
            return failed == 0 ? kExitOk : kExitPartial;
        }

        if (*sim_cmd) {
            sim.seed = seed;
            const SimResult r = simulate(sim, n, workers);
            HistogramStore store(sim.max_len());
            store.add({parse_day(sim_day), "sim", DeviceClass::web}, r.histogram);
            const Metadata meta = metadata_for(sim_cmd, seed);
            write_store(store, out_path, meta);
            nlohmann::json j;
            j["meta"] = {{"tool", meta.tool}, {"version", meta.version}, {"seed", meta.seed},
                         {"config", meta.config_hash}};
            j["n_drawn"] = r.n_drawn;
            j["n_emitted"] = r.n_emitted;
            j["n_abandoned"] = r.n_abandoned;
            j["n_edited_emitted"] = r.n_edited_emitted;
            j["edited_fraction"] = r.edited_fraction();
            j["true_runover"] = r.true_runover;
            const std::string text = j.dump(2) + "\n";
            if (summary_path.empty()) {
                std::cerr << text;
            } else {
                emit(summary_path, text);
            }
            return kExitOk;
        }

        if (*solve_cmd) {
            FitResult fit;
            if (!fit_path.empty()) {
                std::ifstream in(fit_path);
                if (!in) {
                    throw IoError("cannot read " + fit_path);
                }
                std::stringstream buf;
                buf << in.rdbuf();
                fit = fit_from_json(buf.str()).fit;
            } else if (mu && sigma) {
                fit.mu = *mu;
                fit.sigma = *sigma;
            } else {
                throw ConfigError("solve-limit needs --fit or both --mu and --sigma");
            }
            const double c = solve_limit(fit, target);
            std::cerr << "c* = " << c << '\n';
            std::cout << static_cast<long long>(std::ceil(c)) << '\n';
            return kExitOk;
        }

        if (*did_cmd) {
            const HistogramStore store = read_store(store_path);
            const FilterConfig filter = filter_from(filter_path);
            DidDesign design;
            design.treated.assign(filter.treated.begin(), filter.treated.end());
            design.control.assign(filter.control.begin(), filter.control.end());
            design.pre = {parse_day(pre_from), parse_day(pre_to)};
            design.post = {parse_day(post_from), parse_day(post_to)};
            design.devices = parse_devices(device);
            const DiDResult r = did_estimate(build_did_panel(store, design));
            std::cerr << "delta = " << r.delta << ", effect = " << 100.0 * r.effect << "%\n";
            emit(out_path, did_to_json(r, metadata_for(did_cmd, 0)));
            return kExitOk;
        }

        if (*threads_cmd) {
            ScanOptions options;
            options.filter = filter_from(filter_path);
            options.counting = CountingPolicy::resolve(counting);
            options.workers = workers;
            const auto shards = discover_shards(to_paths(inputs));
            PeriodThreads zero;
            zero.k_max = k_max;
            const Day switch_day{kSwitchDate};
            auto result = scan_archives(shards, options, zero, [switch_day](PeriodThreads& acc, const KeptTweet& t) {
                (t.record.day() < switch_day ? acc.pre : acc.post).add(t.text, acc.k_max);
            });
            print_tally(result.tally);
            report_failures(result.failed);
            emit(out_path, threads_to_json(estimate_threads(result.acc.pre, epsilon, k_max),
                                           estimate_threads(result.acc.post, epsilon, k_max),
                                           metadata_for(threads_cmd, seed)));
            return result.failed.empty() ? kExitOk : kExitPartial;
        }

        if (*curves_cmd) {
            const Lexicon lexicon = Lexicon::load(lexicon_path);
            ScanOptions options;
            options.filter = filter_from(filter_path);
            options.counting = CountingPolicy::resolve(counting);
            options.max_len = max_len;
            options.workers = workers;
            const auto shards = discover_shards(to_paths(inputs));
            auto result = scan_archives(shards, options, CurveCounts(lexicon.size(), max_len),
                                        [&lexicon](CurveCounts& acc, const KeptTweet& t) {
                                            acc.add(t.length, lexicon.categories_in(t.text));
                                        });
            print_tally(result.tally);
            report_failures(result.failed);
            std::ostringstream csv;
            write_curves_csv(csv, category_curves(result.acc, lexicon), metadata_for(curves_cmd, seed));
            emit(out_path, csv.str());
            return result.failed.empty() ? kExitOk : kExitPartial;
        }

        if (*corr_cmd) {
            std::ifstream in(table_path);
            if (!in) {
                throw IoError("cannot read " + table_path);
            }
            std::string line;
            std::vector<std::string> header;
            while (std::getline(in, line) && (line.empty() || line.front() == '#')) {
            }
            header = split_csv(line);
            const auto col = [&](const std::string& name) {
                const auto it = std::find(header.begin(), header.end(), name);
                if (it == header.end()) {
                    throw ConfigError("column '" + name + "' not in " + table_path);
                }
                return static_cast<std::size_t>(it - header.begin());
            };
            const std::size_t xi = col(x_col);
            const std::size_t yi = col(y_col);
            std::vector<double> xs;
            std::vector<double> ys;
            while (std::getline(in, line)) {
                if (line.empty() || line.front() == '#') {
                    continue;
                }
                const auto cells = split_csv(line);
                if (cells.size() <= std::max(xi, yi) || cells[xi].empty() || cells[yi].empty()) {
                    continue;
                }
                xs.push_back(std::stod(cells[xi]));
                ys.push_back(std::stod(cells[yi]));
            }
            const SpearmanResult r = spearman(xs, ys, exact);
            std::cerr << "rho = " << r.rho << ", p = " << r.p_value << " (n = " << xs.size() << ")\n";
            emit(out_path, spearman_to_json(r, xs.size(), metadata_for(corr_cmd, 0)));
            return kExitOk;
        }

        if (*report_cmd) {
            std::vector<ChartSeries> charts;
            for (std::size_t i = 0; i < series_paths.size(); ++i) {
                const fs::path p(series_paths[i]);
                std::ifstream in(p);
                if (!in) {
                    throw IoError("cannot read " + p.string());
                }
                std::stringstream buf;
                buf << in.rdbuf();
                DailySeries s = p.extension() == ".json" ? series_from_json(buf.str())
                                                         : read_series_csv(buf, parse_quantity(quantity));
                charts.push_back({i < labels.size() ? labels[i] : p.stem().string(), std::move(s)});
            }
            emit(out_path, render_svg(charts, title, rolling));
            return kExitOk;
        }

        if (*run_cmd) {
            run.inputs = to_paths(inputs);
            run.counting = counting;
            if (!filter_path.empty()) {
                run.filter_path = filter_path;
            }
            if (!store_path.empty()) {
                run.store_path = store_path;
            }
            run.out_dir = out_dir;
            run.seed = seed;
            run.workers = workers;
            run.bootstrap_resamples = resamples;
            run.rolling_window = rolling;
            run.svg = !no_svg;
            run.progress = progress;
            const RunOutcome outcome = run_pipeline(run);
            for (const auto& a : outcome.artifacts) {
                std::cerr << "wrote " << (fs::path(out_dir) / a).string() << '\n';
            }
            if (!outcome.message.empty()) {
                std::cerr << "limitlens: " << (outcome.exit_code == kExitFatal ? "error: " : "") << outcome.message
                          << '\n';
            }
            return outcome.exit_code;
        }
    } catch (const std::exception& e) {
        std::cerr << "limitlens: error: " << e.what() << '\n';
        return kExitFatal;
    }
    return kExitOk;
}
