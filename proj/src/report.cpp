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

#include "limitlens/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "limitlens/error.hpp"

namespace limitlens {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json meta_json(const Metadata& meta) {
    return {{"tool", meta.tool}, {"version", meta.version}, {"seed", meta.seed}, {"config", meta.config_hash}};
}

// NaN/inf are not JSON numbers.
json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

void write_series_csv(std::ostream& out, const DailySeries& series, const Metadata& meta, int rolling_window) {
    write_preamble(out, meta);
    out << "# quantity=" << to_string(series.quantity) << '\n';
    out << "day,value,rolling_mean\n";
    const DailySeries rolled = rolling_mean(series, rolling_window);
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        out << format_day(series.points[i].day) << ',' << num(series.points[i].value) << ','
            << num(rolled.points[i].value) << '\n';
    }
}

DailySeries read_series_csv(std::istream& in, Quantity quantity) {
    DailySeries s;
    s.quantity = quantity;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        const auto c1 = line.find(',');
        if (c1 == std::string::npos) {
            throw IoError("series CSV: malformed row '" + line + "'");
        }
        const auto c2 = line.find(',', c1 + 1);
        const std::string value = line.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1);
        s.points.push_back({parse_day(std::string_view(line).substr(0, c1)), std::stod(value)});
    }
    return s;
}

std::string series_to_json(const DailySeries& series, const Metadata& meta, int rolling_window,
                           const std::optional<BootstrapCI>& ci) {
    const DailySeries rolled = rolling_mean(series, rolling_window);
    json points = json::array();
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        points.push_back({{"day", format_day(series.points[i].day)},
                          {"value", series.points[i].value},
                          {"rolling_mean", rolled.points[i].value}});
    }
    json gaps = json::array();
    for (const auto& g : series.gaps) {
        gaps.push_back({{"day", format_day(g.day)}, {"reason", g.reason}});
    }
    json j;
    j["meta"] = meta_json(meta);
    j["quantity"] = std::string(to_string(series.quantity));
    j["rolling_window"] = rolling_window;
    j["points"] = points;
    j["gaps"] = gaps;
    if (ci) {
        j["summary"] = {{"mean", ci->mean}, {"ci95_lo", ci->lo}, {"ci95_hi", ci->hi}};
    }
    return j.dump(2) + "\n";
}

DailySeries series_from_json(std::string_view text) {
    const json j = json::parse(text.begin(), text.end(), nullptr, false);
    if (j.is_discarded()) {
        throw IoError("series JSON does not parse");
    }
    DailySeries s;
    try {
        s.quantity = parse_quantity(j.at("quantity").get<std::string>());
        for (const auto& p : j.at("points")) {
            s.points.push_back({parse_day(p.at("day").get<std::string>()), p.at("value").get<double>()});
        }
        for (const auto& g : j.at("gaps")) {
            s.gaps.push_back({parse_day(g.at("day").get<std::string>()), g.at("reason").get<std::string>()});
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("series JSON: ") + e.what());
    }
    return s;
}

std::string fit_to_json(const FitReport& report, const Metadata& meta) {
    const FitResult& f = report.fit;
    json j;
    j["meta"] = meta_json(meta);
    j["cohort"] = report.label;
    j["tweets"] = report.tweets;
    j["mu"] = f.mu;
    j["sigma"] = f.sigma;
    j["amplitude"] = f.amplitude;
    j["threshold"] = f.threshold;
    j["fit_range"] = {f.fit_lo, f.fit_hi};
    j["sse"] = f.sse;
    j["limit"] = f.limit;
    j["iterations"] = f.iterations;
    j["cramming"] = report.cramming;
    j["runover_at_limit"] = runover(f, f.limit);
    return j.dump(2) + "\n";
}

FitReport fit_from_json(std::string_view text) {
    const json j = json::parse(text.begin(), text.end(), nullptr, false);
    if (j.is_discarded()) {
        throw IoError("fit JSON does not parse");
    }
    FitReport r;
    try {
        r.fit.mu = j.at("mu").get<double>();
        r.fit.sigma = j.at("sigma").get<double>();
        r.fit.amplitude = j.value("amplitude", 1.0);
        r.fit.threshold = j.value("threshold", 0);
        if (j.contains("fit_range")) {
            r.fit.fit_lo = j["fit_range"].at(0).get<int>();
            r.fit.fit_hi = j["fit_range"].at(1).get<int>();
        }
        r.fit.sse = j.value("sse", 0.0);
        r.fit.limit = j.value("limit", 0);
        r.fit.iterations = j.value("iterations", 0);
        r.cramming = j.value("cramming", 0.0);
        r.tweets = j.value("tweets", std::int64_t{0});
        r.label = j.value("cohort", std::string{});
    } catch (const json::exception& e) {
        throw IoError(std::string("fit JSON: ") + e.what());
    }
    if (!(r.fit.sigma > 0.0)) {
        throw IoError("fit JSON: sigma must be positive");
    }
    return r;
}

std::string did_to_json(const DiDResult& r, const Metadata& meta) {
    json j;
    j["meta"] = meta_json(meta);
    j["n"] = r.n;
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
    j["gamma"] = r.gamma;
    j["delta"] = r.delta;
    j["delta_se"] = number_or_null(r.delta_se);
    j["effect"] = r.effect;
    j["ci95"] = {number_or_null(r.ci95_lo), number_or_null(r.ci95_hi)};
    return j.dump(2) + "\n";
}

namespace {

json thread_json(const ThreadEstimate& e) {
    json rows = json::array();
    for (const auto& [k, n] : e.n) {
        rows.push_back({{"k", k}, {"n", n}, {"m", e.m.at(k)}, {"share", e.distribution.at(k)}});
    }
    return {{"epsilon", e.epsilon}, {"threads", rows}};
}

}  // namespace

std::string threads_to_json(const ThreadEstimate& pre, const ThreadEstimate& post, const Metadata& meta) {
    json j;
    j["meta"] = meta_json(meta);
    j["pre"] = thread_json(pre);
    j["post"] = thread_json(post);
    return j.dump(2) + "\n";
}

std::string spearman_to_json(const SpearmanResult& r, std::size_t n, const Metadata& meta) {
    json j;
    j["meta"] = meta_json(meta);
    j["n"] = n;
    j["rho"] = r.rho;
    j["p_value"] = r.p_value;
    j["p_method"] = r.exact ? "exact_permutation" : "t_approximation";
    return j.dump(2) + "\n";
}

void write_curves_csv(std::ostream& out, const std::vector<CategoryCurve>& curves, const Metadata& meta) {
    write_preamble(out, meta);
    out << "length";
    for (const auto& c : curves) {
        out << ',' << c.name << "_freq," << c.name << "_enrichment";
    }
    out << '\n';
    const std::size_t rows = curves.empty() ? 0 : curves.front().freq.size();
    for (std::size_t l = 1; l < rows; ++l) {
        out << l;
        for (const auto& c : curves) {
            out << ',' << (c.freq[l] ? num(*c.freq[l]) : std::string{}) << ','
                << (c.enrichment[l] ? num(*c.enrichment[l]) : std::string{});
        }
        out << '\n';
    }
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string num_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<ChartSeries>& charts, std::string_view title, int rolling_window) {
    constexpr double width = 960;
    constexpr double height = 400;
    constexpr double left = 70;
    constexpr double right = 150;
    constexpr double top = 40;
    constexpr double bottom = 50;
    static constexpr const char* palette[] = {"#d95f02", "#7570b3", "#1b9e77", "#e7298a", "#66a61e", "#e6ab02"};

    std::optional<Day> first;
    std::optional<Day> last;
    double y_max = 0.0;
    auto extend = [&](Day d) {
        first = first ? std::min(*first, d) : d;
        last = last ? std::max(*last, d) : d;
    };
    for (const auto& c : charts) {
        for (const auto& p : c.series.points) {
            extend(p.day);
            if (std::isfinite(p.value)) {
                y_max = std::max(y_max, p.value);
            }
        }
        for (const auto& g : c.series.gaps) {
            extend(g.day);
        }
    }
    if (y_max <= 0.0) {
        y_max = 1.0;
    }
    y_max *= 1.05;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << left << "\" y=\"22\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
    if (!first) {
        svg << "<text x=\"" << left << "\" y=\"" << height / 2 << "\">no data</text>\n</svg>\n";
        return svg.str();
    }
    const double span_days = std::max<double>(1.0, static_cast<double>((*last - *first).count()));
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const double day_w = plot_w / (span_days + 1);
    auto x_of = [&](Day d) { return left + (static_cast<double>((d - *first).count()) + 0.5) * day_w; };
    auto y_of = [&](double v) { return top + plot_h * (1.0 - v / y_max); };

    // Gap bands first so data draws on top.
    for (const auto& c : charts) {
        for (const auto& g : c.series.gaps) {
            svg << "<rect x=\"" << fixed(x_of(g.day) - day_w / 2) << "\" y=\"" << top << "\" width=\""
                << fixed(day_w) << "\" height=\"" << plot_h << "\" fill=\"#dddddd\"><title>"
                << format_day(g.day) << ": " << xml_escape(g.reason) << "</title></rect>\n";
        }
    }
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = y_max * tick / 4.0;
        svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y_of(v) + 4) << "\" text-anchor=\"end\">"
            << num_tick(v) << "</text>\n";
    }
    svg << "<text x=\"" << left << "\" y=\"" << height - 15 << "\">" << format_day(*first) << "</text>\n";
    svg << "<text x=\"" << left + plot_w << "\" y=\"" << height - 15 << "\" text-anchor=\"end\">"
        << format_day(*last) << "</text>\n";

    for (std::size_t i = 0; i < charts.size(); ++i) {
        const auto& c = charts[i];
        const char* color = palette[i % std::size(palette)];
        for (const auto& p : c.series.points) {
            svg << "<circle cx=\"" << fixed(x_of(p.day)) << "\" cy=\"" << fixed(y_of(p.value))
                << "\" r=\"2\" fill=\"none\" stroke=\"" << color << "\"/>\n";
        }
        const DailySeries rolled = rolling_mean(c.series, rolling_window);
        if (!rolled.points.empty()) {
            svg << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << color << "\" points=\"";
            for (const auto& p : rolled.points) {
                svg << fixed(x_of(p.day)) << ',' << fixed(y_of(p.value)) << ' ';
            }
            svg << "\"/>\n";
        }
        const double ly = top + 14.0 * static_cast<double>(i);
        svg << "<rect x=\"" << left + plot_w + 12 << "\" y=\"" << ly << "\" width=\"10\" height=\"10\" fill=\""
            << color << "\"/>\n";
        svg << "<text x=\"" << left + plot_w + 26 << "\" y=\"" << ly + 9 << "\">" << xml_escape(c.label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace limitlens
