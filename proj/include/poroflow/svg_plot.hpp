#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "poroflow/bench.hpp"
#include "poroflow/errors.hpp"

namespace poroflow {

// Metric-vs-SNR curves rendered as plain SVG text: one polyline per
// method, one marker group (circle + std whisker) per plotted point, a
// legend, and axis labels. All coordinates are written with fixed
// precision so identical inputs give byte-identical files.

inline std::vector<BenchRow> parse_bench_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open rows CSV '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw FormatError("rows CSV is empty", 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != detail::kRowsCsvHeader)
        throw FormatError("rows CSV header does not match the bench format", 0);

    std::vector<BenchRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream split(line);
        while (std::getline(split, field, ',')) fields.push_back(field);
        if (fields.size() != 11)
            throw FormatError("rows CSV line " + std::to_string(line_no) +
                                  ": expected 11 fields, got " +
                                  std::to_string(fields.size()),
                              line_no);
        try {
            BenchRow r;
            r.method = fields[0];
            r.snr_db = std::stod(fields[1]);
            r.am_sigma = std::stod(fields[2]);
            r.seed = std::stoull(fields[3]);
            r.t = std::stod(fields[4]);
            r.quantity = fields[5];
            r.cnre = std::stod(fields[6]);
            r.pre_percent = std::stod(fields[7]);
            r.excluded_pixels = std::stoull(fields[8]);
            r.status = fields[9];
            r.wall_time_s = std::stod(fields[10]);
            rows.push_back(std::move(r));
        } catch (const std::exception&) {
            throw FormatError("rows CSV line " + std::to_string(line_no) +
                                  ": unparseable numeric field",
                              line_no);
        }
    }
    return rows;
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct PlotPoint {
    double snr = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;
};

struct PlotSeries {
    std::string method;
    std::vector<PlotPoint> points;  // sorted by snr
};

}  // namespace detail

/// Aggregate rows into per-method mean/std curves of `metric`
/// ("cnre" or "pre_percent") over snr_db, restricted to `quantity` and
/// status == "ok"; non-finite metric values are dropped.
inline std::vector<detail::PlotSeries> aggregate_plot_series(
    const std::vector<BenchRow>& rows, const std::string& quantity,
    const std::string& metric) {
    if (metric != "cnre" && metric != "pre_percent")
        throw ConfigError("unknown metric '" + metric +
                          "' (valid: cnre, pre_percent)");
    std::vector<std::string> method_order;
    std::map<std::string, std::map<double, std::vector<double>>> grouped;
    for (const BenchRow& r : rows) {
        if (r.quantity != quantity || r.status != "ok") continue;
        const double v = metric == "cnre" ? r.cnre : r.pre_percent;
        if (!std::isfinite(v)) continue;
        if (grouped.find(r.method) == grouped.end()) method_order.push_back(r.method);
        grouped[r.method][r.snr_db].push_back(v);
    }
    if (grouped.empty())
        throw DomainError("no rows match quantity='" + quantity + "', metric='" +
                          metric + "', status='ok'");
    std::vector<detail::PlotSeries> series;
    for (const std::string& method : method_order) {
        detail::PlotSeries s;
        s.method = method;
        for (const auto& [snr, values] : grouped[method]) {
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            double var = 0.0;
            for (double v : values) var += (v - mean) * (v - mean);
            var /= static_cast<double>(values.size());
            s.points.push_back({snr, mean, std::sqrt(var)});
        }
        series.push_back(std::move(s));
    }
    return series;
}

inline std::string render_plot(const std::vector<BenchRow>& rows,
                               const std::string& quantity,
                               const std::string& metric) {
    const std::vector<detail::PlotSeries> series =
        aggregate_plot_series(rows, quantity, metric);

    constexpr double width = 720.0, height = 440.0;
    constexpr double left = 80.0, right = 560.0, top = 50.0, bottom = 390.0;

    double x_lo = series[0].points.front().snr, x_hi = x_lo;
    double y_lo = series[0].points.front().mean, y_hi = y_lo;
    for (const auto& s : series)
        for (const auto& p : s.points) {
            x_lo = std::min(x_lo, p.snr);
            x_hi = std::max(x_hi, p.snr);
            y_lo = std::min(y_lo, p.mean - p.std_dev);
            y_hi = std::max(y_hi, p.mean + p.std_dev);
        }
    if (x_hi == x_lo) {
        x_lo -= 1.0;
        x_hi += 1.0;
    }
    const double y_pad = (y_hi - y_lo) * 0.05 + 1e-9;
    y_lo -= y_pad;
    y_hi += y_pad;

    const auto x_pix = [&](double v) {
        return left + (v - x_lo) / (x_hi - x_lo) * (right - left);
    };
    const auto y_pix = [&](double v) {
        return bottom - (v - y_lo) / (y_hi - y_lo) * (bottom - top);
    };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                     "#9467bd", "#ff7f0e", "#8c564b"};
    constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
        << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";

    const std::string title =
        detail::xml_escape(metric) + " vs snr_db (" + detail::xml_escape(quantity) + ")";
    svg << "<text x=\"" << detail::svg_num((left + right) / 2.0)
        << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << title << "</text>\n";

    // Axes.
    svg << "<line x1=\"" << detail::svg_num(left) << "\" y1=\""
        << detail::svg_num(bottom) << "\" x2=\"" << detail::svg_num(right)
        << "\" y2=\"" << detail::svg_num(bottom) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << detail::svg_num(left) << "\" y1=\"" << detail::svg_num(top)
        << "\" x2=\"" << detail::svg_num(left) << "\" y2=\"" << detail::svg_num(bottom)
        << "\" stroke=\"black\"/>\n";

    // X ticks at each distinct snr.
    std::vector<double> snrs;
    for (const auto& s : series)
        for (const auto& p : s.points) snrs.push_back(p.snr);
    std::sort(snrs.begin(), snrs.end());
    snrs.erase(std::unique(snrs.begin(), snrs.end()), snrs.end());
    for (double v : snrs) {
        const double x = x_pix(v);
        svg << "<line x1=\"" << detail::svg_num(x) << "\" y1=\""
            << detail::svg_num(bottom) << "\" x2=\"" << detail::svg_num(x)
            << "\" y2=\"" << detail::svg_num(bottom + 5.0) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << detail::svg_num(x) << "\" y=\""
            << detail::svg_num(bottom + 20.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::fmt_double(v, "%.4g") << "</text>\n";
    }
    svg << "<text x=\"" << detail::svg_num((left + right) / 2.0) << "\" y=\""
        << detail::svg_num(bottom + 40.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
           "snr_db</text>\n";

    // Y ticks, 5 evenly spaced.
    for (int k = 0; k <= 4; ++k) {
        const double v = y_lo + (y_hi - y_lo) * k / 4.0;
        const double y = y_pix(v);
        svg << "<line x1=\"" << detail::svg_num(left - 5.0) << "\" y1=\""
            << detail::svg_num(y) << "\" x2=\"" << detail::svg_num(left) << "\" y2=\""
            << detail::svg_num(y) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << detail::svg_num(left - 9.0) << "\" y=\""
            << detail::svg_num(y + 4.0)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::fmt_double(v, "%.4g") << "</text>\n";
    }
    svg << "<text x=\"18\" y=\"" << detail::svg_num((top + bottom) / 2.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << detail::svg_num((top + bottom) / 2.0) << ")\">" << detail::xml_escape(metric)
        << "</text>\n";

    // Series: polyline per method, then marker groups per point.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        svg << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\" points=\"";
        for (std::size_t pi = 0; pi < s.points.size(); ++pi) {
            if (pi) svg << ' ';
            svg << detail::svg_num(x_pix(s.points[pi].snr)) << ','
                << detail::svg_num(y_pix(s.points[pi].mean));
        }
        svg << "\"/>\n";
        for (const auto& p : s.points) {
            const double x = x_pix(p.snr);
            svg << "<g class=\"marker\">";
            svg << "<line x1=\"" << detail::svg_num(x) << "\" y1=\""
                << detail::svg_num(y_pix(p.mean - p.std_dev)) << "\" x2=\""
                << detail::svg_num(x) << "\" y2=\""
                << detail::svg_num(y_pix(p.mean + p.std_dev)) << "\" stroke=\"" << color
                << "\"/>";
            svg << "<circle cx=\"" << detail::svg_num(x) << "\" cy=\""
                << detail::svg_num(y_pix(p.mean)) << "\" r=\"3.5\" fill=\"" << color
                << "\"/>";
            svg << "</g>\n";
        }
    }

    // Legend.
    svg << "<g class=\"legend\">\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % kPaletteSize];
        const double y = top + 10.0 + 22.0 * static_cast<double>(si);
        svg << "<line x1=\"" << detail::svg_num(right + 20.0) << "\" y1=\""
            << detail::svg_num(y) << "\" x2=\"" << detail::svg_num(right + 50.0)
            << "\" y2=\"" << detail::svg_num(y) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << detail::svg_num(right + 56.0) << "\" y=\""
            << detail::svg_num(y + 4.0)
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::xml_escape(series[si].method) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "</svg>\n";
    return svg.str();
}

inline void plot_curves(const std::string& rows_csv_path, const std::string& quantity,
                        const std::string& metric, const std::string& out_path) {
    const std::vector<BenchRow> rows = parse_bench_csv(rows_csv_path);
    const std::string svg = render_plot(rows, quantity, metric);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write SVG '" + out_path + "'");
    out << svg;
}

}  // namespace poroflow
