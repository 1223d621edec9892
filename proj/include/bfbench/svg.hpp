// Copyright 2026 The bfbench Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bfbench/errors.hpp"
#include "bfbench/format.hpp"
#include "bfbench/metrics.hpp"

namespace bfbench::svg {

// Minimal SVG emitter. Output depends only on the inputs: fixed canvas,
// fixed palette, coordinates printed with two decimals.

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    double width = 640;
    double height = 420;
};

struct HistogramSeries {
    std::string label;
    std::vector<HistogramBin> bins;
};

struct ScatterSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

inline constexpr std::array<const char*, 8> kPalette = {
        "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

namespace detail {

inline std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string tick_label(double v) {
    char buf[32];
    if (v != 0.0 && (std::abs(v) < 1e-3 || std::abs(v) >= 1e5)) {
        std::snprintf(buf, sizeof buf, "%.2g", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.3g", v);
    }
    return buf;
}

/// Plot frame: maps data coordinates into the inner rectangle.
struct Frame {
    double left = 70, right = 150, top = 40, bottom = 55;
    double width, height;
    double x0, x1, y0, y1;

    double px(double x) const {
        return left + (x - x0) / (x1 - x0) * (width - left - right);
    }
    double py(double y) const {
        return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom);
    }
};

inline std::string f(double v) { return format_fixed(v, 2); }

inline void open(std::ostringstream& out, const PlotOptions& opt) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(opt.width)
        << "\" height=\"" << f(opt.height) << "\" viewBox=\"0 0 " << f(opt.width) << ' '
        << f(opt.height) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << f(opt.width) << "\" height=\"" << f(opt.height)
        << "\" fill=\"white\"/>\n";
}

inline void axes(std::ostringstream& out, const Frame& fr, const PlotOptions& opt) {
    const double xa = fr.left, xb = fr.width - fr.right;
    const double ya = fr.height - fr.bottom, yb = fr.top;
    out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    out << "<line x1=\"" << f(xa) << "\" y1=\"" << f(ya) << "\" x2=\"" << f(xb) << "\" y2=\""
        << f(ya) << "\"/>\n";
    out << "<line x1=\"" << f(xa) << "\" y1=\"" << f(ya) << "\" x2=\"" << f(xa) << "\" y2=\""
        << f(yb) << "\"/>\n";
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double xv = fr.x0 + (fr.x1 - fr.x0) * i / ticks;
        const double yv = fr.y0 + (fr.y1 - fr.y0) * i / ticks;
        out << "<line x1=\"" << f(fr.px(xv)) << "\" y1=\"" << f(ya) << "\" x2=\""
            << f(fr.px(xv)) << "\" y2=\"" << f(ya + 4) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << f(fr.px(xv)) << "\" y=\"" << f(ya + 16)
            << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        out << "<line x1=\"" << f(xa - 4) << "\" y1=\"" << f(fr.py(yv)) << "\" x2=\"" << f(xa)
            << "\" y2=\"" << f(fr.py(yv)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << f(xa - 7) << "\" y=\"" << f(fr.py(yv) + 4)
            << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
    }
    if (!opt.x_label.empty()) {
        out << "<text x=\"" << f((xa + xb) / 2) << "\" y=\"" << f(fr.height - 12)
            << "\" text-anchor=\"middle\">" << escape(opt.x_label) << "</text>\n";
    }
    if (!opt.y_label.empty()) {
        out << "<text x=\"16\" y=\"" << f((ya + yb) / 2) << "\" text-anchor=\"middle\" "
            << "transform=\"rotate(-90 16 " << f((ya + yb) / 2) << ")\">"
            << escape(opt.y_label) << "</text>\n";
    }
    if (!opt.title.empty()) {
        out << "<text x=\"" << f((xa + xb) / 2) << "\" y=\"22\" text-anchor=\"middle\" "
            << "font-size=\"14\">" << escape(opt.title) << "</text>\n";
    }
    out << "</g>\n";
}

inline void legend(std::ostringstream& out, const Frame& fr,
                   const std::vector<std::string>& labels) {
    const double x = fr.width - fr.right + 12;
    out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double y = fr.top + 18.0 * static_cast<double>(i);
        out << "<rect x=\"" << f(x) << "\" y=\"" << f(y) << "\" width=\"12\" height=\"12\" fill=\""
            << kPalette[i % kPalette.size()] << "\"/>\n";
        out << "<text x=\"" << f(x + 18) << "\" y=\"" << f(y + 10) << "\">" << escape(labels[i])
            << "</text>\n";
    }
    out << "</g>\n";
}

}  // namespace detail

/// Overlaid histograms, each normalized to fractions of its own reads.
inline std::string render_histograms(const std::vector<HistogramSeries>& series,
                                     const PlotOptions& opt = {}) {
    if (series.empty()) throw ValidationError("nothing to plot");
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0, y1 = 0;
    for (const auto& s : series) {
        if (s.bins.empty()) throw ValidationError("histogram '" + s.label + "' has no bins");
        std::size_t total = 0;
        for (const auto& b : s.bins) total += b.count;
        for (const auto& b : s.bins) {
            x0 = std::min(x0, b.low);
            x1 = std::max(x1, b.high);
            if (total) y1 = std::max(y1, static_cast<double>(b.count) / total);
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > 0)) y1 = 1;

    detail::Frame fr{.width = opt.width, .height = opt.height, .x0 = x0, .x1 = x1, .y0 = 0,
                     .y1 = y1 * 1.05};
    std::ostringstream out;
    detail::open(out, opt);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        labels.push_back(s.label);
        std::size_t total = 0;
        for (const auto& b : s.bins) total += b.count;
        const char* color = kPalette[i % kPalette.size()];
        out << "<g class=\"series\" fill=\"" << color << "\" fill-opacity=\"0.35\" stroke=\""
            << color << "\" stroke-width=\"1\">\n";
        for (const auto& b : s.bins) {
            const double frac = total ? static_cast<double>(b.count) / total : 0.0;
            const double xa = fr.px(b.low), xb = fr.px(b.high);
            const double ya = fr.py(frac), yb = fr.py(0);
            out << "<rect x=\"" << detail::f(xa) << "\" y=\"" << detail::f(ya) << "\" width=\""
                << detail::f(xb - xa) << "\" height=\"" << detail::f(yb - ya) << "\"/>\n";
        }
        out << "</g>\n";
    }
    detail::axes(out, fr, opt);
    detail::legend(out, fr, labels);
    out << "</svg>\n";
    return out.str();
}

/// Scatter with points joined in x order per series.
inline std::string render_scatter(const std::vector<ScatterSeries>& series,
                                  const PlotOptions& opt = {}) {
    if (series.empty()) throw ValidationError("nothing to plot");
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!std::isfinite(x0)) throw ValidationError("scatter series have no points");
    if (!(x1 > x0)) {
        x0 -= 1;
        x1 += 1;
    }
    y0 = std::min(y0, 0.0);
    if (!(y1 > y0)) y1 = y0 + 1;

    detail::Frame fr{.width = opt.width, .height = opt.height, .x0 = x0, .x1 = x1, .y0 = y0,
                     .y1 = y1 * 1.05};
    std::ostringstream out;
    detail::open(out, opt);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < series.size(); ++i) {
        auto pts = series[i].points;
        std::sort(pts.begin(), pts.end());
        labels.push_back(series[i].label);
        const char* color = kPalette[i % kPalette.size()];
        out << "<g class=\"series\" fill=\"" << color << "\" stroke=\"" << color << "\">\n";
        if (pts.size() > 1) {
            out << "<polyline fill=\"none\" stroke-width=\"1.5\" points=\"";
            for (std::size_t k = 0; k < pts.size(); ++k) {
                out << (k ? " " : "") << detail::f(fr.px(pts[k].first)) << ','
                    << detail::f(fr.py(pts[k].second));
            }
            out << "\"/>\n";
        }
        for (auto [x, y] : pts) {
            out << "<circle cx=\"" << detail::f(fr.px(x)) << "\" cy=\"" << detail::f(fr.py(y))
                << "\" r=\"3.5\"/>\n";
        }
        out << "</g>\n";
    }
    detail::axes(out, fr, opt);
    detail::legend(out, fr, labels);
    out << "</svg>\n";
    return out.str();
}

}  // namespace bfbench::svg
