// Copyright 2026 The gpedd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file io.hpp
 * Trace CSV files and static log-scale SVG plots.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "trace.hpp"

namespace gpedd {

/// Failure to read or write an output file.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kTraceHeader =
    "step,sweep,subdomain,energy,energy_error,l2_error,rel_energy_change,grad_norm,wall_time_s";

/// Shortest-safe decimal rendering with 17 significant digits.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string trace_to_csv(const TrainingTrace &trace) {
    std::string out(kTraceHeader);
    out += '\n';
    for (const auto &r : trace) {
        out += std::to_string(r.step) + ',' + std::to_string(r.sweep) + ',' +
               std::to_string(r.subdomain) + ',' + format_double(r.energy) + ',' +
               format_double(r.energy_error) + ',' + format_double(r.l2_error) + ',' +
               format_double(r.rel_energy_change) + ',' + format_double(r.grad_norm) + ',' +
               format_double(r.wall_time_s) + '\n';
    }
    return out;
}

inline void write_text_file(const std::filesystem::path &path, std::string_view text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) {
        throw IoError("failed writing " + path.string());
    }
}

inline std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void emit_trace(const TrainingTrace &trace, const std::filesystem::path &path) {
    if (trace.empty()) {
        throw IoError("refusing to write an empty trace to " + path.string());
    }
    write_text_file(path, trace_to_csv(trace));
}

inline TrainingTrace parse_trace_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader) {
        throw IoError("trace CSV header mismatch");
    }
    TrainingTrace trace;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 9) {
            throw IoError("trace CSV row has " + std::to_string(cells.size()) + " fields");
        }
        TraceRow r;
        r.step = std::stol(cells[0]);
        r.sweep = std::stoi(cells[1]);
        r.subdomain = std::stoi(cells[2]);
        auto num = [](const std::string &s) { return std::strtod(s.c_str(), nullptr); };
        r.energy = num(cells[3]);
        r.energy_error = num(cells[4]);
        r.l2_error = num(cells[5]);
        r.rel_energy_change = num(cells[6]);
        r.grad_norm = num(cells[7]);
        r.wall_time_s = num(cells[8]);
        trace.push_back(r);
    }
    return trace;
}

inline TrainingTrace parse_trace(const std::filesystem::path &path) {
    return parse_trace_csv(read_text_file(path));
}

// ---------------------------------------------------------------------------
// SVG plots

enum class PlotKind { energy_error, l2_error, rel_change };

inline std::string to_string(PlotKind k) {
    switch (k) {
    case PlotKind::energy_error:
        return "energy_error";
    case PlotKind::l2_error:
        return "l2_error";
    case PlotKind::rel_change:
        return "rel_change";
    }
    return "unknown";
}

inline double plot_value(const TraceRow &r, PlotKind k) {
    switch (k) {
    case PlotKind::energy_error:
        return r.energy_error;
    case PlotKind::l2_error:
        return r.l2_error;
    case PlotKind::rel_change:
        return r.rel_energy_change;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

struct PlotSeries {
    std::string label;
    const TrainingTrace *trace = nullptr;
};

/// Canvas geometry; the plot box is [left, left+width] x [top, top+height].
struct PlotFrame {
    double canvas_width = 860.0;
    double canvas_height = 520.0;
    double left = 90.0;
    double top = 30.0;
    double width = 560.0;
    double height = 420.0;
    double x_min = 0.0;
    double x_max = 1.0;
    int log_y_min = -1; ///< decade at the bottom edge
    int log_y_max = 0;  ///< decade at the top edge

    [[nodiscard]] double px(double x) const {
        return left + (x - x_min) / (x_max - x_min) * width;
    }
    [[nodiscard]] double py(double value) const {
        return top + (log_y_max - std::log10(value)) / (log_y_max - log_y_min) * height;
    }
};

namespace detail {

inline std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline std::string xml_escape(std::string_view s) {
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

inline constexpr std::string_view kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                                "#9467bd", "#ff7f0e", "#17becf"};

} // namespace detail

/// Axis ranges covering every plottable (positive, finite) point.
inline PlotFrame plot_frame(const std::vector<PlotSeries> &series, PlotKind kind) {
    PlotFrame f;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double xlo = lo;
    double xhi = -lo;
    for (const auto &s : series) {
        for (const auto &r : *s.trace) {
            const double v = plot_value(r, kind);
            if (std::isfinite(v) && v > 0.0) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            xlo = std::min(xlo, static_cast<double>(r.step));
            xhi = std::max(xhi, static_cast<double>(r.step));
        }
    }
    if (std::isfinite(lo)) {
        f.log_y_min = static_cast<int>(std::floor(std::log10(lo)));
        f.log_y_max = static_cast<int>(std::ceil(std::log10(hi)));
    }
    if (f.log_y_max <= f.log_y_min) {
        f.log_y_max = f.log_y_min + 1;
    }
    f.x_min = xlo;
    f.x_max = xhi > xlo ? xhi : xlo + 1.0;
    return f;
}

/**
 * @brief Render traces as a self-contained SVG with a log-scale y axis.
 *
 * The root element carries the axis mapping as data-* attributes; each
 * series is one polyline. Non-positive values are left out.
 */
inline std::string render_plot(const std::vector<PlotSeries> &series, PlotKind kind) {
    if (series.empty()) {
        throw IoError("plot needs at least one trace");
    }
    for (const auto &s : series) {
        if (s.trace == nullptr || s.trace->empty()) {
            throw IoError("plot trace '" + s.label + "' is empty");
        }
    }
    const PlotFrame f = plot_frame(series, kind);
    using detail::fmt3;
    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt3(f.canvas_width) +
         "\" height=\"" + fmt3(f.canvas_height) + "\" data-kind=\"" + to_string(kind) +
         "\" data-plot-left=\"" + fmt3(f.left) + "\" data-plot-top=\"" + fmt3(f.top) +
         "\" data-plot-width=\"" + fmt3(f.width) + "\" data-plot-height=\"" + fmt3(f.height) +
         "\" data-x-min=\"" + format_double(f.x_min) + "\" data-x-max=\"" +
         format_double(f.x_max) + "\" data-log-y-min=\"" + std::to_string(f.log_y_min) +
         "\" data-log-y-max=\"" + std::to_string(f.log_y_max) + "\">\n";
    o += "<rect x=\"0\" y=\"0\" width=\"" + fmt3(f.canvas_width) + "\" height=\"" +
         fmt3(f.canvas_height) + "\" fill=\"white\"/>\n";
    o += "<rect x=\"" + fmt3(f.left) + "\" y=\"" + fmt3(f.top) + "\" width=\"" + fmt3(f.width) +
         "\" height=\"" + fmt3(f.height) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int dec = f.log_y_min; dec <= f.log_y_max; ++dec) {
        const double y = f.py(std::pow(10.0, dec));
        o += "<line x1=\"" + fmt3(f.left) + "\" y1=\"" + fmt3(y) + "\" x2=\"" +
             fmt3(f.left + f.width) + "\" y2=\"" + fmt3(y) +
             "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        o += "<text x=\"" + fmt3(f.left - 8.0) + "\" y=\"" + fmt3(y + 4.0) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e" +
             std::to_string(dec) + "</text>\n";
    }
    o += "<text x=\"" + fmt3(f.left) + "\" y=\"" + fmt3(f.top + f.height + 18.0) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + format_double(f.x_min) + "</text>\n";
    o += "<text x=\"" + fmt3(f.left + f.width) + "\" y=\"" + fmt3(f.top + f.height + 18.0) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
         format_double(f.x_max) + "</text>\n";
    o += "<text x=\"" + fmt3(f.left + 0.5 * f.width) + "\" y=\"" +
         fmt3(f.top + f.height + 40.0) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">training step</text>\n";
    o += "<text x=\"20\" y=\"" + fmt3(f.top + 0.5 * f.height) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         fmt3(f.top + 0.5 * f.height) + ")\">" + to_string(kind) + "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto color = detail::kPalette[i % std::size(detail::kPalette)];
        const std::string label = detail::xml_escape(series[i].label);
        o += "<polyline class=\"trace\" data-label=\"" + label + "\" fill=\"none\" stroke=\"" +
             std::string(color) + "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto &r : *series[i].trace) {
            const double v = plot_value(r, kind);
            if (!(std::isfinite(v) && v > 0.0)) {
                continue;
            }
            if (!first) {
                o += ' ';
            }
            first = false;
            o += fmt3(f.px(static_cast<double>(r.step))) + ',' + fmt3(f.py(v));
        }
        o += "\"/>\n";
        const double ly = f.top + 16.0 + 20.0 * static_cast<double>(i);
        const double lx = f.left + f.width + 16.0;
        o += "<line x1=\"" + fmt3(lx) + "\" y1=\"" + fmt3(ly) + "\" x2=\"" + fmt3(lx + 24.0) +
             "\" y2=\"" + fmt3(ly) + "\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"2\"/>\n";
        o += "<text class=\"legend\" x=\"" + fmt3(lx + 30.0) + "\" y=\"" + fmt3(ly + 4.0) +
             "\" font-family=\"sans-serif\" font-size=\"12\">" + label + "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

inline void emit_plot(const std::vector<PlotSeries> &series, PlotKind kind,
                      const std::filesystem::path &path) {
    write_text_file(path, render_plot(series, kind));
}

/// Sweeps matching a full-domain iteration budget: round(full * ratio / (K * local)).
inline int budget_match(int full_iters, int local_budget, int num_subdomains, double cost_ratio) {
    if (full_iters <= 0 || local_budget <= 0 || num_subdomains <= 0 || !(cost_ratio > 0.0)) {
        throw ConfigError("budget_match needs positive inputs");
    }
    return static_cast<int>(std::lround(static_cast<double>(full_iters) * cost_ratio /
                                        static_cast<double>(num_subdomains * local_budget)));
}

} // namespace gpedd
