// Copyright 2026 The prc Authors.
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

#include "prc/plot.hpp"

#include "prc/error.hpp"
#include "prc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace prc {

namespace {

constexpr double width = 640, height = 420;
constexpr double left = 72, right = 150, top = 40, bottom = 56;

const char* colour(readout_method m)
{
    switch (m) {
    case readout_method::full: return "#1f77b4";
    case readout_method::naive: return "#ff7f0e";
    case readout_method::explorative: return "#2ca02c";
    }
    return "#000000";
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct point {
    double x, mean, lo, hi;
    bool at_floor;
};

struct axis {
    double lo, hi;
    bool log;
    double map(double v, double a, double b) const
    {
        const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo)) : (v - lo) / (hi - lo);
        return a + t * (b - a);
    }
};

std::string render(const std::string& title, const std::string& x_name, bool x_log,
                   const std::map<readout_method, std::vector<point>>& curves, double floor)
{
    double xmin = INFINITY, xmax = -INFINITY, ymax = floor;
    for (const auto& [m, pts] : curves)
        for (const auto& p : pts) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymax = std::max(ymax, p.hi);
        }
    if (xmin == xmax) {
        if (x_log) {
            xmin /= 2;
            xmax *= 2;
        } else {
            xmin -= 1;
            xmax += 1;
        }
    }
    const double ylo = std::pow(10.0, std::floor(std::log10(floor)));
    const double yhi = std::pow(10.0, std::ceil(std::log10(std::max(ymax, 10 * ylo))));
    const axis xa{xmin, xmax, x_log};
    const axis ya{ylo, yhi, true};
    const double x0 = left, x1 = width - right, y0 = height - bottom, y1 = top;
    auto px = [&](double v) { return xa.map(v, x0, x1); };
    auto py = [&](double v) { return ya.map(std::max(v, ylo), y0, y1); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height)
       + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + title + "</text>\n";
    s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) + "\" height=\"" + num(y0 - y1)
       + "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double d = ylo; d <= yhi * 1.0001; d *= 10) {
        const double y = py(d);
        s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y)
           + "\" stroke=\"#dddddd\"/>\n";
        s += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + label(d) + "</text>\n";
    }
    std::vector<double> xs;
    for (const auto& [m, pts] : curves)
        for (const auto& p : pts) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double v : xs) {
        const double x = px(v);
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x) + "\" y2=\"" + num(y0 + 5)
           + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(x) + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\">" + label(v) + "</text>\n";
    }
    s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(height - 14) + "\" text-anchor=\"middle\">" + x_name
       + "</text>\n";
    s += "<text x=\"18\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       + num((y0 + y1) / 2) + ")\">BER</text>\n";

    const double fy = py(floor);
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(fy) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(fy)
       + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    s += "<text x=\"" + num(x1 - 4) + "\" y=\"" + num(fy - 4) + "\" text-anchor=\"end\" fill=\"gray\">floor 1/n_test = "
       + label(floor) + "</text>\n";

    double legend_y = y1 + 10;
    for (const auto& [m, pts] : curves) {
        const char* c = colour(m);
        if (pts.size() > 1) {
            std::string band;
            for (const auto& p : pts) band += num(px(p.x)) + "," + num(py(p.hi)) + " ";
            for (auto it = pts.rbegin(); it != pts.rend(); ++it) band += num(px(it->x)) + "," + num(py(it->lo)) + " ";
            band.pop_back();
            s += "<polygon points=\"" + band + "\" fill=\"" + c + "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
            std::string line;
            for (const auto& p : pts) line += num(px(p.x)) + "," + num(py(p.mean)) + " ";
            line.pop_back();
            s += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + c + "\" stroke-width=\"2\"/>\n";
        } else if (!pts.empty()) {
            const auto& p = pts.front();
            s += "<line x1=\"" + num(px(p.x)) + "\" y1=\"" + num(py(p.lo)) + "\" x2=\"" + num(px(p.x)) + "\" y2=\""
               + num(py(p.hi)) + "\" stroke=\"" + c + "\"/>\n";
        }
        for (const auto& p : pts) {
            s += "<circle cx=\"" + num(px(p.x)) + "\" cy=\"" + num(py(p.mean)) + "\" r=\"3.5\" fill=\""
               + (p.at_floor ? std::string("white") : std::string(c)) + "\" stroke=\"" + c + "\"/>\n";
        }
        s += "<line x1=\"" + num(x1 + 12) + "\" y1=\"" + num(legend_y) + "\" x2=\"" + num(x1 + 36) + "\" y2=\""
           + num(legend_y) + "\" stroke=\"" + c + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(x1 + 42) + "\" y=\"" + num(legend_y + 4) + "\">" + std::string(to_string(m)) + "</text>\n";
        legend_y += 18;
    }
    s += "<text x=\"" + num(x1 + 12) + "\" y=\"" + num(legend_y + 8) + "\" fill=\"gray\" font-size=\"10\">open marker: BER 0,</text>\n";
    s += "<text x=\"" + num(x1 + 12) + "\" y=\"" + num(legend_y + 21) + "\" fill=\"gray\" font-size=\"10\">drawn at the floor</text>\n";
    s += "</svg>\n";
    return s;
}

/// Seed aggregation of rows sharing (method, x).
std::map<readout_method, std::vector<point>> aggregate(const std::vector<const sweep_row*>& rows, bool x_is_noise,
                                                       double& floor)
{
    std::map<std::pair<readout_method, double>, std::vector<double>> groups;
    floor = 0.0;
    for (const auto* r : rows) {
        const double x = x_is_noise ? r->noise_level : static_cast<double>(r->amp_levels);
        groups[{r->method, x}].push_back(r->ber_mean);
        floor = std::max(floor, r->ber_floor);
    }
    std::map<readout_method, std::vector<point>> curves;
    for (const auto& [key, v] : groups) {
        double sum = 0.0;
        for (double b : v) sum += b;
        const double mean = sum / static_cast<double>(v.size());
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        const bool at_floor = mean < floor;
        curves[key.first].push_back({key.second, std::max(mean, floor), std::max(*lo, floor), std::max(*hi, floor), at_floor});
    }
    return curves;
}

}  // namespace

std::vector<plot_panel> render_plots(std::span<const sweep_row> rows)
{
    if (rows.empty()) throw std::invalid_argument("render_plots: no rows");

    using res_key = std::tuple<task_kind, std::size_t, std::size_t, double>;
    std::map<res_key, std::vector<const sweep_row*>> by_resolution;
    std::map<res_key, std::set<double>> noise_levels;
    for (const auto& r : rows) {
        const res_key k{r.task, r.amp_levels, r.phase_levels, r.extinction_ratio};
        by_resolution[k].push_back(&r);
        noise_levels[k].insert(r.noise_level);
    }
    std::size_t max_noise = 0;
    for (const auto& [k, s] : noise_levels) max_noise = std::max(max_noise, s.size());
    std::set<std::size_t> amp_values;
    for (const auto& r : rows) amp_values.insert(r.amp_levels);

    std::vector<plot_panel> panels;
    if (max_noise > 1 || amp_values.size() == 1) {
        for (const auto& [k, group] : by_resolution) {
            const auto& [task, na, np, e] = k;
            double floor = 0.0;
            const auto curves = aggregate(group, true, floor);
            bool x_log = true;
            for (const auto* r : group) x_log = x_log && r->noise_level > 0.0;
            const std::string title = std::string(to_string(task)) + ": N_a=" + std::to_string(na)
                                    + ", N_phi=" + std::to_string(np) + ", E=" + label(e);
            const std::string name = std::string(to_string(task)) + "_noise_na" + std::to_string(na) + "_np"
                                   + std::to_string(np) + "_er" + label(e) + ".svg";
            panels.push_back({name, render(title, "noise level (units of grid step)", x_log, curves, floor)});
        }
    } else {
        // One panel per (task, coupled or not, E, noise level), x = N_a.
        using panel_key = std::tuple<task_kind, bool, double, double>;
        std::map<panel_key, std::vector<const sweep_row*>> by_panel;
        for (const auto& r : rows)
            by_panel[{r.task, r.amp_levels == r.phase_levels, r.extinction_ratio, r.noise_level}].push_back(&r);
        for (const auto& [k, group] : by_panel) {
            const auto& [task, coupled, e, eta] = k;
            double floor = 0.0;
            const auto curves = aggregate(group, false, floor);
            const std::string title = std::string(to_string(task)) + ": E=" + label(e) + ", noise level=" + label(eta);
            const std::string name = std::string(to_string(task)) + "_resolution_er" + label(e) + "_eta" + label(eta)
                                   + (coupled ? "" : "_np") + ".svg";
            panels.push_back({name, render(title, "amplitude levels N_a", true, curves, floor)});
        }
    }
    return panels;
}

std::vector<std::filesystem::path> emit_plots(std::span<const sweep_row> rows, const std::filesystem::path& output_dir)
{
    const auto panels = render_plots(rows);
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) throw io_error("cannot create " + output_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> paths;
    for (const auto& p : panels) {
        const auto path = output_dir / p.file_name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot write " + path.string());
        out << p.svg;
        if (!out) throw io_error("write failed: " + path.string());
        paths.push_back(path);
    }
    return paths;
}

}  // namespace prc
