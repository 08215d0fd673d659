// Copyright 2026 The mend-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mend/cli/output.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "mend/errors.h"

namespace mend::cli {

namespace fs = std::filesystem;

namespace {

void check_curves(const std::vector<LabeledCurve>& curves) {
    if (curves.empty()) {
        throw DomainError("nothing to write: no curves");
    }
    for (const auto& c : curves) {
        if (c.label.empty()) {
            throw DomainError("curve label must not be empty");
        }
        if (c.label.find_first_of(",\"\r\n") != std::string::npos) {
            throw DomainError("curve label '" + c.label + "' contains a comma, quote or line break");
        }
        if (c.points.empty()) {
            throw DomainError("curve '" + c.label + "' has no points");
        }
    }
}

std::string xml_escape(const std::string& s) {
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

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_curves_csv(const std::vector<LabeledCurve>& curves) {
    check_curves(curves);
    std::string out = "x,mean_distance,stderr,label\n";
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            out += std::to_string(p.x) + "," + format_number(p.mean_distance) + "," + format_number(p.std_error) +
                   "," + c.label + "\n";
        }
    }
    return out;
}

std::string format_svg(const std::vector<LabeledCurve>& curves, const std::string& title) {
    check_curves(curves);
    const double width = 640, height = 420;
    const double left = 70, right = 20, top = 40, bottom = 55;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = curves[0].points[0].x, x_max = x_min, y_max = 0.0;
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            x_min = std::min<double>(x_min, p.x);
            x_max = std::max<double>(x_max, p.x);
            y_max = std::max(y_max, p.mean_distance);
        }
    }
    if (x_max == x_min) {
        x_max = x_min + 1;
    }
    if (!(y_max > 0.0)) {
        y_max = 1.0;
    }
    y_max *= 1.05;
    auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double y) { return top + (1.0 - y / y_max) * plot_h; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" + px(height) +
           "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) {
        out += "<text x=\"" + px(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
               xml_escape(title) + "</text>\n";
    }
    // Axes and ticks.
    out += "<g stroke=\"black\" stroke-width=\"1\">\n";
    out += "<line x1=\"" + px(left) + "\" y1=\"" + px(top + plot_h) + "\" x2=\"" + px(left + plot_w) + "\" y2=\"" +
           px(top + plot_h) + "\"/>\n";
    out += "<line x1=\"" + px(left) + "\" y1=\"" + px(top) + "\" x2=\"" + px(left) + "\" y2=\"" + px(top + plot_h) +
           "\"/>\n";
    out += "</g>\n";
    for (int t = 0; t <= 5; ++t) {
        double xv = x_min + (x_max - x_min) * t / 5.0;
        double yv = y_max * t / 5.0;
        out += "<line x1=\"" + px(sx(xv)) + "\" y1=\"" + px(top + plot_h) + "\" x2=\"" + px(sx(xv)) + "\" y2=\"" +
               px(top + plot_h + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + px(sx(xv)) + "\" y=\"" + px(top + plot_h + 18) + "\" text-anchor=\"middle\">" +
               format_number(std::round(xv * 100) / 100) + "</text>\n";
        out += "<line x1=\"" + px(left - 5) + "\" y1=\"" + px(sy(yv)) + "\" x2=\"" + px(left) + "\" y2=\"" +
               px(sy(yv)) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + px(left - 8) + "\" y=\"" + px(sy(yv) + 4) + "\" text-anchor=\"end\">" +
               format_number(std::round(yv * 1000) / 1000) + "</text>\n";
    }
    out += "<text x=\"" + px(left + plot_w / 2) + "\" y=\"" + px(height - 12) +
           "\" text-anchor=\"middle\">copies</text>\n";
    out += "<text x=\"16\" y=\"" + px(top + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           px(top + plot_h / 2) + ")\">average trace distance</text>\n";

    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& c = curves[i];
        const char* color = kPalette[i % std::size(kPalette)];
        std::string pts;
        for (const auto& p : c.points) {
            if (!pts.empty()) {
                pts += ' ';
            }
            pts += px(sx(p.x)) + "," + px(sy(p.mean_distance));
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"";
        if (c.dotted) {
            out += " stroke-dasharray=\"2,3\"";
        }
        out += " points=\"" + pts + "\"/>\n";
        // Legend entry.
        double ly = top + 12 + 16 * static_cast<double>(i);
        double lx = left + plot_w - 150;
        out += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly) + "\" x2=\"" + px(lx + 24) + "\" y2=\"" + px(ly) +
               "\" stroke=\"" + color + "\" stroke-width=\"1.5\"" + (c.dotted ? " stroke-dasharray=\"2,3\"" : "") +
               "/>\n";
        out += "<text x=\"" + px(lx + 30) + "\" y=\"" + px(ly + 4) + "\">" + xml_escape(c.label) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string format_run_record_csv(const RunRecord& record) {
    std::string out = "copy,branch,measured,stored,outcome,offset,moment_modulus,estimate,distance\n";
    for (const auto& e : record.entries) {
        out += std::to_string(e.copy_index) + "," + to_string(e.kind) + "," + (e.measured ? "1" : "0") + "," +
               (e.stored ? "1" : "0") + "," + std::to_string(e.outcome) + "," + format_number(e.offset) + "," +
               format_number(e.moment_modulus) + "," + format_number(e.estimate) + "," +
               format_number(e.distance) + "\n";
    }
    return out;
}

OutputBatch::OutputBatch(fs::path dir) : dir_(std::move(dir)) {}

OutputBatch::~OutputBatch() {
    for (const auto& [temp, final_path] : pending_) {
        std::error_code ec;
        fs::remove(temp, ec);
    }
}

void OutputBatch::add(const std::string& name, const std::string& content) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory '" + dir_.string() + "': " + ec.message());
    }
    fs::path final_path = dir_ / name;
    fs::path temp = dir_ / ("." + name + ".partial");
    pending_.emplace_back(temp, final_path);
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
        throw std::runtime_error("cannot write '" + final_path.string() + "'");
    }
}

std::vector<fs::path> OutputBatch::commit() {
    std::vector<fs::path> written;
    for (const auto& [temp, final_path] : pending_) {
        std::error_code ec;
        fs::rename(temp, final_path, ec);
        if (ec) {
            for (const auto& done : written) {
                fs::remove(done, ec);
            }
            throw std::runtime_error("cannot move output into '" + final_path.string() + "'");
        }
        written.push_back(final_path);
    }
    pending_.clear();
    return written;
}

}  // namespace mend::cli
