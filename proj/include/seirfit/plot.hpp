/* Copyright 2026 seirfit contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace seirfit {

struct PlotSeries {
    std::string name;
    std::vector<double> values; // sampled on the shared x grid
};

namespace detail {

inline std::string fmt1(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

inline std::string fmtg(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace detail

/// A simple deterministic multi-series SVG line chart with axes and a
/// legend. Same inputs give identical bytes.
inline std::string svg_line_chart(const std::vector<double>& x,
                                  const std::vector<PlotSeries>& series,
                                  const std::string& x_label, const std::string& y_label)
{
    if (series.empty() || x.size() < 2) {
        throw std::invalid_argument("svg_line_chart: need at least one series and two points");
    }
    for (const auto& s : series) {
        if (s.values.size() != x.size()) {
            throw std::invalid_argument("svg_line_chart: series '" + s.name +
                                        "' length mismatch");
        }
    }

    const double width = 800.0, height = 480.0;
    const double ml = 70.0, mr = 150.0, mt = 20.0, mb = 50.0;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = x.front(), xmax = x.back();
    double ymin = series[0].values[0], ymax = ymin;
    for (const auto& s : series) {
        for (double v : s.values) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (xmax == xmin) {
        xmax = xmin + 1.0;
    }
    if (ymax == ymin) {
        ymax = ymin + 1.0;
    }

    auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return mt + ph - (v - ymin) / (ymax - ymin) * ph; };

    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    os << "<line x1=\"" << detail::fmt1(ml) << "\" y1=\"" << detail::fmt1(mt + ph) << "\" x2=\""
       << detail::fmt1(ml + pw) << "\" y2=\"" << detail::fmt1(mt + ph)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << detail::fmt1(ml) << "\" y1=\"" << detail::fmt1(mt) << "\" x2=\""
       << detail::fmt1(ml) << "\" y2=\"" << detail::fmt1(mt + ph) << "\" stroke=\"black\"/>\n";
    // ticks
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        os << "<text x=\"" << detail::fmt1(px(xv)) << "\" y=\"" << detail::fmt1(mt + ph + 18.0)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << detail::fmtg(xv) << "</text>\n";
        os << "<text x=\"" << detail::fmt1(ml - 6.0) << "\" y=\"" << detail::fmt1(py(yv) + 4.0)
           << "\" font-size=\"11\" text-anchor=\"end\">" << detail::fmtg(yv) << "</text>\n";
    }
    os << "<text x=\"" << detail::fmt1(ml + pw / 2.0) << "\" y=\"" << detail::fmt1(height - 10.0)
       << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << detail::fmt1(mt + ph / 2.0)
       << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << detail::fmt1(mt + ph / 2.0) << ")\">" << y_label << "</text>\n";
    // series
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = palette[si % 8];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            os << detail::fmt1(px(x[i])) << ',' << detail::fmt1(py(series[si].values[i]));
            if (i + 1 < x.size()) {
                os << ' ';
            }
        }
        os << "\"/>\n";
        // legend
        const double ly = mt + 14.0 + 18.0 * static_cast<double>(si);
        os << "<line x1=\"" << detail::fmt1(ml + pw + 10.0) << "\" y1=\"" << detail::fmt1(ly)
           << "\" x2=\"" << detail::fmt1(ml + pw + 34.0) << "\" y2=\"" << detail::fmt1(ly)
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << detail::fmt1(ml + pw + 40.0) << "\" y=\"" << detail::fmt1(ly + 4.0)
           << "\" font-size=\"12\">" << series[si].name << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace seirfit
