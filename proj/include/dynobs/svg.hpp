#pragma once

// Minimal SVG line chart: fixed 800x600 viewBox, linear axes, one polyline
// per series, legend text. No external dependencies.

#include <string>
#include <vector>

namespace dynobs {

struct ChartSeries {
    std::string name;
    std::string color = "#1f77b4";
    std::vector<double> xs;
    std::vector<double> ys;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
    std::vector<std::string> notes;  // extra legend lines
};

std::string render_svg(const LineChart& chart);

std::string xml_escape(const std::string& text);

} // namespace dynobs
