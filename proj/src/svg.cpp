#include "dynobs/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dynobs/error.hpp"

namespace dynobs {

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 80, kRight = 30, kTop = 50, kBottom = 70;
constexpr int kTicks = 5;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle() {
        if (!(lo <= hi)) lo = 0, hi = 1;
        if (lo == hi) lo -= 0.5, hi += 0.5;
    }
};

} // namespace

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string render_svg(const LineChart& chart) {
    Range rx, ry;
    for (const auto& s : chart.series) {
        if (s.xs.size() != s.ys.size()) throw DomainError("render_svg: series '" + s.name + "' has mismatched x/y lengths");
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            rx.add(s.xs[i]);
            ry.add(s.ys[i]);
        }
    }
    rx.settle();
    ry.settle();

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
    auto sy = [&](double y) { return kTop + ph - (y - ry.lo) / (ry.hi - ry.lo) * ph; };

    std::string o;
    o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    o += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    o += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" + xml_escape(chart.title) +
         "</text>\n";

    // Axes and ticks.
    o += "<g stroke=\"black\" stroke-width=\"1\">\n";
    o += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" + num(kTop + ph) + "\"/>\n";
    o += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(kTop + ph) + "\"/>\n";
    o += "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / kTicks;
        const double fy = ry.lo + (ry.hi - ry.lo) * i / kTicks;
        o += "<text x=\"" + num(sx(fx)) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" + tick_label(fx) + "</text>\n";
        o += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(sy(fy) + 4) + "\" text-anchor=\"end\">" + tick_label(fy) + "</text>\n";
    }
    o += "</g>\n";
    o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + xml_escape(chart.x_label) + "</text>\n";
    o += "<text x=\"20\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 20 " +
         num(kTop + ph / 2) + ")\">" + xml_escape(chart.y_label) + "</text>\n";

    for (const auto& s : chart.series) {
        o += "<polyline fill=\"none\" stroke=\"" + xml_escape(s.color) + "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            if (!first) o += ' ';
            first = false;
            o += num(sx(s.xs[i])) + "," + num(sy(s.ys[i]));
        }
        o += "\"/>\n";
    }

    // Legend, top left inside the plot area.
    double ly = kTop + 18;
    o += "<g font-family=\"sans-serif\" font-size=\"13\">\n";
    for (const auto& s : chart.series) {
        o += "<line x1=\"" + num(kLeft + 12) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(kLeft + 36) + "\" y2=\"" + num(ly - 4) +
             "\" stroke=\"" + xml_escape(s.color) + "\" stroke-width=\"2\"/>\n";
        o += "<text x=\"" + num(kLeft + 42) + "\" y=\"" + num(ly) + "\">" + xml_escape(s.name) + "</text>\n";
        ly += 18;
    }
    for (const auto& note : chart.notes) {
        o += "<text x=\"" + num(kLeft + 12) + "\" y=\"" + num(ly) + "\">" + xml_escape(note) + "</text>\n";
        ly += 18;
    }
    o += "</g>\n</svg>\n";
    return o;
}

} // namespace dynobs
