#include "axlesim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "axlesim/errors.hpp"

namespace axlesim::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string tick(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// white -> dark red ramp
std::string heat_colour(double v)
{
    v = std::clamp(v, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255 - 75 * v));
    const int g = static_cast<int>(std::lround(255 - 235 * v));
    const int b = static_cast<int>(std::lround(255 - 225 * v));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace

void write_line_chart(std::ostream& out, const std::vector<Series>& series, const ChartLabels& labels)
{
    constexpr double width = 720, height = 440, left = 80, right = 170, top = 50, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (!std::isfinite(x_lo)) {
        x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    }
    if (x_hi == x_lo) x_hi = x_lo + 1;
    if (y_hi == y_lo) y_hi = y_lo + 1;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">" << escape(labels.title)
        << "</text>\n"
        << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 5; ++k) {
        const double xv = x_lo + (x_hi - x_lo) * k / 5.0;
        const double yv = y_lo + (y_hi - y_lo) * k / 5.0;
        out << "<text x=\"" << fixed(px(xv), 1) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << fixed(py(yv) + 4, 1) << "\" text-anchor=\"end\">"
            << tick(yv) << "</text>\n";
        out << "<line x1=\"" << left << "\" x2=\"" << left + plot_w << "\" y1=\"" << fixed(py(yv), 1) << "\" y2=\""
            << fixed(py(yv), 1) << "\" stroke=\"#e0e0e0\"/>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
        << escape(labels.x_axis) << "</text>\n"
        << "<text transform=\"translate(20," << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(labels.y_axis) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* colour = kPalette[s % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
            if (std::isfinite(series[s].y[i])) {
                out << fixed(px(series[s].x[i]), 2) << ',' << fixed(py(series[s].y[i]), 2) << ' ';
            }
        }
        out << "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(s);
        out << "<line x1=\"" << left + plot_w + 12 << "\" x2=\"" << left + plot_w + 36 << "\" y1=\"" << ly
            << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << ly + 4 << "\">" << escape(series[s].label)
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) {
        throw IoError("failed writing SVG chart");
    }
}

void write_heatmap(std::ostream& out, const std::vector<std::vector<double>>& values,
                   const std::vector<std::string>& row_labels, const std::vector<std::string>& column_labels,
                   const std::string& title)
{
    constexpr double cell = 70, left = 70, top = 90;
    const double width = left + cell * static_cast<double>(column_labels.size()) + 20;
    const double height = top + cell * static_cast<double>(row_labels.size()) + 20;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";
    for (std::size_t c = 0; c < column_labels.size(); ++c) {
        out << "<text x=\"" << left + cell * (static_cast<double>(c) + 0.5) << "\" y=\"" << top - 10
            << "\" text-anchor=\"middle\">" << escape(column_labels[c]) << "</text>\n";
    }
    for (std::size_t r = 0; r < row_labels.size() && r < values.size(); ++r) {
        const double y = top + cell * static_cast<double>(r);
        out << "<text x=\"" << left - 8 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"end\">"
            << escape(row_labels[r]) << "</text>\n";
        for (std::size_t c = 0; c < column_labels.size() && c < values[r].size(); ++c) {
            const double x = left + cell * static_cast<double>(c);
            const double v = values[r][c];
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
                << "\" fill=\"" << heat_colour(v) << "\" stroke=\"white\"/>\n"
                << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"middle\" fill=\""
                << (v > 0.6 ? "white" : "black") << "\">" << fixed(v, 2) << "</text>\n";
        }
    }
    out << "</svg>\n";
    if (!out) {
        throw IoError("failed writing SVG heatmap");
    }
}

} // namespace axlesim::svg
