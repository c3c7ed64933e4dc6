#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace scopemeter {

struct ScatterSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
    std::optional<double> mean_y;  // rendered as a horizontal line when set
};

namespace detail {

inline std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
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

inline std::string fmt2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

inline std::string fmt_tick(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

// Linear data->pixel mapping over a padded range.
struct AxisScale {
    double lo = 0.0;
    double hi = 1.0;
    double px_lo = 0.0;
    double px_hi = 1.0;

    double at(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

inline AxisScale make_scale(double lo, double hi, double px_lo, double px_hi) {
    if (lo > hi) std::swap(lo, hi);
    double pad = (hi - lo) * 0.05;
    if (pad == 0.0) pad = (lo == 0.0) ? 1.0 : std::abs(lo) * 0.05;  // degenerate flat range
    return {lo - pad, hi + pad, px_lo, px_hi};
}

inline const char* series_color(std::size_t index) {
    static const char* palette[8] = {"#0072b2", "#d55e00", "#009e73", "#cc79a7",
                                     "#e69f00", "#56b4e9", "#999999", "#000000"};
    return palette[index % 8];
}

// One marker = one element. Data markers carry class="marker" so consumers
// can count plotted points without geometry knowledge; legend swatches reuse
// the shapes but pass cls = "" and stay out of that count.
inline void append_marker(std::string& out, std::size_t series_index, double x, double y,
                          const char* color, const char* cls) {
    std::string attr = *cls ? " class=\"" + std::string(cls) + "\"" : "";
    std::string cx = fmt2(x), cy = fmt2(y);
    switch (series_index % 4) {
        case 0:
            out += "  <circle" + attr + " cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"4\" fill=\"" +
                   color + "\"/>\n";
            break;
        case 1:
            out += "  <rect" + attr + " x=\"" + fmt2(x - 3.5) + "\" y=\"" + fmt2(y - 3.5) +
                   "\" width=\"7\" height=\"7\" fill=\"" + color + "\"/>\n";
            break;
        case 2:
            out += "  <polygon" + attr + " points=\"" + cx + "," + fmt2(y - 4.5) + " " +
                   fmt2(x - 4.0) + "," + fmt2(y + 3.5) + " " + fmt2(x + 4.0) + "," +
                   fmt2(y + 3.5) + "\" fill=\"" + color + "\"/>\n";
            break;
        default:
            out += "  <polygon" + attr + " points=\"" + cx + "," + fmt2(y - 5.0) + " " +
                   fmt2(x + 5.0) + "," + cy + " " + cx + "," + fmt2(y + 5.0) + " " +
                   fmt2(x - 5.0) + "," + cy + "\" fill=\"" + color + "\"/>\n";
    }
}

}  // namespace detail

// Standalone 800x600 scatter plot: linear axes auto-scaled to the data with
// 5% margins, one color/shape per series (fixed 8-color palette, assigned in
// the given series order), legend top-right, optional horizontal mean lines.
inline std::string render_scatter_svg(const std::string& title, const std::string& x_label,
                                      const std::string& y_label,
                                      const std::vector<ScatterSeries>& series) {
    constexpr double width = 800.0, height = 600.0;
    constexpr double left = 70.0, right = 630.0, top = 50.0, bottom = 550.0;

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            } else {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
        if (s.mean_y) {
            y_min = first ? *s.mean_y : std::min(y_min, *s.mean_y);
            y_max = first ? *s.mean_y : std::max(y_max, *s.mean_y);
            first = false;
        }
    }
    detail::AxisScale xs = detail::make_scale(x_min, x_max, left, right);
    detail::AxisScale ys = detail::make_scale(y_min, y_max, bottom, top);  // y grows upward

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
           "font-family=\"sans-serif\" font-size=\"13\">\n";
    out += "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    out += "  <text x=\"" + detail::fmt2(width / 2) +
           "\" y=\"28\" text-anchor=\"middle\" font-size=\"17\">" + detail::xml_escape(title) +
           "</text>\n";

    // frame and ticks
    out += "  <rect x=\"" + detail::fmt2(left) + "\" y=\"" + detail::fmt2(top) + "\" width=\"" +
           detail::fmt2(right - left) + "\" height=\"" + detail::fmt2(bottom - top) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    constexpr int ticks = 5;
    for (int i = 0; i < ticks; ++i) {
        double f = static_cast<double>(i) / (ticks - 1);
        double xv = xs.lo + f * (xs.hi - xs.lo);
        double xp = xs.at(xv);
        out += "  <line x1=\"" + detail::fmt2(xp) + "\" y1=\"" + detail::fmt2(bottom) +
               "\" x2=\"" + detail::fmt2(xp) + "\" y2=\"" + detail::fmt2(bottom + 6) +
               "\" stroke=\"black\"/>\n";
        out += "  <text x=\"" + detail::fmt2(xp) + "\" y=\"" + detail::fmt2(bottom + 22) +
               "\" text-anchor=\"middle\">" + detail::fmt_tick(xv) + "</text>\n";
        double yv = ys.lo + f * (ys.hi - ys.lo);
        double yp = ys.at(yv);
        out += "  <line x1=\"" + detail::fmt2(left - 6) + "\" y1=\"" + detail::fmt2(yp) +
               "\" x2=\"" + detail::fmt2(left) + "\" y2=\"" + detail::fmt2(yp) +
               "\" stroke=\"black\"/>\n";
        out += "  <text x=\"" + detail::fmt2(left - 10) + "\" y=\"" + detail::fmt2(yp + 4) +
               "\" text-anchor=\"end\">" + detail::fmt_tick(yv) + "</text>\n";
    }
    out += "  <text x=\"" + detail::fmt2((left + right) / 2) + "\" y=\"" +
           detail::fmt2(height - 14) + "\" text-anchor=\"middle\">" + detail::xml_escape(x_label) +
           "</text>\n";
    out += "  <text x=\"20\" y=\"" + detail::fmt2((top + bottom) / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
           detail::fmt2((top + bottom) / 2) + ")\">" + detail::xml_escape(y_label) + "</text>\n";

    // mean lines under the markers
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!series[i].mean_y) continue;
        double yp = ys.at(*series[i].mean_y);
        out += "  <line class=\"mean-line\" x1=\"" + detail::fmt2(left) + "\" y1=\"" +
               detail::fmt2(yp) + "\" x2=\"" + detail::fmt2(right) + "\" y2=\"" +
               detail::fmt2(yp) + "\" stroke=\"" + detail::series_color(i) +
               "\" stroke-width=\"2\"/>\n";
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = detail::series_color(i);
        for (const auto& [x, y] : series[i].points)
            detail::append_marker(out, i, xs.at(x), ys.at(y), color, "marker");
    }

    // legend, top-right
    double legend_x = right + 16.0;
    double legend_y = top + 10.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        double yp = legend_y + static_cast<double>(i) * 22.0;
        detail::append_marker(out, i, legend_x + 6.0, yp - 4.0, detail::series_color(i), "");
        out += "  <text x=\"" + detail::fmt2(legend_x + 18.0) + "\" y=\"" + detail::fmt2(yp) +
               "\">" + detail::xml_escape(series[i].label) + "</text>\n";
    }

    out += "</svg>\n";
    return out;
}

}  // namespace scopemeter
