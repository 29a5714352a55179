#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace hyrb {
namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 710.0;
constexpr double kTop = 56.0;
constexpr double kBottom = 452.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

/// Largest 1/2/5 * 10^k step not exceeding the raw spacing hint.
double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(target_ticks, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {5.0, 2.0, 1.0})
        if (m * mag <= raw) return m * mag;
    return mag;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

}  // namespace

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label, bool log_y,
                     const std::vector<PlotSeries>& series) {
    Range xr{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    Range yr = xr;
    for (const PlotSeries& s : series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            double y = s.y[i];
            if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
            if (log_y) {
                if (y <= 0.0) continue;
                y = std::log10(y);
            }
            xr.lo = std::min(xr.lo, s.x[i]);
            xr.hi = std::max(xr.hi, s.x[i]);
            yr.lo = std::min(yr.lo, y);
            yr.hi = std::max(yr.hi, y);
        }
    }
    const bool have_data = std::isfinite(xr.lo) && std::isfinite(yr.lo);
    if (!have_data) {
        xr = {0.0, 1.0};
        yr = {0.0, 1.0};
    }
    if (xr.hi <= xr.lo) {
        xr.lo -= 1.0;
        xr.hi += 1.0;
    }
    if (yr.hi <= yr.lo) {
        yr.lo -= 1.0;
        yr.hi += 1.0;
    }
    // Breathing room so markers do not sit on the frame.
    const double xpad = 0.04 * (xr.hi - xr.lo);
    const double ypad = 0.06 * (yr.hi - yr.lo);
    xr.lo -= xpad;
    xr.hi += xpad;
    yr.lo -= ypad;
    yr.hi += ypad;

    const auto sx = [&](double x) {
        return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kRight - kLeft);
    };
    const auto sy = [&](double y) {
        if (log_y) y = std::log10(y);
        return kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop);
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot file '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"28\" font-size=\"17\" "
        << "text-anchor=\"middle\" font-family=\"sans-serif\">" << escape_xml(title)
        << "</text>\n";

    // x ticks
    const double xstep = nice_step(xr.hi - xr.lo, 6);
    for (double t = std::ceil(xr.lo / xstep) * xstep; t <= xr.hi + 1e-9 * xstep; t += xstep) {
        const double px = sx(t);
        out << "<line x1=\"" << px << "\" y1=\"" << kTop << "\" x2=\"" << px << "\" y2=\""
            << kBottom << "\" stroke=\"#e0e0e0\"/>\n"
            << "<text x=\"" << px << "\" y=\"" << kBottom + 20
            << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            << fmt("%g", t) << "</text>\n";
    }
    // y ticks: decades in log mode, nice steps otherwise
    if (log_y) {
        const int d0 = static_cast<int>(std::ceil(yr.lo));
        const int d1 = static_cast<int>(std::floor(yr.hi));
        for (int d = d0; d <= d1; ++d) {
            const double py = kBottom - (d - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop);
            out << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\"" << kRight
                << "\" y2=\"" << py << "\" stroke=\"#e0e0e0\"/>\n"
                << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4
                << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">1e"
                << d << "</text>\n";
        }
    } else {
        const double ystep = nice_step(yr.hi - yr.lo, 6);
        for (double t = std::ceil(yr.lo / ystep) * ystep; t <= yr.hi + 1e-9 * ystep; t += ystep) {
            const double py = kBottom - (t - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop);
            out << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\"" << kRight
                << "\" y2=\"" << py << "\" stroke=\"#e0e0e0\"/>\n"
                << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4
                << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">"
                << fmt("%g", t) << "</text>\n";
        }
    }

    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft
        << "\" height=\"" << kBottom - kTop << "\" fill=\"none\" stroke=\"#404040\"/>\n"
        << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 44
        << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << escape_xml(x_label) << "</text>\n"
        << "<text x=\"22\" y=\"" << (kTop + kBottom) / 2
        << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 22 " << (kTop + kBottom) / 2 << ")\">" << escape_xml(y_label)
        << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string points;
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (log_y && s.y[i] <= 0.0) continue;
            points += fmt("%.2f", sx(s.x[i])) + "," + fmt("%.2f", sy(s.y[i])) + " ";
        }
        if (!points.empty())
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (log_y && s.y[i] <= 0.0) continue;
            out << "<circle cx=\"" << fmt("%.2f", sx(s.x[i])) << "\" cy=\""
                << fmt("%.2f", sy(s.y[i])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = kTop + 16.0 + 18.0 * static_cast<double>(si);
        out << "<line x1=\"" << kRight - 150 << "\" y1=\"" << ly << "\" x2=\"" << kRight - 122
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n"
            << "<text x=\"" << kRight - 116 << "\" y=\"" << ly + 4
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << escape_xml(s.label)
            << "</text>\n";
    }
    if (!have_data)
        out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << (kTop + kBottom) / 2
            << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            << "no finite data</text>\n";
    out << "</svg>\n";
    if (!out) throw std::runtime_error("failed while writing plot file '" + path + "'");
}

}  // namespace hyrb
