#include "quasipd/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quasipd/error.hpp"
#include "quasipd/ingest.hpp"

namespace quasipd {
namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_svg_line_chart(const std::vector<PlotLine>& lines, const std::string& title) {
    require(!lines.empty(), ErrorKind::Input, "plot: no series");
    MonthIndex first = lines[0].series.start();
    MonthIndex last = lines[0].series.last();
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& l : lines) {
        first = std::min(first, l.series.start());
        last = std::max(last, l.series.last());
        for (const auto& v : l.series.values()) {
            if (!v) continue;
            lo = std::min(lo, *v);
            hi = std::max(hi, *v);
        }
    }
    require(std::isfinite(lo), ErrorKind::Input, "plot: all values missing");
    if (hi == lo) {
        hi += 0.5 * std::max(std::abs(hi), 1e-6);
        lo -= 0.5 * std::max(std::abs(lo), 1e-6);
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    const double span = std::max<double>(1.0, static_cast<double>(last.months_since(first)));
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](MonthIndex m) { return kLeft + pw * static_cast<double>(m.months_since(first)) / span; };
    auto py = [&](double v) { return kTop + ph * (hi - v) / (hi - lo); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" viewBox=\"0 0 "
       << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << coord(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
    os << "<g stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph << "\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n";
    os << "</g>\n";

    // Year ticks on January, thinned to at most ~12 labels.
    const int years = last.year() - first.year() + 1;
    const int every = std::max(1, (years + 11) / 12);
    os << "<g fill=\"black\" text-anchor=\"middle\">\n";
    for (int y = first.year(); y <= last.year(); ++y) {
        const MonthIndex jan(y, 1);
        if (jan < first || jan > last || (y - first.year()) % every != 0) continue;
        const std::string x = coord(px(jan));
        os << "<line x1=\"" << x << "\" y1=\"" << kTop + ph << "\" x2=\"" << x << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>";
        os << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\">" << y << "</text>\n";
    }
    os << "</g>\n<g fill=\"black\" text-anchor=\"end\">\n";
    for (int k = 0; k <= 5; ++k) {
        const double v = lo + (hi - lo) * k / 5.0;
        const std::string y = coord(py(v));
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y << "\" stroke=\"black\"/>";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << y << "\" dy=\"4\">" << format_number(std::round(v * 1e6) / 1e6) << "</text>\n";
    }
    os << "</g>\n";

    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto& s = lines[k].series;
        const char* color = kColors[k % std::size(kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool firstpt = true;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!s[i]) continue;
            if (!firstpt) os << ' ';
            os << coord(px(s.start().plus(static_cast<long>(i)))) << ',' << coord(py(*s[i]));
            firstpt = false;
        }
        os << "\"><title>" << escape(lines[k].label) << "</title></polyline>\n";
        const double ly = kHeight - 18.0;
        const double lx = kLeft + 160.0 * static_cast<double>(k);
        os << "<line x1=\"" << coord(lx) << "\" y1=\"" << coord(ly) << "\" x2=\"" << coord(lx + 20) << "\" y2=\"" << coord(ly)
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
        os << "<text x=\"" << coord(lx + 25) << "\" y=\"" << coord(ly) << "\" dy=\"4\">" << escape(lines[k].label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_gnuplot_data(const std::vector<PlotLine>& lines) {
    require(!lines.empty(), ErrorKind::Input, "plot: no series");
    MonthIndex first = lines[0].series.start();
    MonthIndex last = lines[0].series.last();
    for (const auto& l : lines) {
        first = std::min(first, l.series.start());
        last = std::max(last, l.series.last());
    }
    std::ostringstream os;
    os << "# month index";
    for (const auto& l : lines) os << ' ' << l.label;
    os << '\n';
    long idx = 0;
    for (MonthIndex m = first; m <= last; m = m.next(), ++idx) {
        os << m.to_string() << ' ' << idx;
        for (const auto& l : lines) {
            const Observation v = l.series.at(m);
            os << ' ' << (v ? format_number(*v) : std::string("NaN"));
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace quasipd
