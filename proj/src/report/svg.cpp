#include "coevo/report/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "coevo/error.hpp"

namespace coevo::report {

namespace {

using pipeline::format_number;

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 30;
constexpr double kTop = 40;
constexpr double kBottom = 50;

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

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (hi <= lo) hi = lo + 1.0;
        double span = hi - lo;
        hi += span * 0.05;
        if (lo < 0) lo -= span * 0.05;
    }
};

class Canvas {
public:
    explicit Canvas(const std::string& title) {
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(kWidth) << "\" height=\"" << px(kHeight)
             << "\" viewBox=\"0 0 " << px(kWidth) << ' ' << px(kHeight) << "\">\n";
        out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        text(kWidth / 2, 22, title, "middle", 15);
    }
    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1) {
        out_ << "<line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2) << "\" y2=\"" << px(y2)
             << "\" stroke=\"" << stroke << "\" stroke-width=\"" << px(width) << "\"/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& fill) {
        out_ << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(std::max(w, 0.0)) << "\" height=\""
             << px(std::max(h, 0.0)) << "\" fill=\"" << fill << "\" stroke=\"black\" stroke-width=\"0.50\"/>\n";
    }
    void circle(double x, double y, const std::string& fill) {
        out_ << "<circle cx=\"" << px(x) << "\" cy=\"" << px(y) << "\" r=\"3.00\" fill=\"" << fill << "\"/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
        out_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2.00\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) out_ << (i ? " " : "") << px(pts[i].first) << ',' << px(pts[i].second);
        out_ << "\"/>\n";
    }
    void text(double x, double y, const std::string& s, const char* anchor = "start", int size = 11) {
        out_ << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\" font-family=\"sans-serif\" font-size=\"" << size
             << "\" text-anchor=\"" << anchor << "\">" << escape(s) << "</text>\n";
    }
    void vertical_text(double x, double y, const std::string& s) {
        out_ << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\" font-family=\"sans-serif\" font-size=\"11\" "
             << "text-anchor=\"middle\" transform=\"rotate(-90 " << px(x) << ' ' << px(y) << ")\">" << escape(s)
             << "</text>\n";
    }
    std::string finish() {
        out_ << "</svg>\n";
        return out_.str();
    }

private:
    std::ostringstream out_;
};

void y_axis(Canvas& c, const Range& r, const std::string& label) {
    double plot_h = kHeight - kTop - kBottom;
    c.line(kLeft, kTop, kLeft, kHeight - kBottom, "black");
    for (int k = 0; k <= 4; ++k) {
        double v = r.lo + (r.hi - r.lo) * k / 4.0;
        double y = kHeight - kBottom - plot_h * k / 4.0;
        c.line(kLeft - 4, y, kLeft, y, "black");
        c.text(kLeft - 6, y + 4, tick(v), "end", 10);
    }
    c.vertical_text(16, kTop + plot_h / 2, label);
}

}  // namespace

std::string render_svg(const LineChart& chart) {
    Canvas c(chart.title);
    Range yr;
    for (const auto& s : chart.series) {
        for (double v : s.values) yr.include(v);
    }
    yr.pad();
    Range xr{chart.x.empty() ? 0.0 : chart.x.front(), chart.x.empty() ? 1.0 : chart.x.front()};
    for (double v : chart.x) xr.include(v);
    if (xr.hi <= xr.lo) xr.hi = xr.lo + 1;
    double plot_w = kWidth - kLeft - kRight;
    double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto sy = [&](double v) { return kHeight - kBottom - (v - yr.lo) / (yr.hi - yr.lo) * plot_h; };

    y_axis(c, yr, chart.y_label);
    c.line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom, "black");
    for (double v : chart.x) c.text(sx(v), kHeight - kBottom + 15, tick(v), "middle", 10);
    c.text(kLeft + plot_w / 2, kHeight - 10, chart.x_label, "middle");

    double legend_y = kTop + 5;
    for (const auto& s : chart.series) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < s.values.size() && i < chart.x.size(); ++i) pts.emplace_back(sx(chart.x[i]), sy(s.values[i]));
        c.polyline(pts, s.color);
        for (const auto& p : pts) c.circle(p.first, p.second, s.color);
        c.line(kWidth - kRight - 110, legend_y, kWidth - kRight - 90, legend_y, s.color, 2);
        c.text(kWidth - kRight - 85, legend_y + 4, s.name);
        legend_y += 16;
    }
    return c.finish();
}

std::string render_svg(const BarChart& chart) {
    Canvas c(chart.title);
    Range xr{chart.baseline, chart.baseline};
    for (const auto& b : chart.bars) {
        xr.include(b.value);
        xr.include(b.low);
        xr.include(b.high);
    }
    if (xr.hi <= xr.lo) xr.hi = xr.lo + 1;
    double span = xr.hi - xr.lo;
    xr.lo -= span * 0.05;
    xr.hi += span * 0.05;
    const double left = 230;
    double plot_w = kWidth - left - kRight;
    double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double v) { return left + (v - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    double slot = chart.bars.empty() ? plot_h : plot_h / static_cast<double>(chart.bars.size());

    for (std::size_t i = 0; i < chart.bars.size(); ++i) {
        const auto& b = chart.bars[i];
        double y = kTop + slot * static_cast<double>(i);
        double x0 = sx(std::min(chart.baseline, b.value));
        double x1 = sx(std::max(chart.baseline, b.value));
        c.rect(x0, y + slot * 0.2, x1 - x0, slot * 0.6, b.value >= chart.baseline ? "#4c9f70" : "#c0504d");
        double mid = y + slot / 2;
        c.line(sx(b.low), mid, sx(b.high), mid, "black");
        c.line(sx(b.low), mid - 4, sx(b.low), mid + 4, "black");
        c.line(sx(b.high), mid - 4, sx(b.high), mid + 4, "black");
        c.text(left - 6, mid + 4, b.label, "end", 10);
    }
    c.line(sx(chart.baseline), kTop, sx(chart.baseline), kHeight - kBottom, "#555555");
    c.line(left, kHeight - kBottom, kWidth - kRight, kHeight - kBottom, "black");
    for (int k = 0; k <= 4; ++k) {
        double v = xr.lo + (xr.hi - xr.lo) * k / 4.0;
        c.line(sx(v), kHeight - kBottom, sx(v), kHeight - kBottom + 4, "black");
        c.text(sx(v), kHeight - kBottom + 16, tick(v), "middle", 10);
    }
    c.text(left + plot_w / 2, kHeight - 10, chart.value_label, "middle");
    return c.finish();
}

std::string render_svg(const BoxPlot& chart) {
    Canvas c(chart.title);
    Range yr;
    for (const auto& g : chart.groups) {
        yr.include(g.summary.min);
        yr.include(g.summary.max);
    }
    yr.pad();
    double plot_w = kWidth - kLeft - kRight;
    double plot_h = kHeight - kTop - kBottom;
    auto sy = [&](double v) { return kHeight - kBottom - (v - yr.lo) / (yr.hi - yr.lo) * plot_h; };
    y_axis(c, yr, chart.y_label);
    c.line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom, "black");
    double slot = chart.groups.empty() ? plot_w : plot_w / static_cast<double>(chart.groups.size());
    for (std::size_t i = 0; i < chart.groups.size(); ++i) {
        const auto& g = chart.groups[i];
        double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
        double half = std::min(40.0, slot * 0.3);
        c.line(cx, sy(g.summary.min), cx, sy(g.summary.q1), "black");
        c.line(cx, sy(g.summary.q3), cx, sy(g.summary.max), "black");
        c.line(cx - half / 2, sy(g.summary.min), cx + half / 2, sy(g.summary.min), "black");
        c.line(cx - half / 2, sy(g.summary.max), cx + half / 2, sy(g.summary.max), "black");
        c.rect(cx - half, sy(g.summary.q3), 2 * half, sy(g.summary.q1) - sy(g.summary.q3), "#9dc3e6");
        c.line(cx - half, sy(g.summary.median), cx + half, sy(g.summary.median), "black", 2);
        c.text(cx, kHeight - kBottom + 15, g.label + " (n=" + std::to_string(g.n) + ")", "middle", 10);
    }
    return c.finish();
}

pipeline::CsvTable chart_data(const LineChart& chart) {
    pipeline::CsvTable t;
    t.header.push_back(chart.x_label);
    for (const auto& s : chart.series) t.header.push_back(s.name);
    for (std::size_t i = 0; i < chart.x.size(); ++i) {
        std::vector<std::string> row{format_number(chart.x[i])};
        for (const auto& s : chart.series) row.push_back(i < s.values.size() ? format_number(s.values[i]) : "NA");
        t.rows.push_back(std::move(row));
    }
    return t;
}

pipeline::CsvTable chart_data(const BarChart& chart) {
    pipeline::CsvTable t{{"label", "value", "low", "high"}, {}};
    for (const auto& b : chart.bars) {
        t.rows.push_back({b.label, format_number(b.value), format_number(b.low), format_number(b.high)});
    }
    return t;
}

pipeline::CsvTable chart_data(const BoxPlot& chart) {
    pipeline::CsvTable t{{"group", "n", "min", "q1", "median", "q3", "max"}, {}};
    for (const auto& g : chart.groups) {
        t.rows.push_back({g.label, std::to_string(g.n), format_number(g.summary.min), format_number(g.summary.q1),
                          format_number(g.summary.median), format_number(g.summary.q3),
                          format_number(g.summary.max)});
    }
    return t;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

template <class Chart>
void emit_chart(const std::filesystem::path& dir, const std::string& stem, const Chart& chart) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / (stem + ".svg"), render_svg(chart));
    pipeline::write_csv(dir / (stem + ".csv"), chart_data(chart));
}

template void emit_chart<LineChart>(const std::filesystem::path&, const std::string&, const LineChart&);
template void emit_chart<BarChart>(const std::filesystem::path&, const std::string&, const BarChart&);
template void emit_chart<BoxPlot>(const std::filesystem::path&, const std::string&, const BoxPlot&);

}  // namespace coevo::report
