#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "coevo/pipeline/csv.hpp"
#include "coevo/stats/robust.hpp"

namespace coevo::report {

struct Series {
    std::string name;
    std::vector<double> values;
    std::string color;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<Series> series;  // each parallel to x
};

struct Bar {
    std::string label;
    double value = 0.0;
    double low = 0.0;
    double high = 0.0;
};

// Horizontal bars drawn from `baseline`, with interval whiskers.
struct BarChart {
    std::string title;
    std::string value_label;
    double baseline = 1.0;
    std::vector<Bar> bars;
};

struct BoxGroup {
    std::string label;
    std::size_t n = 0;
    stats::FiveNumberSummary summary;
};

struct BoxPlot {
    std::string title;
    std::string y_label;
    std::vector<BoxGroup> groups;
};

std::string render_svg(const LineChart& chart);
std::string render_svg(const BarChart& chart);
std::string render_svg(const BoxPlot& chart);

// The numbers each chart plots, one row per point, bar or box.
pipeline::CsvTable chart_data(const LineChart& chart);
pipeline::CsvTable chart_data(const BarChart& chart);
pipeline::CsvTable chart_data(const BoxPlot& chart);

// Writes <stem>.svg and <stem>.csv side by side.
template <class Chart>
void emit_chart(const std::filesystem::path& dir, const std::string& stem, const Chart& chart);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace coevo::report
