#pragma once
// Static SVG charts from aggregate, trace and relaxation CSV files.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qa::plot {

enum class Kind { NVsG, NVsN, Trace, Relaxation };
Kind parse_kind(std::string_view name);

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
    std::vector<double> errors;  ///< optional symmetric y error bars
    bool analytic = false;       ///< drawn as a dashed line without markers
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
};

/// n-vs-g and n-vs-N read aggregate CSVs; trace reads t,n_bar,p0; relaxation reads
/// budget,eps_res with an optional mode column.
Chart build_chart(const std::vector<std::filesystem::path>& inputs, Kind kind);

std::string render_svg(const Chart& chart);

/// Builds and renders; nothing is written when the input holds no data.
void plot(const std::vector<std::filesystem::path>& inputs, Kind kind,
          const std::filesystem::path& out);

}  // namespace qa::plot
