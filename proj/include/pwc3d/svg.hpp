// svg.hpp - minimal SVG emission for line charts and heat strips.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pwc3d::svg {

struct SeriesPlot {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
};

/// Line chart with shared axes; axis ranges from the data.
void write_line_chart(const std::filesystem::path& path, const std::vector<SeriesPlot>& series,
                      const std::string& x_label, const std::string& y_label, int width = 720,
                      int height = 420);

/// Heat strip: one row per frame, one cell per sample, value mapped to a
/// blue-white-red ramp scaled to the data range.
void write_heat_strip(const std::filesystem::path& path,
                      const std::vector<std::vector<double>>& rows, const std::string& title,
                      int width = 720, int height = 420);

}  // namespace pwc3d::svg
