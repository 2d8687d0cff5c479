// svg.cpp - tiny SVG chart writer used for plot artifacts.
#include "pwc3d/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pwc3d/errors.hpp"

namespace pwc3d::svg {
namespace {

constexpr int kMargin = 48;

std::ofstream open(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

}  // namespace

void write_line_chart(const std::filesystem::path& path, const std::vector<SeriesPlot>& series,
                      const std::string& x_label, const std::string& y_label, int width,
                      int height) {
    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;

    const double pw = width - 2 * kMargin, ph = height - 2 * kMargin;
    auto sx = [&](double x) { return kMargin + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return height - kMargin - (y - ymin) / (ymax - ymin) * ph; };

    std::ofstream out = open(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    out << "<rect x='" << kMargin << "' y='" << kMargin << "' width='" << pw << "' height='"
        << ph << "' fill='none' stroke='black'/>\n";
    out << "<text x='" << width / 2 << "' y='" << height - 10
        << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n";
    out << "<text x='14' y='" << height / 2 << "' text-anchor='middle' font-size='13' "
        << "transform='rotate(-90 14 " << height / 2 << ")'>" << y_label << "</text>\n";

    int legend_y = kMargin + 14;
    for (const auto& s : series) {
        std::ostringstream pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='"
            << pts.str() << "'/>\n";
        if (!s.label.empty()) {
            out << "<text x='" << width - kMargin - 4 << "' y='" << legend_y
                << "' text-anchor='end' font-size='12' fill='" << s.color << "'>" << s.label
                << "</text>\n";
            legend_y += 16;
        }
    }
    out << "</svg>\n";
}

void write_heat_strip(const std::filesystem::path& path,
                      const std::vector<std::vector<double>>& rows, const std::string& title,
                      int width, int height) {
    if (rows.empty()) throw InvalidInput("write_heat_strip: no rows");
    double vmin = std::numeric_limits<double>::max(), vmax = -vmin;
    std::size_t cols = 0;
    for (const auto& row : rows) {
        cols = std::max(cols, row.size());
        for (double v : row) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    }
    if (!(vmax > vmin)) vmax = vmin + 1.0;

    const double pw = width - 2 * kMargin, ph = height - 2 * kMargin;
    const double ch = ph / static_cast<double>(rows.size());
    std::ofstream out = open(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double cw = pw / static_cast<double>(std::max<std::size_t>(1, rows[r].size()));
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            const double t = (rows[r][c] - vmin) / (vmax - vmin);
            const int red = static_cast<int>(std::lround(255 * t));
            const int blue = static_cast<int>(std::lround(255 * (1.0 - t)));
            const int green = static_cast<int>(std::lround(255 * (1.0 - std::abs(2 * t - 1))));
            out << "<rect x='" << kMargin + static_cast<double>(c) * cw << "' y='"
                << kMargin + static_cast<double>(r) * ch << "' width='" << cw + 0.5
                << "' height='" << ch + 0.5 << "' fill='rgb(" << red << ',' << green << ','
                << blue << ")'/>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace pwc3d::svg
