#ifndef THZQS_SVG_HPP
#define THZQS_SVG_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace thzqs::svg {

struct Series {
  std::vector<double> x, y;
  std::string color = "#1f4e8c";
  double width = 1.2;
  bool points_only = false;
};

struct ChartSpec {
  std::string title, x_label, y_label;
  std::vector<Series> series;
};

std::string line_chart(const ChartSpec& spec);

/// Row-major matrix rendered as a grayscale cell map; extents are data
/// coordinates [x0, x1] x [y0, y1].
std::string heatmap(const std::vector<double>& values, std::size_t rows,
                    std::size_t cols, double x0, double x1, double y0,
                    double y1, const std::string& title,
                    const std::string& x_label, const std::string& y_label);

void save(const std::string& svg_text, const std::filesystem::path& path);

}  // namespace thzqs::svg

#endif
