#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "thzqs/errors.hpp"

namespace thzqs::svg {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 20, kTop = 36, kBottom = 52;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void grow(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double m = 0.04 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

std::vector<double> ticks(double lo, double hi, int target = 6) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * step;
       v += step)
    t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

void axes(std::ostringstream& out, const Range& rx, const Range& ry,
          const std::string& title, const std::string& x_label,
          const std::string& y_label) {
  const auto map_x = [&](double x) {
    return kLeft + (x - rx.lo) / (rx.hi - rx.lo) * (kWidth - kLeft - kRight);
  };
  const auto map_y = [&](double y) {
    return kHeight - kBottom -
           (y - ry.lo) / (ry.hi - ry.lo) * (kHeight - kTop - kBottom);
  };
  out << "<rect x='" << kLeft << "' y='" << kTop << "' width='"
      << kWidth - kLeft - kRight << "' height='" << kHeight - kTop - kBottom
      << "' fill='none' stroke='#444'/>\n";
  for (double t : ticks(rx.lo, rx.hi)) {
    const double px = map_x(t);
    out << "<line x1='" << px << "' y1='" << kHeight - kBottom << "' x2='"
        << px << "' y2='" << kHeight - kBottom + 5
        << "' stroke='#444'/>\n<text x='" << px << "' y='"
        << kHeight - kBottom + 18
        << "' font-size='11' text-anchor='middle'>" << num(t) << "</text>\n";
  }
  for (double t : ticks(ry.lo, ry.hi)) {
    const double py = map_y(t);
    out << "<line x1='" << kLeft - 5 << "' y1='" << py << "' x2='" << kLeft
        << "' y2='" << py << "' stroke='#444'/>\n<text x='" << kLeft - 8
        << "' y='" << py + 4 << "' font-size='11' text-anchor='end'>" << num(t)
        << "</text>\n";
  }
  out << "<text x='" << (kLeft + kWidth - kRight) / 2 << "' y='"
      << kHeight - 12 << "' font-size='13' text-anchor='middle'>" << x_label
      << "</text>\n";
  out << "<text x='16' y='" << (kTop + kHeight - kBottom) / 2
      << "' font-size='13' text-anchor='middle' transform='rotate(-90 16 "
      << (kTop + kHeight - kBottom) / 2 << ")'>" << y_label << "</text>\n";
  out << "<text x='" << kWidth / 2 << "' y='20' font-size='15' "
      << "text-anchor='middle'>" << title << "</text>\n";
}

}  // namespace

std::string line_chart(const ChartSpec& spec) {
  Range rx, ry;
  for (const auto& s : spec.series) {
    for (double v : s.x) rx.grow(v);
    for (double v : s.y) ry.grow(v);
  }
  rx.pad();
  ry.pad();

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
      << "' height='" << kHeight << "'>\n<rect width='100%' height='100%' "
      << "fill='white'/>\n";
  axes(out, rx, ry, spec.title, spec.x_label, spec.y_label);

  const auto map_x = [&](double x) {
    return kLeft + (x - rx.lo) / (rx.hi - rx.lo) * (kWidth - kLeft - kRight);
  };
  const auto map_y = [&](double y) {
    return kHeight - kBottom -
           (y - ry.lo) / (ry.hi - ry.lo) * (kHeight - kTop - kBottom);
  };
  for (const auto& s : spec.series) {
    if (s.points_only) {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        out << "<circle cx='" << num(map_x(s.x[i])) << "' cy='"
            << num(map_y(s.y[i])) << "' r='2.4' fill='" << s.color << "'/>\n";
      continue;
    }
    out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='"
        << s.width << "' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << num(map_x(s.x[i])) << "," << num(map_y(s.y[i])) << " ";
    out << "'/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string heatmap(const std::vector<double>& values, std::size_t rows,
                    std::size_t cols, double x0, double x1, double y0,
                    double y1, const std::string& title,
                    const std::string& x_label, const std::string& y_label) {
  if (values.size() != rows * cols)
    throw DomainError("svg::heatmap: matrix size mismatch");
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, v);
  if (peak <= 0.0) peak = 1.0;

  Range rx, ry;
  rx.grow(x0);
  rx.grow(x1);
  ry.grow(y0);
  ry.grow(y1);

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
      << "' height='" << kHeight << "'>\n<rect width='100%' height='100%' "
      << "fill='white'/>\n";

  const double cw = (kWidth - kLeft - kRight) / cols;
  const double ch = (kHeight - kTop - kBottom) / rows;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      // Dark background, bright signal; sqrt stretch for the faint tails.
      const int g = static_cast<int>(
          255.0 * std::sqrt(std::clamp(values[r * cols + c] / peak, 0.0, 1.0)));
      out << "<rect x='" << num(kLeft + c * cw) << "' y='"
          << num(kHeight - kBottom - (r + 1) * ch) << "' width='"
          << num(cw + 0.5) << "' height='" << num(ch + 0.5) << "' fill='rgb("
          << g << "," << g << "," << g << ")'/>\n";
    }
  }
  axes(out, rx, ry, title, x_label, y_label);
  out << "</svg>\n";
  return out.str();
}

void save(const std::string& svg_text, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << svg_text;
}

}  // namespace thzqs::svg
