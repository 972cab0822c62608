#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace tfa {

// Minimal line-chart writer for run reports.
class SvgChart {
 public:
  struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> pts;
  };

  SvgChart(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)),
        ylabel_(std::move(ylabel)) {}

  void add_series(Series s) { series_.push_back(std::move(s)); }

  void write(const std::string& path) const {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series_)
      for (auto [x, y] : s.pts) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    if (xmin > xmax) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const int W = 640, H = 420, ML = 70, MR = 20, MT = 40, MB = 50;
    auto px = [&](double x) {
      return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
    };
    auto py = [&](double y) {
      return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB);
    };
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("svg: cannot open " + path);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
       << "' height='" << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' "
          "font-size='16'>" << title_ << "</text>\n";
    // axes
    os << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR
       << "' y2='" << H - MB << "' stroke='black'/>\n";
    os << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='"
       << H - MB << "' stroke='black'/>\n";
    os << "<text x='" << W / 2 << "' y='" << H - 12
       << "' text-anchor='middle' font-size='12'>" << xlabel_ << "</text>\n";
    os << "<text x='16' y='" << H / 2
       << "' font-size='12' transform='rotate(-90 16 " << H / 2 << ")'>"
       << ylabel_ << "</text>\n";
    for (int k = 0; k <= 4; ++k) {
      double x = xmin + (xmax - xmin) * k / 4.0;
      double y = ymin + (ymax - ymin) * k / 4.0;
      os << "<text x='" << px(x) << "' y='" << H - MB + 16
         << "' text-anchor='middle' font-size='10'>" << x << "</text>\n";
      os << "<text x='" << ML - 6 << "' y='" << py(y) + 4
         << "' text-anchor='end' font-size='10'>" << y << "</text>\n";
    }
    int li = 0;
    for (const auto& s : series_) {
      os << "<polyline fill='none' stroke='" << s.color << "' stroke-width='2' points='";
      for (auto [x, y] : s.pts) os << px(x) << "," << py(y) << " ";
      os << "'/>\n";
      for (auto [x, y] : s.pts)
        os << "<circle cx='" << px(x) << "' cy='" << py(y)
           << "' r='3' fill='" << s.color << "'/>\n";
      os << "<text x='" << W - MR - 8 << "' y='" << MT + 14 * (li + 1)
         << "' text-anchor='end' font-size='11' fill='" << s.color << "'>"
         << s.label << "</text>\n";
      ++li;
    }
    os << "</svg>\n";
  }

 private:
  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
};

}  // namespace tfa
