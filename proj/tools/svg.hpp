#pragma once

#include <string>
#include <vector>

namespace abx::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

/** Polylines on a pair of labelled axes. Non-finite points are dropped. */
std::string render_svg(const Chart& chart);

void write_svg(const Chart& chart, const std::string& path);

}  // namespace abx::cli
