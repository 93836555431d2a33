#pragma once

#include <string>
#include <vector>

// Minimal SVG line charts; enough for sweep diagnostics.

namespace thinring::svg {

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool markers = true;
};

struct Chart {
  std::string title;
  std::string x_label, y_label;
  bool log_x = false;
  bool equal_aspect = false;
  std::vector<Series> series;
};

std::string render(const Chart& chart);
void write(const std::string& path, const Chart& chart);

}  // namespace thinring::svg
