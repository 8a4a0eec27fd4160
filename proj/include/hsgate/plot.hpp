#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hsgate {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "time (s)";
  std::string y_label = "normalized fluorescence";
  std::vector<PlotSeries> series;
  std::vector<double> event_times;                       ///< dashed vertical markers
  std::vector<std::pair<double, std::string>> phases;    ///< labelled boundaries
  int width = 900;
  int height = 420;
};

/// Standalone SVG document. Throws ValidationError when the x range is degenerate.
std::string render_svg(const PlotSpec& spec);

}  // namespace hsgate
