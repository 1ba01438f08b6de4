#pragma once

// Minimal SVG emitter: side-by-side panels of polylines with a framed axis box,
// and a cell heat map. Output is fully deterministic for identical input.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace skewflow::cli {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string color{"#1f77b4"};
  double width{1.0};
  bool markers{false};
};

struct Panel {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<Series> series;
  bool equal_aspect{false};
  std::optional<double> xmin, xmax, ymin, ymax;
};

struct HeatMap {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<double> values;  ///< row-major
};

/// Long series are thinned to at most this many vertices.
inline constexpr std::size_t kMaxVertices = 4000;

std::string render_panels(const std::vector<Panel>& panels, const std::string& title = {},
                          double panel_width = 320.0, double panel_height = 320.0);

std::string render_heatmap(const HeatMap& map, double width = 480.0, double height = 360.0);

/// Fixed palette used for successive series.
const std::string& palette(std::size_t i);

}  // namespace skewflow::cli
