#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stein_pairs::svg {

struct LogLogPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;  // positive
  std::vector<double> y;  // positive
  std::optional<double> slope;  // fitted slope, drawn as a dashed line and annotated
};

// Self-contained SVG document. Deterministic for identical input.
std::string render(const LogLogPlot& plot);

}  // namespace stein_pairs::svg
