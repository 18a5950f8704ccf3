#pragma once

#include <string>
#include <vector>

namespace qbm::app {

struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Self-contained SVG line chart (no external tooling); a convenience output,
/// not an acceptance artifact.
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series);

}  // namespace qbm::app
