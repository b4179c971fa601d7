#pragma once

#include <string>
#include <vector>

#include "simfix/trace.hpp"

namespace simfix {

struct FigureStyle {
    double width_px = 800.0;
    double margin = 0.10;  // fraction of the fitted extent added on each side
};

/// Renders a construction trace as a standalone SVG document.
///
/// Points named P, Q, R and P', Q', R' are joined into the source and image
/// triangles; the point "C" is drawn as the fixed point and a line named
/// "axis" as the reflection axis. Lines are clipped to the viewport, which
/// fits all trace points. The y axis points up.
std::string render_svg(const ConstructionTrace& trace, const std::string& title,
                       const FigureStyle& style = {});

// Label texts of every <text class="label"> element, in document order.
std::vector<std::string> svg_labels(const std::string& svg);

}  // namespace simfix
