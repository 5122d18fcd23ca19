#pragma once

#include <string>
#include <vector>

#include "invis/billiard.hpp"

namespace invis {

// One traced ray prepared for drawing: the probe ray plus its trace.
struct TraceView {
    Ray2 entry;
    TraceResult trace;
};

struct RenderOptions {
    double width = 900.0;       // svg pixel width; the height follows the scene
    double margin = 0.06;       // padding around the scene, fraction of its larger side
    double sagitta_frac = 1e-3; // arc flattening tolerance, fraction of the view diagonal
    bool labels = true;         // draw the named construction points
    bool fill_quads = true;
};

// Polyline approximation of the arc whose chords sag at most tol from the
// curve (endpoints included).
std::vector<Point2> flatten_arc(const ConicArc& arc, double tol);

// Standalone SVG of the construction and any traced rays. The output is a
// pure function of the inputs, byte for byte.
std::string render_svg(const Body2D& body, const std::vector<TraceView>& traces = {},
                       const RenderOptions& opts = {});

} // namespace invis
