#pragma once

#include <string>
#include <vector>

#include "wirepoly/metrics.hpp"
#include "wirepoly/scene_io.hpp"

namespace wirepoly {

struct RenderOptions {
  int canvas = 800;      // square canvas edge, px
  double margin = 20.0;  // border kept clear around the unit square
};

// Deterministic SVG 1.1 picture of a scene: annotated planes and detection
// polygons as semi-transparent fills colored by label, wireframe lines as
// strokes, junctions as circles, plus a color legend. Identical inputs yield
// byte-identical output.
std::string render_svg(const Scene& scene, const std::vector<ScoredDetection>& detections = {},
                       const RenderOptions& options = {});

}  // namespace wirepoly
