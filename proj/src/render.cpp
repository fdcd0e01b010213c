#include "wirepoly/render.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wirepoly {

namespace {

const char* fill_color(int label) {
  switch (label) {
    case 1: return "#4e79a7";  // wall
    case 2: return "#59a14f";  // floor
    case 3: return "#e15759";  // ceiling
    default: return "#888888"; // background
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const Scene& scene, const std::vector<ScoredDetection>& detections,
                       const RenderOptions& options) {
  if (options.canvas < 1) throw std::invalid_argument("render_svg: canvas must be >= 1");
  double span = options.canvas - 2.0 * options.margin;
  auto px = [&](Point2 p) {
    return Point2{options.margin + p.x * span, options.margin + p.y * span};
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.canvas
      << "\" height=\"" << options.canvas << "\" viewBox=\"0 0 " << options.canvas << " "
      << options.canvas << "\">\n";
  svg << "  <rect width=\"" << options.canvas << "\" height=\"" << options.canvas
      << "\" fill=\"#ffffff\"/>\n";

  auto emit_polygon = [&](const Polygon& poly, int label) {
    svg << "  <polygon points=\"";
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
      Point2 p = px(poly.vertices[i]);
      if (i) svg << " ";
      svg << fmt(p.x) << "," << fmt(p.y);
    }
    svg << "\" fill=\"" << fill_color(label) << "\" fill-opacity=\"0.35\" stroke=\""
        << fill_color(label) << "\" stroke-width=\"1.5\"/>\n";
  };

  for (const ScenePlane& plane : scene.planes) {
    emit_polygon(plane_annotation(scene, plane).polygon, static_cast<int>(plane.label));
  }
  for (const ScoredDetection& det : detections) {
    emit_polygon(det.polygon, predicted_label(det));
  }

  PositionMap positions = junction_positions(scene.wireframe);
  for (const LineSegment& line : scene.wireframe.lines) {
    Point2 a = px(positions.at(line.j1)), b = px(positions.at(line.j2));
    svg << "  <line x1=\"" << fmt(a.x) << "\" y1=\"" << fmt(a.y) << "\" x2=\"" << fmt(b.x)
        << "\" y2=\"" << fmt(b.y) << "\" stroke=\"#222222\" stroke-width=\"2\"/>\n";
  }
  for (const Junction& j : scene.wireframe.junctions) {
    Point2 p = px(j.position);
    bool proper = j.kind == JunctionKind::Proper;
    svg << "  <circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\"3\" fill=\""
        << (proper ? "#222222" : "#ffffff") << "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
  }

  const char* names[3] = {"wall", "floor", "ceiling"};
  for (int i = 0; i < 3; ++i) {
    double y = options.margin + 18.0 * i;
    svg << "  <rect x=\"" << fmt(options.margin) << "\" y=\"" << fmt(y)
        << "\" width=\"12\" height=\"12\" fill=\"" << fill_color(i + 1)
        << "\" fill-opacity=\"0.6\"/>\n";
    svg << "  <text x=\"" << fmt(options.margin + 16.0) << "\" y=\"" << fmt(y + 10.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\">" << names[i]
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace wirepoly
