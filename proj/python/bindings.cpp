#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

#include "wirepoly/enumerate.hpp"
#include "wirepoly/geometry.hpp"
#include "wirepoly/matching.hpp"
#include "wirepoly/metrics.hpp"
#include "wirepoly/optimize.hpp"
#include "wirepoly/render.hpp"
#include "wirepoly/scene_io.hpp"
#include "wirepoly/synth.hpp"
#include "wirepoly/wireframe.hpp"

namespace py = pybind11;

namespace {

using namespace wirepoly;

using PyPoint = std::pair<double, double>;
using PyPolygon = std::vector<PyPoint>;
using PyDetection = std::pair<PyPolygon, std::array<double, 4>>;

Polygon to_polygon(const PyPolygon& pts) {
  Polygon p;
  p.vertices.reserve(pts.size());
  for (auto [x, y] : pts) p.vertices.push_back({x, y});
  return p;
}

PyPolygon from_polygon(const Polygon& p) {
  PyPolygon out;
  out.reserve(p.vertices.size());
  for (Point2 v : p.vertices) out.emplace_back(v.x, v.y);
  return out;
}

std::vector<ScoredDetection> to_detections(const std::vector<PyDetection>& dets) {
  std::vector<ScoredDetection> out;
  out.reserve(dets.size());
  for (const auto& [poly, scores] : dets) out.push_back({to_polygon(poly), scores});
  return out;
}

std::vector<PyDetection> from_detections(const std::vector<ScoredDetection>& dets) {
  std::vector<PyDetection> out;
  out.reserve(dets.size());
  for (const ScoredDetection& d : dets) out.emplace_back(from_polygon(d.polygon), d.scores);
  return out;
}

ProposalConfig make_config(double kappa, std::optional<int> iterations) {
  ProposalConfig config;
  config.kappa = kappa;
  config.iterations = iterations;
  return config;
}

py::object proposal_to_py(const std::optional<Proposal>& p) {
  if (!p) return py::none();
  return py::make_tuple(from_polygon(p->polygon), p->avg_weight, p->line_ids);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wireframe room-layout polygon detection core";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<LimitExceeded>(m, "LimitExceeded", PyExc_RuntimeError);

  py::class_<Scene>(m, "Scene")
      .def_property_readonly("num_junctions",
                             [](const Scene& s) { return s.wireframe.junctions.size(); })
      .def_property_readonly("num_lines", [](const Scene& s) { return s.wireframe.lines.size(); })
      .def_property_readonly("num_planes", [](const Scene& s) { return s.planes.size(); })
      .def("to_json", &serialize_scene)
      .def("__repr__", [](const Scene& s) {
        return "Scene(junctions=" + std::to_string(s.wireframe.junctions.size()) +
               ", lines=" + std::to_string(s.wireframe.lines.size()) +
               ", planes=" + std::to_string(s.planes.size()) + ")";
      });

  m.def("parse_scene", &parse_scene, py::arg("json_text"), "Parse and validate scene JSON");
  m.def("scene_to_json", &serialize_scene, py::arg("scene"));

  m.def(
      "polygon_is_simple", [](const PyPolygon& pts) { return polygon_is_simple(to_polygon(pts)); },
      py::arg("polygon"));
  m.def(
      "polygon_area", [](const PyPolygon& pts) { return polygon_area(to_polygon(pts)); },
      py::arg("polygon"));
  m.def(
      "polygon_centroid",
      [](const PyPolygon& pts) {
        Point2 c = polygon_centroid(to_polygon(pts));
        return PyPoint{c.x, c.y};
      },
      py::arg("polygon"));
  m.def(
      "polygon_iou",
      [](const PyPolygon& a, const PyPolygon& b, int resolution) {
        return polygon_iou(to_polygon(a), to_polygon(b), resolution);
      },
      py::arg("a"), py::arg("b"), py::arg("resolution") = 256);
  m.def(
      "line_distance",
      [](PyPoint u, PyPoint v, PyPoint uh, PyPoint vh) {
        return line_distance({{u.first, u.second}, {v.first, v.second}},
                             {{uh.first, uh.second}, {vh.first, vh.second}});
      },
      py::arg("u"), py::arg("v"), py::arg("u_hat"), py::arg("v_hat"),
      "Minimum over the two endpoint pairings of summed squared distances");

  m.def("anchor_grid", [] {
    std::vector<PyPoint> out;
    for (Point2 p : anchor_grid()) out.emplace_back(p.x, p.y);
    return out;
  });

  m.def(
      "enumerate_polygons",
      [](const Scene& scene, int max_polygons, int max_subset) {
        PlaneGraph graph = build_graph(scene.wireframe);
        PositionMap positions = junction_positions(scene.wireframe);
        EnumerationLimits limits{max_polygons, max_subset};
        std::vector<PyPolygon> out;
        for (const PlaneGraph& comp : connected_subgraphs(graph)) {
          for (const Polygon& poly : enumerate_polygons(comp, positions, limits)) {
            out.push_back(from_polygon(poly));
            if (static_cast<int>(out.size()) > max_polygons) {
              throw LimitExceeded("enumerate_polygons: polygon count limit exceeded",
                                  static_cast<std::int64_t>(out.size()));
            }
          }
        }
        return out;
      },
      py::arg("scene"), py::arg("max_polygons") = 10000, py::arg("max_subset") = 12,
      "All simple polygons of the scene's wireframe, every component");

  m.def(
      "propose",
      [](const Scene& scene, const std::vector<std::map<int, double>>& scores, double kappa,
         std::optional<int> iterations) {
        py::list out;
        for (const auto& p : propose_all(scene.wireframe, scores, make_config(kappa, iterations))) {
          out.append(proposal_to_py(p));
        }
        return out;
      },
      py::arg("scene"), py::arg("scores"), py::arg("kappa") = 0.5,
      py::arg("iterations") = py::none(),
      "Per-anchor proposals as (polygon, avg_weight, line_ids) or None");

  m.def(
      "oracle_scores",
      [](const Scene& scene, double alpha) {
        return oracle_scores(scene.wireframe, plane_annotations(scene), anchor_grid(), alpha);
      },
      py::arg("scene"), py::arg("alpha") = 0.01);

  m.def(
      "oracle_detections",
      [](const Scene& scene, double kappa, std::optional<int> iterations) {
        return from_detections(oracle_detections(scene, make_config(kappa, iterations)));
      },
      py::arg("scene"), py::arg("kappa") = 0.5, py::arg("iterations") = py::none(),
      "Labeled detections from the oracle-score pipeline, as (polygon, scores) pairs");

  m.def(
      "generate_synthetic",
      [](const Scene& scene, double sigma, double drop_prob, double spurious_prob,
         std::uint64_t seed) {
        SynthConfig config{sigma, drop_prob, spurious_prob, seed};
        Scene out;
        out.wireframe = generate_synthetic(scene.wireframe, config);
        return out;
      },
      py::arg("scene"), py::arg("sigma") = 0.005, py::arg("drop_prob") = 0.0,
      py::arg("spurious_prob") = 0.0, py::arg("seed") = 0);

  m.def(
      "nms",
      [](const std::vector<PyDetection>& dets, double iou_threshold, int resolution) {
        return from_detections(nms(to_detections(dets), iou_threshold, resolution));
      },
      py::arg("detections"), py::arg("iou_threshold") = 0.05, py::arg("resolution") = 256);

  m.def(
      "detections_to_json",
      [](const std::vector<PyDetection>& dets) { return serialize_detections(to_detections(dets)); },
      py::arg("detections"));
  m.def(
      "detections_from_json",
      [](const std::string& text) { return from_detections(parse_detections(text)); },
      py::arg("json_text"));

  m.def(
      "evaluate_dirs",
      [](const std::string& gt_dir, const std::string& pred_dir, int resolution, double nms_iou) {
        EvalConfig config;
        config.resolution = resolution;
        config.nms_iou = nms_iou;
        return serialize_report(run_evaluation(gt_dir, pred_dir, config));
      },
      py::arg("gt_dir"), py::arg("pred_dir"), py::arg("resolution") = 512,
      py::arg("nms_iou") = 0.05, py::call_guard<py::gil_scoped_release>(),
      "Evaluate matching-stem scene/detection directories; returns report JSON");

  m.def(
      "render_svg",
      [](const Scene& scene, const std::vector<PyDetection>& dets, int canvas) {
        RenderOptions options;
        options.canvas = canvas;
        return render_svg(scene, to_detections(dets), options);
      },
      py::arg("scene"), py::arg("detections") = std::vector<PyDetection>{},
      py::arg("canvas") = 800);
}
