#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wirepoly/matching.hpp"
#include "wirepoly/metrics.hpp"
#include "wirepoly/optimize.hpp"
#include "wirepoly/wireframe.hpp"

namespace wirepoly {

// Input that fails schema or referential-integrity validation.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenePlane {
  int id = 0;
  std::vector<int> line_ids;  // unordered edge set; must close into a simple polygon
  PlaneLabel label = PlaneLabel::Wall;
};

struct Scene {
  Wireframe wireframe;
  std::vector<ScenePlane> planes;
};

// "wall", "floor", "ceiling"
std::string label_name(PlaneLabel label);
std::optional<PlaneLabel> label_from_name(const std::string& name);

// Scene JSON:
//   {"junctions": [{"id", "x", "y", "kind"}],
//    "lines": [{"id", "j1", "j2"}],
//    "planes": [{"id", "line_ids": [...], "label": "wall|floor|ceiling"}]}
// kind is "proper" or "false"; "planes" may be absent. Validates id
// uniqueness, referential integrity, coordinates in [0,1], and that each
// plane's lines close into a simple polygon.
Scene parse_scene(const std::string& json_text);
std::string serialize_scene(const Scene& scene);
Scene load_scene(const std::filesystem::path& path);
void save_scene(const Scene& scene, const std::filesystem::path& path);

// Annotation view of a plane: vertices in cycle order with line_ids[i]
// joining vertex i to i+1, centroid filled in.
PlaneAnnotation plane_annotation(const Scene& scene, const ScenePlane& plane);
std::vector<PlaneAnnotation> plane_annotations(const Scene& scene);

// Detection JSON: {"detections": [{"polygon": [[x,y],...], "scores": [b,w,f,c]}]}
std::vector<ScoredDetection> parse_detections(const std::string& json_text);
std::string serialize_detections(const std::vector<ScoredDetection>& dets);
std::vector<ScoredDetection> load_detections(const std::filesystem::path& path);
void save_detections(const std::vector<ScoredDetection>& dets, const std::filesystem::path& path);

// Proposals JSON: {"proposals": [null | {"polygon", "avg_weight", "line_ids"}]},
// one entry per anchor.
std::string serialize_proposals(const std::vector<std::optional<Proposal>>& proposals);

// Report JSON with all metric values as percentages rounded to 2 decimals.
std::string serialize_report(const EvalReport& report);
EvalReport parse_report(const std::string& json_text);

// Enumerated-polygon JSON: {"polygons": [{"vertices": [[x,y],...], "vertex_ids": [...]}]}
std::string serialize_polygons(const std::vector<Polygon>& polygons);

// Oracle end of the pipeline: propose_all on oracle scores, labeled by the
// plane matched to each anchor, class score 1 - avg_weight (clamped away
// from ties), remaining mass spread over the other classes. The wireframe
// may be a noisy detection; annotations stay the clean ground truth.
std::vector<ScoredDetection> oracle_detections(const Wireframe& wireframe,
                                               const std::vector<PlaneAnnotation>& annotations,
                                               const ProposalConfig& config = {});
std::vector<ScoredDetection> oracle_detections(const Scene& scene, const ProposalConfig& config = {});

// Pairs gt and prediction files by stem (*.json in each directory), parses
// them, and runs the evaluation pipeline. Throws ParseError when the stem
// sets differ or any file fails to parse.
EvalReport run_evaluation(const std::filesystem::path& gt_dir, const std::filesystem::path& pred_dir,
                          const EvalConfig& config);

struct ConvertResult {
  Scene scene;
  std::vector<std::string> warnings;  // skipped planes etc.
};

// Converter for raw layout annotations: junctions as [x, y] pairs or
// {"ID", "coordinate"} objects in pixel units, planes as {"type"|"label",
// "polygon"|"visible_polygon": [junction indices in cycle order]}, optional
// "image_size": [w, h] (default 1280x720). Planes with labels other than
// wall/floor/ceiling or with non-simple polygons are skipped with a warning.
ConvertResult convert_structured3d(const std::string& json_text);

}  // namespace wirepoly
