#include "wirepoly/scene_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wirepoly/synth.hpp"

namespace wirepoly {

namespace {

using Json = nlohmann::ordered_json;

Json parse_json(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

double require_coord(const Json& obj, const char* field, const char* ctx) {
  if (!obj.contains(field) || !obj[field].is_number()) {
    throw ParseError(std::string(ctx) + ": missing numeric field '" + field + "'");
  }
  double v = obj[field].get<double>();
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ParseError(std::string(ctx) + ": field '" + field + "' = " + std::to_string(v) +
                     " outside [0, 1]");
  }
  return v;
}

int require_int(const Json& obj, const char* field, const char* ctx) {
  if (!obj.contains(field) || !obj[field].is_number_integer()) {
    throw ParseError(std::string(ctx) + ": missing integer field '" + field + "'");
  }
  return obj[field].get<int>();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

double percent2(double v) { return std::round(v * 10000.0) / 100.0; }

}  // namespace

std::string label_name(PlaneLabel label) {
  switch (label) {
    case PlaneLabel::Wall: return "wall";
    case PlaneLabel::Floor: return "floor";
    case PlaneLabel::Ceiling: return "ceiling";
  }
  return "wall";
}

std::optional<PlaneLabel> label_from_name(const std::string& name) {
  if (name == "wall") return PlaneLabel::Wall;
  if (name == "floor") return PlaneLabel::Floor;
  if (name == "ceiling") return PlaneLabel::Ceiling;
  return std::nullopt;
}

Scene parse_scene(const std::string& json_text) {
  Json doc = parse_json(json_text, "scene");
  if (!doc.is_object()) throw ParseError("scene: top level must be an object");
  if (!doc.contains("junctions") || !doc["junctions"].is_array()) {
    throw ParseError("scene: missing 'junctions' array");
  }
  if (!doc.contains("lines") || !doc["lines"].is_array()) {
    throw ParseError("scene: missing 'lines' array");
  }

  Scene scene;
  std::set<int> junction_ids;
  for (std::size_t i = 0; i < doc["junctions"].size(); ++i) {
    const Json& j = doc["junctions"][i];
    std::string ctx = "scene.junctions[" + std::to_string(i) + "]";
    if (!j.is_object()) throw ParseError(ctx + ": must be an object");
    Junction junction;
    junction.id = require_int(j, "id", ctx.c_str());
    junction.position = {require_coord(j, "x", ctx.c_str()), require_coord(j, "y", ctx.c_str())};
    std::string kind = j.value("kind", "proper");
    if (kind == "proper") {
      junction.kind = JunctionKind::Proper;
    } else if (kind == "false") {
      junction.kind = JunctionKind::False;
    } else {
      throw ParseError(ctx + ": kind must be 'proper' or 'false', got '" + kind + "'");
    }
    if (!junction_ids.insert(junction.id).second) {
      throw ParseError(ctx + ": duplicate junction id " + std::to_string(junction.id));
    }
    scene.wireframe.junctions.push_back(junction);
  }

  std::set<int> line_ids;
  for (std::size_t i = 0; i < doc["lines"].size(); ++i) {
    const Json& l = doc["lines"][i];
    std::string ctx = "scene.lines[" + std::to_string(i) + "]";
    if (!l.is_object()) throw ParseError(ctx + ": must be an object");
    LineSegment line;
    line.id = require_int(l, "id", ctx.c_str());
    line.j1 = require_int(l, "j1", ctx.c_str());
    line.j2 = require_int(l, "j2", ctx.c_str());
    if (!line_ids.insert(line.id).second) {
      throw ParseError(ctx + ": duplicate line id " + std::to_string(line.id));
    }
    if (!junction_ids.count(line.j1) || !junction_ids.count(line.j2)) {
      throw ParseError(ctx + ": references unknown junction");
    }
    if (line.j1 == line.j2) throw ParseError(ctx + ": degenerate line (j1 == j2)");
    scene.wireframe.lines.push_back(line);
  }

  if (doc.contains("planes")) {
    if (!doc["planes"].is_array()) throw ParseError("scene: 'planes' must be an array");
    std::set<int> plane_ids;
    for (std::size_t i = 0; i < doc["planes"].size(); ++i) {
      const Json& p = doc["planes"][i];
      std::string ctx = "scene.planes[" + std::to_string(i) + "]";
      if (!p.is_object()) throw ParseError(ctx + ": must be an object");
      ScenePlane plane;
      plane.id = require_int(p, "id", ctx.c_str());
      if (!plane_ids.insert(plane.id).second) {
        throw ParseError(ctx + ": duplicate plane id " + std::to_string(plane.id));
      }
      if (!p.contains("line_ids") || !p["line_ids"].is_array() || p["line_ids"].empty()) {
        throw ParseError(ctx + ": missing nonempty 'line_ids' array");
      }
      for (const Json& v : p["line_ids"]) {
        if (!v.is_number_integer()) throw ParseError(ctx + ": line_ids must be integers");
        int id = v.get<int>();
        if (!line_ids.count(id)) throw ParseError(ctx + ": unknown line id " + std::to_string(id));
        plane.line_ids.push_back(id);
      }
      std::string label = p.value("label", "");
      auto parsed = label_from_name(label);
      if (!parsed) throw ParseError(ctx + ": label must be wall/floor/ceiling, got '" + label + "'");
      plane.label = *parsed;
      scene.planes.push_back(std::move(plane));
    }
    for (const ScenePlane& plane : scene.planes) {
      plane_annotation(scene, plane);  // validates closure into a simple polygon
    }
  }
  return scene;
}

std::string serialize_scene(const Scene& scene) {
  Json doc;
  doc["junctions"] = Json::array();
  for (const Junction& j : scene.wireframe.junctions) {
    doc["junctions"].push_back({{"id", j.id},
                                {"x", j.position.x},
                                {"y", j.position.y},
                                {"kind", j.kind == JunctionKind::Proper ? "proper" : "false"}});
  }
  doc["lines"] = Json::array();
  for (const LineSegment& l : scene.wireframe.lines) {
    doc["lines"].push_back({{"id", l.id}, {"j1", l.j1}, {"j2", l.j2}});
  }
  if (!scene.planes.empty()) {
    doc["planes"] = Json::array();
    for (const ScenePlane& p : scene.planes) {
      doc["planes"].push_back({{"id", p.id}, {"line_ids", p.line_ids}, {"label", label_name(p.label)}});
    }
  }
  return doc.dump(2) + "\n";
}

Scene load_scene(const std::filesystem::path& path) {
  try {
    return parse_scene(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  write_file(path, serialize_scene(scene));
}

PlaneAnnotation plane_annotation(const Scene& scene, const ScenePlane& plane) {
  PositionMap positions = junction_positions(scene.wireframe);
  std::map<int, LineSegment> lines_by_id;
  for (const LineSegment& l : scene.wireframe.lines) lines_by_id[l.id] = l;

  PlaneGraph g;
  std::map<std::pair<int, int>, int> line_by_pair;
  for (int id : plane.line_ids) {
    auto it = lines_by_id.find(id);
    if (it == lines_by_id.end()) {
      throw ParseError("plane " + std::to_string(plane.id) + ": unknown line id " + std::to_string(id));
    }
    g.add_vertex(it->second.j1);
    g.add_vertex(it->second.j2);
    g.add_edge(id, it->second.j1, it->second.j2);
    line_by_pair[{std::min(it->second.j1, it->second.j2), std::max(it->second.j1, it->second.j2)}] = id;
  }
  std::vector<int> sorted_ids = plane.line_ids;
  std::sort(sorted_ids.begin(), sorted_ids.end());
  auto order = cycle_vertex_order(g, sorted_ids);
  if (!order) {
    throw ParseError("plane " + std::to_string(plane.id) + ": line_ids do not close into a single cycle");
  }

  PlaneAnnotation ann;
  ann.polygon = polygon_from_vertex_seq(*order, positions);
  if (!polygon_is_simple(ann.polygon)) {
    throw ParseError("plane " + std::to_string(plane.id) + ": polygon is not simple");
  }
  ann.centroid = polygon_centroid(ann.polygon);
  ann.label = plane.label;
  std::size_t n = order->size();
  for (std::size_t i = 0; i < n; ++i) {
    int a = (*order)[i], b = (*order)[(i + 1) % n];
    ann.line_ids.push_back(line_by_pair.at({std::min(a, b), std::max(a, b)}));
  }
  return ann;
}

std::vector<PlaneAnnotation> plane_annotations(const Scene& scene) {
  std::vector<PlaneAnnotation> out;
  out.reserve(scene.planes.size());
  for (const ScenePlane& plane : scene.planes) out.push_back(plane_annotation(scene, plane));
  return out;
}

std::vector<ScoredDetection> parse_detections(const std::string& json_text) {
  Json doc = parse_json(json_text, "detections");
  if (!doc.is_object() || !doc.contains("detections") || !doc["detections"].is_array()) {
    throw ParseError("detections: missing 'detections' array");
  }
  std::vector<ScoredDetection> out;
  for (std::size_t i = 0; i < doc["detections"].size(); ++i) {
    const Json& d = doc["detections"][i];
    std::string ctx = "detections[" + std::to_string(i) + "]";
    if (!d.is_object() || !d.contains("polygon") || !d["polygon"].is_array() ||
        !d.contains("scores") || !d["scores"].is_array()) {
      throw ParseError(ctx + ": needs 'polygon' and 'scores' arrays");
    }
    ScoredDetection det;
    for (const Json& v : d["polygon"]) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ParseError(ctx + ": polygon entries must be [x, y]");
      }
      det.polygon.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    if (!polygon_is_simple(det.polygon)) throw ParseError(ctx + ": polygon is not simple");
    if (d["scores"].size() != 4) throw ParseError(ctx + ": scores must have 4 entries");
    double sum = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      if (!d["scores"][c].is_number()) throw ParseError(ctx + ": scores must be numeric");
      det.scores[c] = d["scores"][c].get<double>();
      if (det.scores[c] < 0.0 || det.scores[c] > 1.0) {
        throw ParseError(ctx + ": score outside [0, 1]");
      }
      sum += det.scores[c];
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ParseError(ctx + ": scores sum to " + std::to_string(sum) + ", expected 1");
    }
    out.push_back(std::move(det));
  }
  return out;
}

std::string serialize_detections(const std::vector<ScoredDetection>& dets) {
  Json doc;
  doc["detections"] = Json::array();
  for (const ScoredDetection& d : dets) {
    Json poly = Json::array();
    for (const Point2& p : d.polygon.vertices) poly.push_back({p.x, p.y});
    doc["detections"].push_back(
        {{"polygon", poly}, {"scores", {d.scores[0], d.scores[1], d.scores[2], d.scores[3]}}});
  }
  return doc.dump(2) + "\n";
}

std::vector<ScoredDetection> load_detections(const std::filesystem::path& path) {
  try {
    return parse_detections(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_detections(const std::vector<ScoredDetection>& dets, const std::filesystem::path& path) {
  write_file(path, serialize_detections(dets));
}

std::string serialize_proposals(const std::vector<std::optional<Proposal>>& proposals) {
  Json doc;
  doc["proposals"] = Json::array();
  for (const auto& p : proposals) {
    if (!p) {
      doc["proposals"].push_back(nullptr);
      continue;
    }
    Json poly = Json::array();
    for (const Point2& v : p->polygon.vertices) poly.push_back({v.x, v.y});
    doc["proposals"].push_back(
        {{"polygon", poly}, {"avg_weight", p->avg_weight}, {"line_ids", p->line_ids}});
  }
  return doc.dump(2) + "\n";
}

std::string serialize_report(const EvalReport& report) {
  Json doc;
  doc["aggregate"] = {{"eps_iou", percent2(report.eps_iou_mean)},
                      {"eps_pe", percent2(report.eps_pe_mean)},
                      {"mpap_m", percent2(report.ap.mpap_m)}};
  Json pap = Json::object();
  Json per_gamma = Json::object();
  for (PlaneLabel cls : {PlaneLabel::Wall, PlaneLabel::Floor, PlaneLabel::Ceiling}) {
    pap[label_name(cls)] = percent2(report.ap.pap_m.at(cls));
    Json arr = Json::array();
    for (double v : report.ap.per_gamma.at(cls)) arr.push_back(percent2(v));
    per_gamma[label_name(cls)] = arr;
  }
  doc["aggregate"]["pap_m"] = pap;
  Json gammas = Json::array();
  for (double g : ap_gammas()) gammas.push_back(g);
  doc["ap_gammas"] = gammas;
  doc["ap_per_gamma"] = per_gamma;
  doc["per_image"] = Json::array();
  for (const PerImageMetrics& m : report.per_image) {
    doc["per_image"].push_back({{"id", m.image_id},
                                {"eps_iou", percent2(m.eps_iou)},
                                {"eps_pe", percent2(m.eps_pe)},
                                {"num_gt", m.num_gt},
                                {"num_pred", m.num_pred}});
  }
  return doc.dump(2) + "\n";
}

EvalReport parse_report(const std::string& json_text) {
  Json doc = parse_json(json_text, "report");
  EvalReport report;
  try {
    report.eps_iou_mean = doc.at("aggregate").at("eps_iou").get<double>() / 100.0;
    report.eps_pe_mean = doc.at("aggregate").at("eps_pe").get<double>() / 100.0;
    report.ap.mpap_m = doc.at("aggregate").at("mpap_m").get<double>() / 100.0;
    for (PlaneLabel cls : {PlaneLabel::Wall, PlaneLabel::Floor, PlaneLabel::Ceiling}) {
      report.ap.pap_m[cls] = doc.at("aggregate").at("pap_m").at(label_name(cls)).get<double>() / 100.0;
      std::array<double, 10> arr{};
      const Json& src = doc.at("ap_per_gamma").at(label_name(cls));
      if (!src.is_array() || src.size() != 10) throw ParseError("report: ap_per_gamma needs 10 entries");
      for (std::size_t i = 0; i < 10; ++i) arr[i] = src[i].get<double>() / 100.0;
      report.ap.per_gamma[cls] = arr;
    }
    for (const Json& m : doc.at("per_image")) {
      PerImageMetrics pm;
      pm.image_id = m.at("id").get<std::string>();
      pm.eps_iou = m.at("eps_iou").get<double>() / 100.0;
      pm.eps_pe = m.at("eps_pe").get<double>() / 100.0;
      pm.num_gt = m.at("num_gt").get<int>();
      pm.num_pred = m.at("num_pred").get<int>();
      report.per_image.push_back(std::move(pm));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return report;
}

std::string serialize_polygons(const std::vector<Polygon>& polygons) {
  Json doc;
  doc["polygons"] = Json::array();
  for (const Polygon& poly : polygons) {
    Json verts = Json::array();
    for (const Point2& p : poly.vertices) verts.push_back({p.x, p.y});
    Json entry = {{"vertices", verts}};
    if (!poly.vertex_ids.empty()) entry["vertex_ids"] = poly.vertex_ids;
    doc["polygons"].push_back(entry);
  }
  return doc.dump(2) + "\n";
}

std::vector<ScoredDetection> oracle_detections(const Wireframe& wireframe,
                                               const std::vector<PlaneAnnotation>& annotations,
                                               const ProposalConfig& config) {
  AnchorGrid anchors = anchor_grid();
  std::vector<std::optional<Proposal>> proposals =
      propose_all(wireframe, oracle_scores(wireframe, annotations, anchors), config);

  std::vector<Point2> anchor_points(anchors.begin(), anchors.end());
  std::vector<Point2> centroids;
  centroids.reserve(annotations.size());
  for (const PlaneAnnotation& a : annotations) centroids.push_back(a.centroid);
  MatchResult anchor_match = match_centroids(anchor_points, centroids, std::nullopt);
  std::map<int, int> plane_by_anchor;
  for (auto [gt, pred] : anchor_match.pairs) plane_by_anchor[pred] = gt;

  std::vector<ScoredDetection> dets;
  for (std::size_t k = 0; k < proposals.size(); ++k) {
    if (!proposals[k]) continue;
    auto it = plane_by_anchor.find(static_cast<int>(k));
    if (it == plane_by_anchor.end()) continue;
    auto label = static_cast<std::size_t>(annotations[static_cast<std::size_t>(it->second)].label);
    double p = std::clamp(1.0 - proposals[k]->avg_weight, 0.4, 1.0 - 1e-9);
    ScoredDetection det;
    det.polygon = proposals[k]->polygon;
    for (std::size_t c = 0; c < 4; ++c) det.scores[c] = (1.0 - p) / 3.0;
    det.scores[label] = p;
    dets.push_back(std::move(det));
  }
  return dets;
}

std::vector<ScoredDetection> oracle_detections(const Scene& scene, const ProposalConfig& config) {
  return oracle_detections(scene.wireframe, plane_annotations(scene), config);
}

EvalReport run_evaluation(const std::filesystem::path& gt_dir, const std::filesystem::path& pred_dir,
                          const EvalConfig& config) {
  auto list_stems = [](const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw ParseError(dir.string() + ": not a directory");
    std::vector<std::string> stems;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        stems.push_back(entry.path().stem().string());
      }
    }
    std::sort(stems.begin(), stems.end());
    return stems;
  };
  std::vector<std::string> gt_stems = list_stems(gt_dir);
  std::vector<std::string> pred_stems = list_stems(pred_dir);
  if (gt_stems != pred_stems) {
    throw ParseError("evaluation: file stems differ between " + gt_dir.string() + " and " +
                     pred_dir.string());
  }

  std::vector<EvalImage> images;
  images.reserve(gt_stems.size());
  for (const std::string& stem : gt_stems) {
    EvalImage img;
    img.id = stem;
    Scene scene = load_scene(gt_dir / (stem + ".json"));
    for (const PlaneAnnotation& ann : plane_annotations(scene)) {
      img.gt.emplace_back(ann.polygon, ann.label);
    }
    img.detections = load_detections(pred_dir / (stem + ".json"));
    images.push_back(std::move(img));
  }
  return evaluate_scenes(images, config);
}

ConvertResult convert_structured3d(const std::string& json_text) {
  Json doc = parse_json(json_text, "structured3d");
  if (!doc.is_object()) throw ParseError("structured3d: top level must be an object");
  double width = 1280.0, height = 720.0;
  if (doc.contains("image_size")) {
    const Json& sz = doc["image_size"];
    if (!sz.is_array() || sz.size() != 2 || !sz[0].is_number() || !sz[1].is_number()) {
      throw ParseError("structured3d: image_size must be [width, height]");
    }
    width = sz[0].get<double>();
    height = sz[1].get<double>();
    if (width <= 0.0 || height <= 0.0) throw ParseError("structured3d: image_size must be positive");
  }

  if (!doc.contains("junctions") || !doc["junctions"].is_array()) {
    throw ParseError("structured3d: missing 'junctions' array");
  }
  std::vector<Point2> points;
  for (std::size_t i = 0; i < doc["junctions"].size(); ++i) {
    const Json& j = doc["junctions"][i];
    double x = 0.0, y = 0.0;
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      x = j[0].get<double>();
      y = j[1].get<double>();
    } else if (j.is_object() && j.contains("coordinate") && j["coordinate"].is_array() &&
               j["coordinate"].size() >= 2) {
      x = j["coordinate"][0].get<double>();
      y = j["coordinate"][1].get<double>();
    } else {
      throw ParseError("structured3d: junctions[" + std::to_string(i) +
                       "] must be [x, y] or have a 'coordinate' field");
    }
    points.push_back({std::clamp(x / width, 0.0, 1.0), std::clamp(y / height, 0.0, 1.0)});
  }

  ConvertResult result;
  if (!doc.contains("planes") || !doc["planes"].is_array()) {
    throw ParseError("structured3d: missing 'planes' array");
  }

  std::set<int> used;
  std::map<std::pair<int, int>, int> line_by_pair;
  std::vector<std::pair<ScenePlane, std::vector<int>>> planes;  // plane + junction ring
  for (std::size_t i = 0; i < doc["planes"].size(); ++i) {
    const Json& p = doc["planes"][i];
    std::string ctx = "structured3d.planes[" + std::to_string(i) + "]";
    if (!p.is_object()) throw ParseError(ctx + ": must be an object");
    std::string type = p.value("type", p.value("label", p.value("semantic", "")));
    auto label = label_from_name(type);
    if (!label) {
      result.warnings.push_back(ctx + ": skipped (label '" + type + "')");
      continue;
    }
    const Json* ring_json = nullptr;
    if (p.contains("polygon") && p["polygon"].is_array()) {
      ring_json = &p["polygon"];
    } else if (p.contains("visible_polygon") && p["visible_polygon"].is_array()) {
      ring_json = &p["visible_polygon"];
    } else {
      throw ParseError(ctx + ": needs a 'polygon' or 'visible_polygon' index array");
    }
    std::vector<int> ring;
    for (const Json& v : *ring_json) {
      if (!v.is_number_integer()) throw ParseError(ctx + ": polygon entries must be junction indices");
      int idx = v.get<int>();
      if (idx < 0 || static_cast<std::size_t>(idx) >= points.size()) {
        throw ParseError(ctx + ": junction index " + std::to_string(idx) + " out of range");
      }
      ring.push_back(idx);
    }
    if (ring.size() < 3) {
      result.warnings.push_back(ctx + ": skipped (fewer than 3 vertices)");
      continue;
    }
    Polygon poly;
    for (int idx : ring) poly.vertices.push_back(points[static_cast<std::size_t>(idx)]);
    if (!polygon_is_simple(poly)) {
      result.warnings.push_back(ctx + ": skipped (polygon not simple)");
      continue;
    }
    ScenePlane plane;
    plane.id = static_cast<int>(planes.size());
    plane.label = *label;
    planes.emplace_back(std::move(plane), std::move(ring));
  }

  int next_line = 0;
  for (auto& [plane, ring] : planes) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      int a = ring[i], b = ring[(i + 1) % ring.size()];
      used.insert(a);
      used.insert(b);
      std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = line_by_pair.find(key);
      if (it == line_by_pair.end()) {
        it = line_by_pair.emplace(key, next_line++).first;
        result.scene.wireframe.lines.push_back({it->second, key.first, key.second});
      }
      plane.line_ids.push_back(it->second);
    }
    result.scene.planes.push_back(plane);
  }
  for (int idx : used) {
    result.scene.wireframe.junctions.push_back(
        {idx, points[static_cast<std::size_t>(idx)], JunctionKind::Proper});
  }
  return result;
}

}  // namespace wirepoly
