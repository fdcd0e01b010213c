#include "wirepoly/synth.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace wirepoly {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

Wireframe generate_synthetic(const Wireframe& annotation, const SynthConfig& config) {
  if (config.sigma < 0.0) throw std::invalid_argument("generate_synthetic: sigma must be >= 0");
  if (config.drop_prob < 0.0 || config.drop_prob > 1.0 || config.spurious_prob < 0.0 ||
      config.spurious_prob > 1.0) {
    throw std::invalid_argument("generate_synthetic: probabilities must lie in [0, 1]");
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, config.sigma > 0.0 ? config.sigma : 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Wireframe out;
  out.junctions.reserve(annotation.junctions.size());
  int max_junction_id = -1, max_line_id = -1;
  for (const Junction& j : annotation.junctions) {
    Junction jittered = j;
    if (config.sigma > 0.0) {
      jittered.position.x = clamp01(j.position.x + gauss(rng));
      jittered.position.y = clamp01(j.position.y + gauss(rng));
    }
    out.junctions.push_back(jittered);
    max_junction_id = std::max(max_junction_id, j.id);
  }

  for (const LineSegment& line : annotation.lines) {
    max_line_id = std::max(max_line_id, line.id);
    if (config.drop_prob > 0.0 && uniform(rng) < config.drop_prob) continue;
    out.lines.push_back(line);
  }

  if (config.spurious_prob > 0.0) {
    int next_junction = max_junction_id + 1;
    int next_line = max_line_id + 1;
    for (std::size_t i = 0; i < annotation.lines.size(); ++i) {
      if (uniform(rng) >= config.spurious_prob) continue;
      Junction a{next_junction++, {uniform(rng), uniform(rng)}, JunctionKind::False};
      Junction b{next_junction++, {uniform(rng), uniform(rng)}, JunctionKind::False};
      out.junctions.push_back(a);
      out.junctions.push_back(b);
      out.lines.push_back({next_line++, a.id, b.id});
    }
  }
  return out;
}

AnchorGrid anchor_grid() {
  AnchorGrid grid;
  for (int k = 0; k < 25; ++k) {
    grid[static_cast<std::size_t>(k)] = {(k % 5 + 0.5) / 5.0, (k / 5 + 0.5) / 5.0};
  }
  return grid;
}

std::vector<std::map<int, double>> oracle_scores(const Wireframe& wireframe,
                                                 const std::vector<PlaneAnnotation>& annotations,
                                                 const AnchorGrid& anchors, double alpha) {
  constexpr double kEps = 1e-6;

  // unique ground-truth segments across planes; segment i of a plane joins
  // polygon vertices i and i+1 and carries line_ids[i]
  std::vector<int> gt_ids;
  std::vector<Segment2> gt_segments;
  std::map<int, std::size_t> gt_index_by_id;
  for (const PlaneAnnotation& plane : annotations) {
    std::size_t n = plane.polygon.vertices.size();
    if (plane.line_ids.size() != n) {
      throw std::invalid_argument("oracle_scores: annotation line_ids must align with polygon edges");
    }
    for (std::size_t i = 0; i < n; ++i) {
      int id = plane.line_ids[i];
      if (gt_index_by_id.count(id)) continue;
      gt_index_by_id[id] = gt_ids.size();
      gt_ids.push_back(id);
      gt_segments.push_back({plane.polygon.vertices[i], plane.polygon.vertices[(i + 1) % n]});
    }
  }

  std::vector<Segment2> pred_segments;
  PositionMap positions = junction_positions(wireframe);
  for (const LineSegment& line : wireframe.lines) {
    pred_segments.push_back({positions.at(line.j1), positions.at(line.j2)});
  }

  MatchResult line_match = match_lines(pred_segments, gt_segments, alpha);
  std::map<int, int> wf_line_by_gt_id;  // annotated line id -> wireframe line id
  for (auto [gt, pred] : line_match.pairs) {
    wf_line_by_gt_id[gt_ids[static_cast<std::size_t>(gt)]] = wireframe.lines[static_cast<std::size_t>(pred)].id;
  }

  std::vector<Point2> anchor_points(anchors.begin(), anchors.end());
  std::vector<Point2> centroids;
  centroids.reserve(annotations.size());
  for (const PlaneAnnotation& plane : annotations) centroids.push_back(plane.centroid);
  MatchResult anchor_match = match_centroids(anchor_points, centroids, std::nullopt);
  std::map<int, int> plane_by_anchor;
  for (auto [gt, pred] : anchor_match.pairs) plane_by_anchor[pred] = gt;

  std::vector<std::map<int, double>> out(anchors.size());
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    std::map<int, double>& scores = out[k];
    for (const LineSegment& line : wireframe.lines) scores[line.id] = kEps;
    auto it = plane_by_anchor.find(static_cast<int>(k));
    if (it == plane_by_anchor.end()) continue;
    const PlaneAnnotation& plane = annotations[static_cast<std::size_t>(it->second)];
    for (int gt_id : plane.line_ids) {
      auto match = wf_line_by_gt_id.find(gt_id);
      if (match != wf_line_by_gt_id.end()) scores[match->second] = 1.0 - kEps;
    }
  }
  return out;
}

}  // namespace wirepoly
