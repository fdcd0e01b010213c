#pragma once

#include <array>
#include <optional>
#include <vector>

#include "wirepoly/geometry.hpp"

namespace wirepoly {

/// Class index into 4-way score vectors (background, wall, floor, ceiling).
enum class PlaneLabel : int { Wall = 1, Floor = 2, Ceiling = 3 };

inline constexpr int kBackgroundIndex = 0;
inline constexpr int kNumClasses = 4;

/// Ground-truth plane: polygon, its centroid, the annotated line ids (aligned
/// so line_ids[i] joins polygon vertex i and i+1), and the semantic label.
struct PlaneAnnotation {
  Polygon polygon;
  Point2 centroid;
  std::vector<int> line_ids;
  PlaneLabel label = PlaneLabel::Wall;
};

struct Segment2 {
  Point2 a, b;
};

/// Orientation-invariant squared-endpoint distance: the minimum over the two
/// endpoint pairings of the summed squared distances.
double line_distance(const Segment2& l, const Segment2& l_hat);

/// One-to-one assignment between ground truth and predictions. `pairs` holds
/// (gt index, pred index); total_cost is the optimal assignment cost before
/// any bound-based exclusion.
struct MatchResult {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> unmatched_gt;
  std::vector<int> unmatched_pred;
  double total_cost = 0.0;
};

/// Exact minimum-cost assignment under line_distance, with pairs at distance
/// >= alpha excluded afterwards.
MatchResult match_lines(const std::vector<Segment2>& pred, const std::vector<Segment2>& gt, double alpha);

/// Exact minimum-cost assignment under Euclidean distance; when `bound` is
/// given, pairs at distance >= bound are excluded afterwards.
MatchResult match_centroids(const std::vector<Point2>& pred, const std::vector<Point2>& gt,
                            std::optional<double> bound = {});

struct LossConfig {
  double alpha = 0.01;   // line match bound, squared normalized distance
  double tau_c = 0.1;    // centroid match bound, normalized distance
  std::array<double, 4> class_weights{1.0, 1.0, 1.0, 1.0};
};

/// Dense (line, anchor) score table.
class ScoreMatrix {
 public:
  ScoreMatrix(int num_lines, int num_anchors)
      : num_lines_(num_lines), num_anchors_(num_anchors),
        data_(static_cast<std::size_t>(num_lines) * static_cast<std::size_t>(num_anchors), 0.0) {}

  int num_lines() const { return num_lines_; }
  int num_anchors() const { return num_anchors_; }
  double operator()(int line, int anchor) const {
    return data_[static_cast<std::size_t>(line) * num_anchors_ + anchor];
  }
  double& operator()(int line, int anchor) {
    return data_[static_cast<std::size_t>(line) * num_anchors_ + anchor];
  }

 private:
  int num_lines_, num_anchors_;
  std::vector<double> data_;
};

struct ProposalLossResult {
  double value = 0.0;
  int skipped_planes = 0;  // gt planes without a matched anchor
};

/// Binary cross entropy over line membership, averaged per plane and over
/// planes; 0 in the perfect-score limit. gt_line_ids[q] is the line id of the
/// q-th ground-truth segment used in line_match. Scores must lie strictly in
/// (0,1). Planes without a matched anchor are skipped and counted.
ProposalLossResult proposal_loss(const ScoreMatrix& scores,
                                 const std::vector<PlaneAnnotation>& gt_planes,
                                 const std::vector<int>& gt_line_ids,
                                 const MatchResult& line_match,
                                 const MatchResult& anchor_match);

/// Weighted cross entropy over matched plane labels, averaged over gt planes.
/// Unmatched gt planes contribute -log(eps_floor) as missed detections. With
/// log_form=false the raw-score form (-w[y] * s[y], no log, unmatched ignored)
/// is returned instead.
double classification_loss(const std::vector<std::array<double, 4>>& class_scores,
                           const std::vector<PlaneLabel>& gt_labels,
                           const MatchResult& centroid_match,
                           const std::array<double, 4>& weights,
                           bool log_form = true);

}  // namespace wirepoly
