#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wirepoly/geometry.hpp"
#include "wirepoly/matching.hpp"

namespace wirepoly {

// Polygon detection with a 4-way class distribution
// (background, wall, floor, ceiling), summing to 1.
struct ScoredDetection {
  Polygon polygon;
  std::array<double, 4> scores{};
};

// Background when background is the argmax, otherwise the argmax over the
// three plane classes. Ties go to the lower class index.
int predicted_label(const ScoredDetection& det);

// Greedy layout mapping: ground-truth polygons by descending area each take
// their highest-IoU still-unassigned prediction. Returns (gt, pred) index
// pairs; zero-IoU ground truths stay unmatched.
std::vector<std::pair<int, int>> layout_mapping(const std::vector<Polygon>& gt,
                                                const std::vector<Polygon>& pred, int resolution);

// 2/(M+K) * sum of matched IoUs; 1.0 for an empty scene (M = K = 0).
double image_iou(const std::vector<Polygon>& gt, const std::vector<Polygon>& pred, int resolution);

// Fraction of pixels whose semantic label differs between the two renderings.
// Polygons are painted in descending area order so smaller ones overwrite;
// uncovered pixels are background.
double pixel_error(const std::vector<std::pair<Polygon, PlaneLabel>>& gt,
                   const std::vector<std::pair<Polygon, PlaneLabel>>& pred, int resolution);

// Detection/ground-truth records pooled across images for AP.
struct DetectionRecord {
  std::string image_id;
  int index = 0;  // rank tiebreak within an image
  ScoredDetection det;
};

struct GtRecord {
  std::string image_id;
  Polygon polygon;
  PlaneLabel label = PlaneLabel::Wall;
};

// Average precision for one class at IoU threshold gamma. Detections
// predicted as the class are ranked by that class score (ties by image id,
// then index); a detection is a true positive when an unconsumed same-class
// ground truth in its image reaches IoU >= gamma. Exact area under the
// monotone precision-recall envelope. With no ground truth of the class the
// result is 1 when there are also no detections, else 0.
double polygon_ap(const std::vector<DetectionRecord>& dets, const std::vector<GtRecord>& gts,
                  PlaneLabel cls, double gamma, int resolution);

// The ten thresholds 0.50, 0.55, ..., 0.95.
std::array<double, 10> ap_gammas();

struct ApSummary {
  // per class: AP at each of the ten gammas, and their mean
  std::map<PlaneLabel, std::array<double, 10>> per_gamma;
  std::map<PlaneLabel, double> pap_m;
  double mpap_m = 0.0;
};

ApSummary mean_pap(const std::vector<DetectionRecord>& dets, const std::vector<GtRecord>& gts,
                   int resolution);

// Literal suppression rule: detection k is dropped iff any other input
// detection has a strictly higher score and IoU(r, k) > iou_threshold,
// regardless of whether that other detection is itself suppressed. Scores
// compare by max non-background class score unless include_background is set.
std::vector<ScoredDetection> nms(const std::vector<ScoredDetection>& dets, double iou_threshold,
                                 int resolution, bool include_background = false);

struct PerImageMetrics {
  std::string image_id;
  double eps_iou = 0.0;
  double eps_pe = 0.0;
  int num_gt = 0;
  int num_pred = 0;
};

struct EvalReport {
  std::vector<PerImageMetrics> per_image;
  double eps_iou_mean = 0.0;
  double eps_pe_mean = 0.0;
  ApSummary ap;
};

struct EvalImage {
  std::string id;
  std::vector<std::pair<Polygon, PlaneLabel>> gt;
  std::vector<ScoredDetection> detections;
};

struct EvalConfig {
  int resolution = 512;
  double nms_iou = 0.05;
  bool apply_nms = true;
  int threads = 0;  // 0: WP_THREADS env var, then hardware concurrency
};

// Number of worker threads evaluate_scenes will use for a request of
// `requested` (0 defers to WP_THREADS, then hardware concurrency).
int resolve_thread_count(int requested);

// Full pipeline over per-image inputs: NMS, background-detection removal,
// per-image eps metrics in parallel, pooled AP. Images are processed in the
// given order and the report is deterministic.
EvalReport evaluate_scenes(const std::vector<EvalImage>& images, const EvalConfig& config = {});

}  // namespace wirepoly
