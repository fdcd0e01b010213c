#include "wirepoly/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <thread>

namespace wirepoly {

namespace {

double mask_iou(const PixelMask& a, const PixelMask& b) {
  std::int64_t uni = PixelMask::union_count(a, b);
  if (uni == 0) return 0.0;
  return static_cast<double>(PixelMask::intersection_count(a, b)) / static_cast<double>(uni);
}

std::vector<PixelMask> rasterize_all(const std::vector<Polygon>& polys, int resolution) {
  std::vector<PixelMask> masks;
  masks.reserve(polys.size());
  for (const Polygon& p : polys) masks.push_back(rasterize(p, resolution));
  return masks;
}

struct Mapping {
  std::vector<std::pair<int, int>> pairs;  // (gt, pred)
  std::vector<double> pair_ious;
};

Mapping greedy_mapping(const std::vector<Polygon>& gt, const std::vector<Polygon>& pred,
                       int resolution) {
  std::vector<PixelMask> gt_masks = rasterize_all(gt, resolution);
  std::vector<PixelMask> pred_masks = rasterize_all(pred, resolution);

  std::vector<int> gt_order(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) gt_order[i] = static_cast<int>(i);
  std::vector<double> areas(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) areas[i] = polygon_area(gt[i]);
  std::stable_sort(gt_order.begin(), gt_order.end(),
                   [&](int a, int b) { return areas[a] > areas[b]; });

  Mapping out;
  std::vector<char> taken(pred.size(), false);
  for (int m : gt_order) {
    int best = -1;
    double best_iou = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k) {
      if (taken[k]) continue;
      double iou = mask_iou(gt_masks[m], pred_masks[k]);
      if (iou > best_iou) {
        best_iou = iou;
        best = static_cast<int>(k);
      }
    }
    if (best >= 0) {
      taken[best] = true;
      out.pairs.emplace_back(m, best);
      out.pair_ious.push_back(best_iou);
    }
  }
  return out;
}

}  // namespace

int predicted_label(const ScoredDetection& det) {
  int best = 0;
  for (int c = 1; c < kNumClasses; ++c) {
    if (det.scores[c] > det.scores[best]) best = c;
  }
  return best;  // background only when it is the strict-or-tied argmax
}

std::vector<std::pair<int, int>> layout_mapping(const std::vector<Polygon>& gt,
                                                const std::vector<Polygon>& pred, int resolution) {
  Mapping m = greedy_mapping(gt, pred, resolution);
  return std::move(m.pairs);
}

double image_iou(const std::vector<Polygon>& gt, const std::vector<Polygon>& pred, int resolution) {
  std::size_t M = gt.size(), K = pred.size();
  if (M + K == 0) return 1.0;
  Mapping m = greedy_mapping(gt, pred, resolution);
  double total = 0.0;
  for (double iou : m.pair_ious) total += iou;
  return 2.0 * total / static_cast<double>(M + K);
}

namespace {

// Labels painted in descending polygon area so smaller polygons overwrite.
std::vector<std::uint8_t> paint_labels(const std::vector<std::pair<Polygon, PlaneLabel>>& polys,
                                       int resolution) {
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(resolution) * resolution,
                                   static_cast<std::uint8_t>(kBackgroundIndex));
  std::vector<int> order(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) order[i] = static_cast<int>(i);
  std::vector<double> areas(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) areas[i] = polygon_area(polys[i].first);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return areas[a] > areas[b]; });

  for (int idx : order) {
    PixelMask mask = rasterize(polys[idx].first, resolution);
    auto value = static_cast<std::uint8_t>(polys[idx].second);
    for (int iy = 0; iy < resolution; ++iy) {
      for (int ix = 0; ix < resolution; ++ix) {
        if (mask.test(ix, iy)) labels[static_cast<std::size_t>(iy) * resolution + ix] = value;
      }
    }
  }
  return labels;
}

}  // namespace

double pixel_error(const std::vector<std::pair<Polygon, PlaneLabel>>& gt,
                   const std::vector<std::pair<Polygon, PlaneLabel>>& pred, int resolution) {
  if (resolution < 1) throw std::invalid_argument("pixel_error: resolution must be >= 1");
  std::vector<std::uint8_t> a = paint_labels(gt, resolution);
  std::vector<std::uint8_t> b = paint_labels(pred, resolution);
  std::size_t differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differing += a[i] != b[i];
  return static_cast<double>(differing) / static_cast<double>(a.size());
}

std::array<double, 10> ap_gammas() {
  std::array<double, 10> out{};
  for (int i = 0; i < 10; ++i) out[i] = static_cast<double>(50 + 5 * i) / 100.0;
  return out;
}

namespace {

struct RankedDet {
  double score = 0.0;
  std::string image_id;
  int index = 0;
  std::vector<std::pair<double, int>> gt_ious;  // (iou desc, gt id asc) vs same-class gts
};

struct ClassCache {
  std::vector<RankedDet> dets;  // sorted by rank
  int num_gt = 0;
};

ClassCache build_class_cache(const std::vector<DetectionRecord>& dets,
                             const std::vector<GtRecord>& gts, PlaneLabel cls, int resolution) {
  ClassCache cache;
  int cls_index = static_cast<int>(cls);

  // same-class gts grouped per image, with global ids for consumption tracking
  std::map<std::string, std::vector<std::pair<int, PixelMask>>> gt_by_image;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (gts[g].label != cls) continue;
    gt_by_image[gts[g].image_id].emplace_back(static_cast<int>(g), rasterize(gts[g].polygon, resolution));
    ++cache.num_gt;
  }

  for (const DetectionRecord& rec : dets) {
    if (predicted_label(rec.det) != cls_index) continue;
    RankedDet rd;
    rd.score = rec.det.scores[static_cast<std::size_t>(cls_index)];
    rd.image_id = rec.image_id;
    rd.index = rec.index;
    auto it = gt_by_image.find(rec.image_id);
    if (it != gt_by_image.end()) {
      PixelMask mask = rasterize(rec.det.polygon, resolution);
      for (const auto& [gt_id, gt_mask] : it->second) {
        rd.gt_ious.emplace_back(mask_iou(mask, gt_mask), gt_id);
      }
      std::sort(rd.gt_ious.begin(), rd.gt_ious.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
    }
    cache.dets.push_back(std::move(rd));
  }

  std::sort(cache.dets.begin(), cache.dets.end(), [](const RankedDet& a, const RankedDet& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.image_id != b.image_id) return a.image_id < b.image_id;
    return a.index < b.index;
  });
  return cache;
}

double ap_from_cache(const ClassCache& cache, double gamma) {
  if (cache.num_gt == 0) return cache.dets.empty() ? 1.0 : 0.0;
  std::vector<char> tp(cache.dets.size(), false);
  std::set<int> consumed;
  for (std::size_t i = 0; i < cache.dets.size(); ++i) {
    for (const auto& [iou, gt_id] : cache.dets[i].gt_ious) {
      if (iou < gamma) break;  // sorted descending
      if (consumed.insert(gt_id).second) {
        tp[i] = true;
        break;
      }
    }
  }

  // precision at each rank, then exact area under the monotone envelope
  std::size_t n = cache.dets.size();
  std::vector<double> recall(n), precision(n);
  int tps = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tps += tp[i] ? 1 : 0;
    recall[i] = static_cast<double>(tps) / cache.num_gt;
    precision[i] = static_cast<double>(tps) / static_cast<double>(i + 1);
  }
  double ap = 0.0, envelope = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    envelope = std::max(envelope, precision[i]);
    double prev = i == 0 ? 0.0 : recall[i - 1];
    if (recall[i] > prev) ap += (recall[i] - prev) * envelope;
  }
  return ap;
}

}  // namespace

double polygon_ap(const std::vector<DetectionRecord>& dets, const std::vector<GtRecord>& gts,
                  PlaneLabel cls, double gamma, int resolution) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("polygon_ap: gamma must be in (0, 1]");
  return ap_from_cache(build_class_cache(dets, gts, cls, resolution), gamma);
}

ApSummary mean_pap(const std::vector<DetectionRecord>& dets, const std::vector<GtRecord>& gts,
                   int resolution) {
  ApSummary out;
  std::array<double, 10> gammas = ap_gammas();
  double class_sum = 0.0;
  for (PlaneLabel cls : {PlaneLabel::Wall, PlaneLabel::Floor, PlaneLabel::Ceiling}) {
    ClassCache cache = build_class_cache(dets, gts, cls, resolution);
    std::array<double, 10> aps{};
    double sum = 0.0;
    for (int i = 0; i < 10; ++i) {
      aps[i] = ap_from_cache(cache, gammas[i]);
      sum += aps[i];
    }
    out.per_gamma[cls] = aps;
    out.pap_m[cls] = sum / 10.0;
    class_sum += out.pap_m[cls];
  }
  out.mpap_m = class_sum / 3.0;
  return out;
}

std::vector<ScoredDetection> nms(const std::vector<ScoredDetection>& dets, double iou_threshold,
                                 int resolution, bool include_background) {
  std::vector<double> score(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    double s = include_background ? dets[i].scores[0] : 0.0;
    for (int c = 1; c < kNumClasses; ++c) s = std::max(s, dets[i].scores[static_cast<std::size_t>(c)]);
    score[i] = s;
  }
  std::vector<PixelMask> masks;
  masks.reserve(dets.size());
  for (const ScoredDetection& d : dets) masks.push_back(rasterize(d.polygon, resolution));

  std::vector<ScoredDetection> kept;
  for (std::size_t k = 0; k < dets.size(); ++k) {
    bool suppressed = false;
    for (std::size_t r = 0; r < dets.size() && !suppressed; ++r) {
      if (r == k || score[r] <= score[k]) continue;
      if (mask_iou(masks[r], masks[k]) > iou_threshold) suppressed = true;
    }
    if (!suppressed) kept.push_back(dets[k]);
  }
  return kept;
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WP_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

EvalReport evaluate_scenes(const std::vector<EvalImage>& images, const EvalConfig& config) {
  if (config.resolution < 1) throw std::invalid_argument("evaluate_scenes: resolution must be >= 1");

  struct ImageOut {
    PerImageMetrics metrics;
    std::vector<ScoredDetection> kept;
  };
  std::vector<ImageOut> outs(images.size());

  auto process = [&](std::size_t i) {
    const EvalImage& img = images[i];
    std::vector<ScoredDetection> kept =
        config.apply_nms ? nms(img.detections, config.nms_iou, config.resolution) : img.detections;
    // background-classified detections count as "no plane detected"
    std::erase_if(kept, [](const ScoredDetection& d) { return predicted_label(d) == kBackgroundIndex; });

    std::vector<Polygon> gt_polys, pred_polys;
    gt_polys.reserve(img.gt.size());
    for (const auto& [poly, label] : img.gt) gt_polys.push_back(poly);
    pred_polys.reserve(kept.size());
    std::vector<std::pair<Polygon, PlaneLabel>> pred_labeled;
    for (const ScoredDetection& d : kept) {
      pred_polys.push_back(d.polygon);
      pred_labeled.emplace_back(d.polygon, static_cast<PlaneLabel>(predicted_label(d)));
    }

    ImageOut& out = outs[i];
    out.metrics.image_id = img.id;
    out.metrics.num_gt = static_cast<int>(img.gt.size());
    out.metrics.num_pred = static_cast<int>(kept.size());
    out.metrics.eps_iou = image_iou(gt_polys, pred_polys, config.resolution);
    out.metrics.eps_pe = pixel_error(img.gt, pred_labeled, config.resolution);
    out.kept = std::move(kept);
  };

  int threads = resolve_thread_count(config.threads);
  if (static_cast<std::size_t>(threads) > images.size()) {
    threads = static_cast<int>(images.empty() ? 1 : images.size());
  }
  if (threads <= 1 || images.size() <= 1) {
    for (std::size_t i = 0; i < images.size(); ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < images.size(); i = next.fetch_add(1)) process(i);
      });
    }
    for (std::thread& th : pool) th.join();
  }

  EvalReport report;
  std::vector<DetectionRecord> det_records;
  std::vector<GtRecord> gt_records;
  double iou_sum = 0.0, pe_sum = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    report.per_image.push_back(outs[i].metrics);
    iou_sum += outs[i].metrics.eps_iou;
    pe_sum += outs[i].metrics.eps_pe;
    for (std::size_t k = 0; k < outs[i].kept.size(); ++k) {
      det_records.push_back({images[i].id, static_cast<int>(k), outs[i].kept[k]});
    }
    for (const auto& [poly, label] : images[i].gt) gt_records.push_back({images[i].id, poly, label});
  }
  report.eps_iou_mean = images.empty() ? 1.0 : iou_sum / static_cast<double>(images.size());
  report.eps_pe_mean = images.empty() ? 0.0 : pe_sum / static_cast<double>(images.size());
  report.ap = mean_pap(det_records, gt_records, config.resolution);
  return report;
}

}  // namespace wirepoly
