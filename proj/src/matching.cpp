#include "wirepoly/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wirepoly {

double line_distance(const Segment2& l, const Segment2& l_hat) {
  double straight = squared_distance(l.a, l_hat.a) + squared_distance(l.b, l_hat.b);
  double flipped = squared_distance(l.a, l_hat.b) + squared_distance(l.b, l_hat.a);
  return std::min(straight, flipped);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimum-cost assignment (Kuhn-Munkres with potentials) for an n x m cost
// matrix with n <= m; returns the assigned column per row.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  int n = static_cast<int>(cost.size());
  int m = n == 0 ? 0 : static_cast<int>(cost[0].size());
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

// Optimal assignment with gt as one side and pred as the other; matches
// min(|gt|, |pred|) pairs, then drops pairs whose distance passes the bound.
MatchResult match_by_cost(std::size_t num_pred, std::size_t num_gt,
                          const std::vector<std::vector<double>>& cost_gt_by_pred,
                          std::optional<double> bound) {
  MatchResult result;
  std::vector<int> gt_to_pred(num_gt, -1);
  if (num_gt > 0 && num_pred > 0) {
    if (num_gt <= num_pred) {
      std::vector<int> assign = hungarian(cost_gt_by_pred);
      for (std::size_t q = 0; q < num_gt; ++q) gt_to_pred[q] = assign[q];
    } else {
      std::vector<std::vector<double>> transposed(num_pred, std::vector<double>(num_gt));
      for (std::size_t q = 0; q < num_gt; ++q) {
        for (std::size_t j = 0; j < num_pred; ++j) transposed[j][q] = cost_gt_by_pred[q][j];
      }
      std::vector<int> assign = hungarian(transposed);
      for (std::size_t j = 0; j < num_pred; ++j) {
        if (assign[j] >= 0) gt_to_pred[assign[j]] = static_cast<int>(j);
      }
    }
  }

  std::vector<char> pred_used(num_pred, false);
  for (std::size_t q = 0; q < num_gt; ++q) {
    int j = gt_to_pred[q];
    if (j < 0) {
      result.unmatched_gt.push_back(static_cast<int>(q));
      continue;
    }
    result.total_cost += cost_gt_by_pred[q][j];
    if (bound && cost_gt_by_pred[q][j] >= *bound) {
      result.unmatched_gt.push_back(static_cast<int>(q));
      continue;
    }
    result.pairs.emplace_back(static_cast<int>(q), j);
    pred_used[j] = true;
  }
  for (std::size_t j = 0; j < num_pred; ++j) {
    if (!pred_used[j]) result.unmatched_pred.push_back(static_cast<int>(j));
  }
  return result;
}

}  // namespace

MatchResult match_lines(const std::vector<Segment2>& pred, const std::vector<Segment2>& gt, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("match_lines: alpha must be > 0");
  std::vector<std::vector<double>> cost(gt.size(), std::vector<double>(pred.size()));
  for (std::size_t q = 0; q < gt.size(); ++q) {
    for (std::size_t j = 0; j < pred.size(); ++j) cost[q][j] = line_distance(pred[j], gt[q]);
  }
  return match_by_cost(pred.size(), gt.size(), cost, alpha);
}

MatchResult match_centroids(const std::vector<Point2>& pred, const std::vector<Point2>& gt,
                            std::optional<double> bound) {
  if (bound && *bound <= 0.0) throw std::invalid_argument("match_centroids: bound must be > 0");
  std::vector<std::vector<double>> cost(gt.size(), std::vector<double>(pred.size()));
  for (std::size_t m = 0; m < gt.size(); ++m) {
    for (std::size_t j = 0; j < pred.size(); ++j) cost[m][j] = distance(pred[j], gt[m]);
  }
  return match_by_cost(pred.size(), gt.size(), cost, bound);
}

ProposalLossResult proposal_loss(const ScoreMatrix& scores,
                                 const std::vector<PlaneAnnotation>& gt_planes,
                                 const std::vector<int>& gt_line_ids,
                                 const MatchResult& line_match,
                                 const MatchResult& anchor_match) {
  for (int j = 0; j < scores.num_lines(); ++j) {
    for (int k = 0; k < scores.num_anchors(); ++k) {
      double s = scores(j, k);
      if (!(s > 0.0 && s < 1.0)) {
        throw std::invalid_argument("proposal_loss: scores must lie strictly in (0,1)");
      }
    }
  }

  // gt segment index -> matched prediction line index
  std::vector<int> gt_to_pred(gt_line_ids.size(), -1);
  for (auto [q, j] : line_match.pairs) gt_to_pred[q] = j;

  std::vector<int> plane_to_anchor(gt_planes.size(), -1);
  for (auto [m, k] : anchor_match.pairs) plane_to_anchor[m] = k;

  ProposalLossResult result;
  if (gt_planes.empty()) return result;

  for (std::size_t m = 0; m < gt_planes.size(); ++m) {
    int anchor = plane_to_anchor[m];
    if (anchor < 0) {
      ++result.skipped_planes;
      continue;
    }
    // Phi_m: prediction lines matched to this plane's annotated lines.
    std::vector<char> member(scores.num_lines(), false);
    for (int line_id : gt_planes[m].line_ids) {
      auto it = std::find(gt_line_ids.begin(), gt_line_ids.end(), line_id);
      if (it == gt_line_ids.end()) {
        throw std::invalid_argument("proposal_loss: plane references line id " +
                                    std::to_string(line_id) + " absent from gt_line_ids");
      }
      int j = gt_to_pred[it - gt_line_ids.begin()];
      if (j >= 0) member[j] = true;
    }
    double sum = 0.0;
    for (int j = 0; j < scores.num_lines(); ++j) {
      double s = scores(j, anchor);
      sum += member[j] ? -std::log(s) : -std::log1p(-s);
    }
    double m_m = static_cast<double>(gt_planes[m].line_ids.size());
    if (m_m == 0.0) throw std::invalid_argument("proposal_loss: plane with empty line_ids");
    result.value += sum / m_m;
  }
  result.value /= static_cast<double>(gt_planes.size());
  return result;
}

double classification_loss(const std::vector<std::array<double, 4>>& class_scores,
                           const std::vector<PlaneLabel>& gt_labels,
                           const MatchResult& centroid_match,
                           const std::array<double, 4>& weights,
                           bool log_form) {
  constexpr double kEpsFloor = 1e-7;
  for (const auto& s : class_scores) {
    double sum = 0.0;
    for (double v : s) {
      if (v < 0.0) throw std::invalid_argument("classification_loss: negative score");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw std::invalid_argument("classification_loss: score vector does not sum to 1");
    }
  }

  std::vector<int> gt_to_pred(gt_labels.size(), -1);
  for (auto [m, k] : centroid_match.pairs) gt_to_pred[m] = k;

  if (gt_labels.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t m = 0; m < gt_labels.size(); ++m) {
    int y = static_cast<int>(gt_labels[m]);
    int k = gt_to_pred[m];
    if (log_form) {
      double s = (k >= 0) ? std::max(class_scores[k][y], kEpsFloor) : kEpsFloor;
      total += weights[y] * -std::log(s);
    } else if (k >= 0) {
      total += -weights[y] * class_scores[k][y];
    }
  }
  return total / static_cast<double>(gt_labels.size());
}

}  // namespace wirepoly
