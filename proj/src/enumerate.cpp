#include "wirepoly/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>

namespace wirepoly {

std::vector<int> xor_compose(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

namespace {

// Two basis cycles are meta-adjacent when they share at least one edge.
std::vector<std::vector<int>> meta_adjacency(const std::vector<Cycle>& basis) {
  std::size_t q = basis.size();
  std::vector<std::vector<int>> adj(q);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = i + 1; j < q; ++j) {
      std::vector<int> shared;
      std::set_intersection(basis[i].line_ids.begin(), basis[i].line_ids.end(),
                            basis[j].line_ids.begin(), basis[j].line_ids.end(),
                            std::back_inserter(shared));
      if (!shared.empty()) {
        adj[i].push_back(static_cast<int>(j));
        adj[j].push_back(static_cast<int>(i));
      }
    }
  }
  return adj;
}

std::vector<std::vector<int>> meta_components(const std::vector<std::vector<int>>& adj) {
  std::vector<std::vector<int>> comps;
  std::vector<char> seen(adj.size(), false);
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{static_cast<int>(s)};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (int n : adj[comp[head]]) {
        if (!seen[n]) {
          seen[n] = true;
          comp.push_back(n);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool subset_connected(std::uint32_t mask, const std::vector<int>& members,
                      const std::vector<std::vector<int>>& adj) {
  int first = -1;
  int bits = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (mask & (1u << i)) {
      if (first < 0) first = static_cast<int>(i);
      ++bits;
    }
  }
  if (bits <= 1) return true;
  std::uint32_t seen = 1u << first;
  std::vector<int> stack{first};
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int global : adj[members[i]]) {
      auto it = std::lower_bound(members.begin(), members.end(), global);
      if (it == members.end() || *it != global) continue;
      int j = static_cast<int>(it - members.begin());
      if ((mask & (1u << j)) && !(seen & (1u << j))) {
        seen |= 1u << j;
        stack.push_back(j);
      }
    }
  }
  return std::popcount(seen) == bits;
}

// XOR of a basis subset, validated down to a simple polygon.
std::optional<std::pair<std::vector<int>, Polygon>> compose_polygon(
    const PlaneGraph& component, const PositionMap& positions,
    const std::vector<Cycle>& basis, const std::vector<int>& subset) {
  std::vector<int> edge_set;
  for (int idx : subset) edge_set = xor_compose(edge_set, basis[idx].line_ids);
  auto order = cycle_vertex_order(component, edge_set);
  if (!order || order->size() < 3) return std::nullopt;
  Polygon poly = polygon_from_vertex_seq(*order, positions);
  if (!polygon_is_simple(poly)) return std::nullopt;
  return std::make_pair(std::move(edge_set), std::move(poly));
}

struct EdgeSetOrder {
  bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

}  // namespace

std::vector<Polygon> enumerate_from_basis(const PlaneGraph& component, const std::vector<Cycle>& basis,
                                          const PositionMap& positions, const EnumerationLimits& limits) {
  if (limits.max_polygons < 1 || limits.max_basis_subset_size < 1) {
    throw std::invalid_argument("enumerate_polygons: limits must be >= 1");
  }
  std::vector<std::vector<int>> adj = meta_adjacency(basis);
  std::map<std::vector<int>, Polygon, EdgeSetOrder> found;

  for (const std::vector<int>& members : meta_components(adj)) {
    if (static_cast<int>(members.size()) > limits.max_basis_subset_size) {
      throw LimitExceeded("enumerate_polygons: basis subset size limit exceeded (component of " +
                              std::to_string(members.size()) + " basis cycles)",
                          static_cast<std::int64_t>(members.size()));
    }
    std::uint32_t full = members.size() == 32 ? 0xffffffffu : (1u << members.size()) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      if (!subset_connected(mask, members, adj)) continue;
      std::vector<int> subset;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (mask & (1u << i)) subset.push_back(members[i]);
      }
      auto composed = compose_polygon(component, positions, basis, subset);
      if (!composed) continue;
      found.emplace(std::move(composed->first), std::move(composed->second));
      if (static_cast<int>(found.size()) > limits.max_polygons) {
        throw LimitExceeded("enumerate_polygons: polygon count limit exceeded",
                            static_cast<std::int64_t>(found.size()));
      }
    }
  }

  std::vector<Polygon> out;
  out.reserve(found.size());
  for (auto& [edge_set, poly] : found) out.push_back(std::move(poly));
  return out;
}

std::vector<Polygon> enumerate_polygons(const PlaneGraph& component, const PositionMap& positions,
                                        const EnumerationLimits& limits) {
  return enumerate_from_basis(component, cycle_basis(component), positions, limits);
}

namespace {

constexpr int kSampleIouResolution = 256;

double mask_iou(const PixelMask& a, const PixelMask& b) {
  std::int64_t uni = PixelMask::union_count(a, b);
  if (uni == 0) return 0.0;
  return static_cast<double>(PixelMask::intersection_count(a, b)) / static_cast<double>(uni);
}

}  // namespace

std::vector<std::pair<Polygon, SampleLabel>> sample_polygons(const PlaneGraph& component,
                                                             const PositionMap& positions,
                                                             const std::vector<PlaneAnnotation>& annotations,
                                                             std::uint64_t rng_seed) {
  constexpr int kSampled = 20, kPositives = 10, kNegatives = 10;
  constexpr int kAttemptsPerSlot = 30;
  constexpr double kIouThreshold = 0.5;

  std::mt19937_64 rng(rng_seed);
  std::vector<Cycle> basis = cycle_basis(component);
  std::vector<std::vector<int>> adj = meta_adjacency(basis);
  int q = static_cast<int>(basis.size());

  std::vector<PixelMask> annotation_masks;
  annotation_masks.reserve(annotations.size());
  for (const PlaneAnnotation& a : annotations) {
    annotation_masks.push_back(rasterize(a.polygon, kSampleIouResolution));
  }
  auto max_annotation_iou = [&](const Polygon& poly) {
    if (annotation_masks.empty()) return 0.0;
    PixelMask m = rasterize(poly, kSampleIouResolution);
    double best = 0.0;
    for (const PixelMask& am : annotation_masks) best = std::max(best, mask_iou(m, am));
    return best;
  };

  // Random connected basis subset grown through shared edges.
  auto draw_candidate = [&]() -> std::optional<std::pair<std::vector<int>, Polygon>> {
    if (q == 0) return std::nullopt;
    int target = std::uniform_int_distribution<int>(1, std::min(q, 12))(rng);
    std::vector<int> subset{std::uniform_int_distribution<int>(0, q - 1)(rng)};
    std::vector<char> in_subset(q, false);
    in_subset[subset[0]] = true;
    while (static_cast<int>(subset.size()) < target) {
      std::vector<int> frontier;
      for (int idx : subset) {
        for (int n : adj[idx]) {
          if (!in_subset[n]) frontier.push_back(n);
        }
      }
      if (frontier.empty()) break;
      std::sort(frontier.begin(), frontier.end());
      frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
      int pick = frontier[std::uniform_int_distribution<int>(0, static_cast<int>(frontier.size()) - 1)(rng)];
      subset.push_back(pick);
      in_subset[pick] = true;
    }
    std::sort(subset.begin(), subset.end());
    return compose_polygon(component, positions, basis, subset);
  };

  std::vector<std::pair<Polygon, SampleLabel>> out;
  std::map<std::vector<int>, bool> seen;

  for (int attempt = 0; attempt < kSampled * kAttemptsPerSlot; ++attempt) {
    if (static_cast<int>(out.size()) >= kSampled) break;
    auto cand = draw_candidate();
    if (!cand || seen.count(cand->first)) continue;
    seen[cand->first] = true;
    SampleLabel label = max_annotation_iou(cand->second) >= kIouThreshold ? SampleLabel::Positive
                                                                          : SampleLabel::Negative;
    out.emplace_back(std::move(cand->second), label);
  }

  int positives = 0;
  for (const PlaneAnnotation& a : annotations) {
    if (positives >= kPositives) break;
    std::vector<int> edge_set = a.line_ids;
    std::sort(edge_set.begin(), edge_set.end());
    if (seen.count(edge_set)) continue;
    auto order = cycle_vertex_order(component, edge_set);
    if (!order) continue;  // annotation does not resolve in this component
    Polygon poly = polygon_from_vertex_seq(*order, positions);
    if (!polygon_is_simple(poly)) continue;
    seen[edge_set] = true;
    out.emplace_back(std::move(poly), SampleLabel::Positive);
    ++positives;
  }

  int negatives = 0;
  for (int attempt = 0; attempt < kNegatives * kAttemptsPerSlot; ++attempt) {
    if (negatives >= kNegatives) break;
    auto cand = draw_candidate();
    if (!cand || seen.count(cand->first)) continue;
    if (max_annotation_iou(cand->second) >= kIouThreshold) continue;
    seen[cand->first] = true;
    out.emplace_back(std::move(cand->second), SampleLabel::Negative);
    ++negatives;
  }

  return out;
}

}  // namespace wirepoly
