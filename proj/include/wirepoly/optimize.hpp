#pragma once

#include <map>
#include <optional>
#include <vector>

#include "wirepoly/geometry.hpp"
#include "wirepoly/wireframe.hpp"

namespace wirepoly {

// Plane graph with one nonnegative finite weight per edge, keyed by line id.
struct WeightedGraph {
  PlaneGraph graph;
  std::map<int, double> weights;
};

struct ProposalConfig {
  double kappa = 0.5;                // line score threshold, strict
  std::optional<int> iterations;     // default: edge count of each thresholded component
};

struct Proposal {
  Polygon polygon;
  double avg_weight = 0.0;
  std::vector<int> line_ids;  // sorted
};

// Greedy approximate minimum-average-weight polygon. Tries edges as cycle
// seeds from lowest weight to highest (ties by line id) for `iterations`
// rounds; each round closes the weight-shortest path between the seed edge's
// endpoints in the graph without that edge. Keeps the best candidate with
// >= 3 edges whose junction polygon is simple. Returns nullopt if no valid
// polygon is found.
std::optional<Proposal> min_avg_weight_polygon(const WeightedGraph& g, const PositionMap& positions,
                                               int iterations);

// Thresholds lines at score > kappa, weights them 1 - score, and runs
// min_avg_weight_polygon per connected component of the surviving subgraph.
// Returns the lowest-average-weight proposal across components.
std::optional<Proposal> propose_polygon(const Wireframe& wireframe,
                                        const std::map<int, double>& line_scores,
                                        const ProposalConfig& config = {});

// propose_polygon once per anchor score map, preserving order.
std::vector<std::optional<Proposal>> propose_all(const Wireframe& wireframe,
                                                 const std::vector<std::map<int, double>>& per_anchor_scores,
                                                 const ProposalConfig& config = {});

}  // namespace wirepoly
