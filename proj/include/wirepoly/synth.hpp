#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "wirepoly/matching.hpp"
#include "wirepoly/wireframe.hpp"

namespace wirepoly {

struct SynthConfig {
  double sigma = 0.005;       // junction jitter std, normalized units
  double drop_prob = 0.0;     // per-segment removal probability
  double spurious_prob = 0.0; // per-segment probability of adding a random extra segment
  std::uint64_t seed = 0;
};

// Synthetic wireframe detection from a ground-truth wireframe: every junction
// is jittered once by isotropic Gaussian noise (shared by all its segments,
// so connectivity is preserved), then segments are independently dropped and
// random spurious segments added. Positions clamp to [0,1]. sigma = 0 with
// zero probabilities reproduces the input exactly.
Wireframe generate_synthetic(const Wireframe& annotation, const SynthConfig& config);

using AnchorGrid = std::array<Point2, 25>;

// Centers of the uniform 5x5 partition of [0,1]^2, row-major from (0.1, 0.1).
AnchorGrid anchor_grid();

// Ideal per-anchor line scores from ground truth: lines of the plane matched
// to an anchor (via the optimal anchor<->centroid assignment, then the
// optimal line assignment at bound alpha) score 1-eps, everything else eps
// (eps = 1e-6). Anchors without a matched plane score eps everywhere.
std::vector<std::map<int, double>> oracle_scores(const Wireframe& wireframe,
                                                 const std::vector<PlaneAnnotation>& annotations,
                                                 const AnchorGrid& anchors, double alpha = 0.01);

}  // namespace wirepoly
