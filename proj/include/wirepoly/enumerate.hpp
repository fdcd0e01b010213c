#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wirepoly/matching.hpp"
#include "wirepoly/wireframe.hpp"

namespace wirepoly {

struct EnumerationLimits {
  int max_polygons = 10000;
  int max_basis_subset_size = 12;
};

/// Raised when complete enumeration cannot be guaranteed within the limits.
/// Partial results are discarded; callers must raise the limits.
class LimitExceeded : public std::runtime_error {
 public:
  LimitExceeded(const std::string& what, std::int64_t count)
      : std::runtime_error(what), count(count) {}
  std::int64_t count;  // how far enumeration got before aborting
};

/// Symmetric difference of two sorted line-id sets.
std::vector<int> xor_compose(const std::vector<int>& a, const std::vector<int>& b);

/// All polygons of a connected component: XOR-compositions of basis-cycle
/// subsets that form a single cycle with >= 3 unique vertices and pass
/// polygon_is_simple. Deduplicated by edge set, ordered by (edge count,
/// lexicographic line ids). Throws LimitExceeded when the limits cannot
/// guarantee completeness.
std::vector<Polygon> enumerate_polygons(const PlaneGraph& component, const PositionMap& positions,
                                        const EnumerationLimits& limits = {});

/// Same enumeration from a caller-supplied cycle basis of the component.
std::vector<Polygon> enumerate_from_basis(const PlaneGraph& component, const std::vector<Cycle>& basis,
                                          const PositionMap& positions, const EnumerationLimits& limits = {});

enum class SampleLabel { Positive, Negative };

/// Training-time sampler: up to 20 polygons from random connected basis
/// subsets, up to 10 positives rebuilt from the annotations, and up to 10
/// negatives (valid polygons with IoU < 0.5 against every annotation).
/// Sampled polygons are labeled positive when they overlap an annotation with
/// IoU >= 0.5. Output is deduplicated by edge set; deterministic per seed.
std::vector<std::pair<Polygon, SampleLabel>> sample_polygons(const PlaneGraph& component,
                                                             const PositionMap& positions,
                                                             const std::vector<PlaneAnnotation>& annotations,
                                                             std::uint64_t rng_seed);

}  // namespace wirepoly
