#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wirepoly/enumerate.hpp"
#include "wirepoly/scene_io.hpp"

using namespace wirepoly;

namespace {

std::set<std::vector<int>> edge_sets(const std::vector<Polygon>& polys, const PlaneGraph& g) {
  // recover each polygon's edge set from its vertex ids
  std::set<std::vector<int>> out;
  for (const Polygon& p : polys) {
    std::vector<int> ids;
    std::size_t n = p.vertex_ids.size();
    REQUIRE(n == p.vertices.size());
    for (std::size_t i = 0; i < n; ++i) {
      int a = p.vertex_ids[i], b = p.vertex_ids[(i + 1) % n];
      bool found = false;
      for (const auto& nb : g.neighbors(a)) {
        if (nb.vertex == b) {
          ids.push_back(nb.line_id);
          found = true;
          break;
        }
      }
      REQUIRE(found);
    }
    std::sort(ids.begin(), ids.end());
    out.insert(ids);
  }
  return out;
}

struct Built {
  PlaneGraph graph;
  PositionMap positions;
};

Built build(const std::vector<Junction>& junctions, const std::vector<LineSegment>& lines) {
  Wireframe wf;
  wf.junctions = junctions;
  wf.lines = lines;
  return {build_graph(wf), junction_positions(wf)};
}

}  // namespace

TEST_CASE("xor_compose is symmetric difference") {
  CHECK(xor_compose({1, 2, 3}, {2, 3, 4}) == std::vector<int>{1, 4});
  CHECK(xor_compose({}, {5}) == std::vector<int>{5});
  CHECK(xor_compose({5}, {5}).empty());
}

TEST_CASE("triangle enumerates to one polygon") {
  Built b = build({{0, {0.1, 0.1}, {}}, {1, {0.9, 0.1}, {}}, {2, {0.5, 0.8}, {}}},
                  {{0, 0, 1}, {1, 1, 2}, {2, 2, 0}});
  auto polys = enumerate_polygons(b.graph, b.positions, {});
  REQUIRE(polys.size() == 1);
  CHECK(polys[0].vertices.size() == 3);
}

TEST_CASE("two triangles sharing an edge give both plus their union") {
  Built b = build({{0, {0.1, 0.5}, {}}, {1, {0.9, 0.5}, {}}, {2, {0.5, 0.9}, {}}, {3, {0.5, 0.1}, {}}},
                  {{0, 0, 1}, {1, 1, 2}, {2, 2, 0}, {3, 1, 3}, {4, 3, 0}});
  auto polys = enumerate_polygons(b.graph, b.positions, {});
  CHECK(polys.size() == 3);  // upper, lower, outer quad
  // output is sorted by edge count first
  CHECK(polys[0].vertices.size() == 3);
  CHECK(polys[1].vertices.size() == 3);
  CHECK(polys[2].vertices.size() == 4);
}

TEST_CASE("theta graph yields three polygons") {
  Built b = build({{0, {0.1, 0.5}, {}}, {1, {0.9, 0.5}, {}}, {2, {0.5, 0.9}, {}}, {3, {0.5, 0.1}, {}}},
                  {{0, 0, 1}, {1, 0, 2}, {2, 2, 1}, {3, 0, 3}, {4, 3, 1}});
  auto polys = enumerate_polygons(b.graph, b.positions, {});
  CHECK(polys.size() == 3);
}

TEST_CASE("K4 with central vertex yields four triangles and three quads") {
  Built b = build({{0, {0.1, 0.1}, {}}, {1, {0.9, 0.1}, {}}, {2, {0.5, 0.9}, {}}, {3, {0.5, 0.37}, {}}},
                  {{0, 0, 1}, {1, 1, 2}, {2, 2, 0}, {3, 0, 3}, {4, 1, 3}, {5, 2, 3}});
  auto polys = enumerate_polygons(b.graph, b.positions, {});
  CHECK(polys.size() == 7);
  CHECK(edge_sets(polys, b.graph) == oracles::all_simple_polygons(b.graph, b.positions));
}

TEST_CASE("enumeration equals the exhaustive oracle on random graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    fixtures::RandomGraph rg = fixtures::random_connected_graph(rng, 8, 12);
    auto polys = enumerate_polygons(rg.graph, rg.positions, {});
    CHECK(edge_sets(polys, rg.graph) == oracles::all_simple_polygons(rg.graph, rg.positions));
  }
}

TEST_CASE("geometrically self-intersecting cycles are dropped") {
  // a 4-cycle whose ring crosses itself (bowtie order in the plane)
  Built b = build({{0, {0.1, 0.1}, {}}, {1, {0.9, 0.9}, {}}, {2, {0.9, 0.1}, {}}, {3, {0.1, 0.9}, {}}},
                  {{0, 0, 1}, {1, 1, 2}, {2, 2, 3}, {3, 3, 0}});
  auto polys = enumerate_polygons(b.graph, b.positions, {});
  CHECK(polys.empty());
}

TEST_CASE("polygon count limit raises LimitExceeded with the count") {
  Built b = build({{0, {0.1, 0.1}, {}}, {1, {0.9, 0.1}, {}}, {2, {0.5, 0.9}, {}}, {3, {0.5, 0.37}, {}}},
                  {{0, 0, 1}, {1, 1, 2}, {2, 2, 0}, {3, 0, 3}, {4, 1, 3}, {5, 2, 3}});
  EnumerationLimits limits;
  limits.max_polygons = 2;
  try {
    enumerate_polygons(b.graph, b.positions, limits);
    FAIL("expected LimitExceeded");
  } catch (const LimitExceeded& e) {
    CHECK(e.count == 3);
  }
}

TEST_CASE("oversized coupled basis raises LimitExceeded") {
  // a 1 x 14 strip of squares: 14 basis cycles all sharing rails -> one
  // meta-component larger than the default bound of 12
  std::mt19937_64 rng(3);
  std::vector<Junction> junctions;
  std::vector<LineSegment> lines;
  int cols = 14;
  for (int i = 0; i <= cols; ++i) {
    junctions.push_back({i, {0.05 + 0.9 * i / cols, 0.3}, {}});
    junctions.push_back({100 + i, {0.05 + 0.9 * i / cols, 0.7}, {}});
  }
  int next = 0;
  for (int i = 0; i < cols; ++i) {
    lines.push_back({next++, i, i + 1});
    lines.push_back({next++, 100 + i, 101 + i});
  }
  for (int i = 0; i <= cols; ++i) lines.push_back({next++, i, 100 + i});
  Built b = build(junctions, lines);

  CHECK_THROWS_AS(enumerate_polygons(b.graph, b.positions, {}), LimitExceeded);
  EnumerationLimits relaxed;
  relaxed.max_basis_subset_size = 14;
  relaxed.max_polygons = 1000000;
  auto polys = enumerate_polygons(b.graph, b.positions, relaxed);
  CHECK(polys.size() == 14 * 15 / 2);  // every contiguous run of squares
}

TEST_CASE("sample_polygons is deterministic, deduplicated, and labeled by IoU") {
  std::mt19937_64 rng(21);
  Scene scene = fixtures::grid_scene(rng, 2, 3);
  PlaneGraph g = build_graph(scene.wireframe);
  PositionMap pos = junction_positions(scene.wireframe);
  std::vector<PlaneAnnotation> annotations = plane_annotations(scene);

  auto samples = sample_polygons(g, pos, annotations, 123);
  auto samples_again = sample_polygons(g, pos, annotations, 123);
  REQUIRE(samples.size() == samples_again.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(samples[i].first.vertex_ids == samples_again[i].first.vertex_ids);
    CHECK(samples[i].second == samples_again[i].second);
  }
  CHECK(samples.size() <= 40);

  for (const auto& [poly, label] : samples) CHECK(polygon_is_simple(poly));

  // edge sets are unique across the whole sample
  auto labeled_sets = edge_sets([&] {
    std::vector<Polygon> ps;
    for (const auto& [poly, label] : samples) ps.push_back(poly);
    return ps;
  }(), g);
  CHECK(labeled_sets.size() == samples.size());

  // every label agrees with the max-IoU rule
  for (const auto& [poly, label] : samples) {
    double best = 0.0;
    for (const PlaneAnnotation& a : annotations) {
      best = std::max(best, polygon_iou(poly, a.polygon, 256));
    }
    if (label == SampleLabel::Positive) {
      CHECK(best >= 0.5);
    } else {
      CHECK(best < 0.5);
    }
  }

  // annotated planes are present as positives
  int positives = 0;
  for (const auto& [poly, label] : samples) positives += label == SampleLabel::Positive;
  CHECK(positives >= static_cast<int>(annotations.size()));
}
