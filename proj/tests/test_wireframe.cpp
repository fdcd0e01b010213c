#include <doctest.h>

#include <random>
#include <stdexcept>

#include "fixtures.hpp"
#include "wirepoly/wireframe.hpp"

using namespace wirepoly;

namespace {

Wireframe square_wireframe() {
  Wireframe wf;
  wf.junctions = {{0, {0.1, 0.1}, JunctionKind::Proper},
                  {1, {0.9, 0.1}, JunctionKind::Proper},
                  {2, {0.9, 0.9}, JunctionKind::Proper},
                  {3, {0.1, 0.9}, JunctionKind::Proper}};
  wf.lines = {{0, 0, 1}, {1, 1, 2}, {2, 2, 3}, {3, 3, 0}};
  return wf;
}

}  // namespace

TEST_CASE("build_graph validates references") {
  Wireframe wf = square_wireframe();
  PlaneGraph g = build_graph(wf);
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 4);
  CHECK(g.dropped_duplicates == 0);

  Wireframe dangling = wf;
  dangling.lines.push_back({9, 0, 42});
  CHECK_THROWS_AS(build_graph(dangling), std::invalid_argument);

  Wireframe self_loop = wf;
  self_loop.lines.push_back({9, 1, 1});
  CHECK_THROWS_AS(build_graph(self_loop), std::invalid_argument);
}

TEST_CASE("duplicate edges collapse to the lowest line id") {
  Wireframe wf = square_wireframe();
  wf.lines.push_back({7, 1, 0});  // duplicate of line 0, higher id
  PlaneGraph g = build_graph(wf);
  CHECK(g.edge_count() == 4);
  CHECK(g.dropped_duplicates == 1);
  auto endpoints = g.line_endpoints(0);
  REQUIRE(endpoints.has_value());
  CHECK_FALSE(g.line_endpoints(7).has_value());

  // lower id arriving second still wins
  Wireframe wf2 = square_wireframe();
  for (auto& line : wf2.lines) line.id += 10;
  wf2.lines.push_back({0, 0, 1});
  PlaneGraph g2 = build_graph(wf2);
  CHECK(g2.line_endpoints(0).has_value());
  CHECK_FALSE(g2.line_endpoints(10).has_value());
}

TEST_CASE("connected_subgraphs splits and orders components") {
  Wireframe wf = square_wireframe();
  // add a disjoint triangle with smaller vertex ids shifted up
  wf.junctions.push_back({10, {0.3, 0.3}, JunctionKind::Proper});
  wf.junctions.push_back({11, {0.6, 0.3}, JunctionKind::Proper});
  wf.junctions.push_back({12, {0.45, 0.6}, JunctionKind::Proper});
  wf.lines.push_back({10, 10, 11});
  wf.lines.push_back({11, 11, 12});
  wf.lines.push_back({12, 12, 10});
  // and an isolated junction
  wf.junctions.push_back({20, {0.99, 0.99}, JunctionKind::False});

  auto comps = connected_subgraphs(build_graph(wf));
  REQUIRE(comps.size() == 3);
  CHECK(comps[0].vertex_count() == 4);  // component containing vertex 0 first
  CHECK(comps[1].vertex_count() == 3);
  CHECK(comps[2].vertex_count() == 1);
  CHECK(comps[2].edge_count() == 0);
}

TEST_CASE("cycle_basis has dimension E - V + 1 and yields real cycles") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    fixtures::RandomGraph rg = fixtures::random_connected_graph(rng);
    std::vector<Cycle> basis = cycle_basis(rg.graph);
    CHECK(static_cast<int>(basis.size()) == rg.graph.edge_count() - rg.graph.vertex_count() + 1);
    for (const Cycle& c : basis) {
      CHECK(c.line_ids.size() >= 3);
      CHECK(c.vertex_seq.size() == c.line_ids.size());
      auto order = cycle_vertex_order(rg.graph, c.line_ids);
      CHECK(order.has_value());
    }
  }
}

TEST_CASE("cycle_vertex_order walks the unique ring") {
  PlaneGraph g = build_graph(square_wireframe());
  auto order = cycle_vertex_order(g, {0, 1, 2, 3});
  REQUIRE(order.has_value());
  CHECK(*order == std::vector<int>{0, 1, 2, 3});  // starts at smallest, toward smaller neighbor

  // a path is not a cycle
  CHECK_FALSE(cycle_vertex_order(g, {0, 1}).has_value());
  // two disjoint cycles in one edge set are rejected
  Wireframe two = square_wireframe();
  two.junctions.push_back({4, {0.2, 0.2}, JunctionKind::Proper});
  two.junctions.push_back({5, {0.4, 0.2}, JunctionKind::Proper});
  two.junctions.push_back({6, {0.3, 0.4}, JunctionKind::Proper});
  two.lines.push_back({4, 4, 5});
  two.lines.push_back({5, 5, 6});
  two.lines.push_back({6, 6, 4});
  PlaneGraph g2 = build_graph(two);
  CHECK_FALSE(cycle_vertex_order(g2, {0, 1, 2, 3, 4, 5, 6}).has_value());
  // vertex with degree != 2 rejected
  Wireframe chord = square_wireframe();
  chord.lines.push_back({4, 0, 2});
  CHECK_FALSE(cycle_vertex_order(build_graph(chord), {0, 1, 2, 3, 4}).has_value());
}

TEST_CASE("polygon_from_vertex_seq uses junction positions") {
  Wireframe wf = square_wireframe();
  PositionMap pos = junction_positions(wf);
  Polygon p = polygon_from_vertex_seq({0, 1, 2, 3}, pos);
  CHECK(p.vertices.size() == 4);
  CHECK(p.vertex_ids == std::vector<int>{0, 1, 2, 3});
  CHECK(p.vertices[2].x == doctest::Approx(0.9));
  CHECK_THROWS_AS(polygon_from_vertex_seq({0, 99}, pos), std::invalid_argument);
}
