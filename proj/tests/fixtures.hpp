#pragma once

// Deterministic random instances shared by the unit and acceptance tests.

#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "wirepoly/geometry.hpp"
#include "wirepoly/matching.hpp"
#include "wirepoly/scene_io.hpp"
#include "wirepoly/wireframe.hpp"

namespace fixtures {

struct RandomGraph {
  wirepoly::PlaneGraph graph;  // connected
  wirepoly::PositionMap positions;
  std::map<int, double> weights;  // uniform (0, 1) per line
};

// Connected graph: random spanning tree plus random extra edges, vertices at
// random positions in the unit square.
inline RandomGraph random_connected_graph(std::mt19937_64& rng, int max_v = 10, int max_e = 15) {
  std::uniform_real_distribution<double> coord(0.03, 0.97);
  std::uniform_real_distribution<double> weight(0.01, 0.99);

  int v = std::uniform_int_distribution<int>(3, max_v)(rng);
  int max_possible = v * (v - 1) / 2;
  int e = std::uniform_int_distribution<int>(v - 1, std::min(max_e, max_possible))(rng);

  RandomGraph out;
  for (int i = 0; i < v; ++i) {
    out.graph.add_vertex(i);
    out.positions[i] = {coord(rng), coord(rng)};
  }
  std::set<std::pair<int, int>> edges;
  int next_line = 0;
  for (int i = 1; i < v; ++i) {
    int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
    edges.insert({j, i});
    out.graph.add_edge(next_line++, j, i);
  }
  std::uniform_int_distribution<int> pick(0, v - 1);
  while (static_cast<int>(edges.size()) < e) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!edges.insert({a, b}).second) continue;
    out.graph.add_edge(next_line++, a, b);
  }
  for (const auto& edge : out.graph.edges()) out.weights[edge.line_id] = weight(rng);
  return out;
}

// Room-layout style scene: an r x c grid of rectangular cells inside the
// unit square with lightly jittered split positions. Every cell is a plane
// whose four sides are shared with its neighbors.
inline wirepoly::Scene grid_scene(std::mt19937_64& rng, int max_rows = 2, int max_cols = 3) {
  int rows = std::uniform_int_distribution<int>(1, max_rows)(rng);
  int cols = std::uniform_int_distribution<int>(1, max_cols)(rng);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);

  auto splits = [&](int n) {
    std::vector<double> t(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
      double base = 0.05 + 0.9 * i / n;
      if (i > 0 && i < n) base += 0.9 / n * jitter(rng);
      t[static_cast<std::size_t>(i)] = base;
    }
    return t;
  };
  std::vector<double> xs = splits(cols), ys = splits(rows);

  wirepoly::Scene scene;
  auto jid = [&](int ix, int iy) { return iy * (cols + 1) + ix; };
  for (int iy = 0; iy <= rows; ++iy) {
    for (int ix = 0; ix <= cols; ++ix) {
      scene.wireframe.junctions.push_back(
          {jid(ix, iy),
           {xs[static_cast<std::size_t>(ix)], ys[static_cast<std::size_t>(iy)]},
           wirepoly::JunctionKind::Proper});
    }
  }
  std::map<std::pair<int, int>, int> line_by_pair;
  int next_line = 0;
  auto add_line = [&](int a, int b) {
    std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    auto it = line_by_pair.find(key);
    if (it == line_by_pair.end()) {
      it = line_by_pair.emplace(key, next_line++).first;
      scene.wireframe.lines.push_back({it->second, key.first, key.second});
    }
    return it->second;
  };

  const wirepoly::PlaneLabel labels[3] = {wirepoly::PlaneLabel::Wall, wirepoly::PlaneLabel::Floor,
                                          wirepoly::PlaneLabel::Ceiling};
  int cell = 0;
  for (int iy = 0; iy < rows; ++iy) {
    for (int ix = 0; ix < cols; ++ix) {
      wirepoly::ScenePlane plane;
      plane.id = cell;
      plane.label = labels[cell % 3];
      plane.line_ids = {add_line(jid(ix, iy), jid(ix + 1, iy)),
                        add_line(jid(ix + 1, iy), jid(ix + 1, iy + 1)),
                        add_line(jid(ix + 1, iy + 1), jid(ix, iy + 1)),
                        add_line(jid(ix, iy + 1), jid(ix, iy))};
      scene.planes.push_back(std::move(plane));
      ++cell;
    }
  }
  return scene;
}

// Two rooms side by side sharing the middle wall (line 3).
inline wirepoly::Scene two_cell_scene() {
  wirepoly::Scene scene;
  scene.wireframe.junctions = {
      {0, {0.05, 0.05}, {}}, {1, {0.50, 0.05}, {}}, {2, {0.95, 0.05}, {}},
      {3, {0.05, 0.95}, {}}, {4, {0.50, 0.95}, {}}, {5, {0.95, 0.95}, {}},
  };
  scene.wireframe.lines = {{0, 0, 1}, {1, 1, 2}, {2, 0, 3}, {3, 1, 4},
                           {4, 2, 5}, {5, 3, 4}, {6, 4, 5}};
  scene.planes = {{0, {0, 3, 5, 2}, wirepoly::PlaneLabel::Wall},
                  {1, {1, 4, 6, 3}, wirepoly::PlaneLabel::Floor}};
  return scene;
}

inline wirepoly::Polygon make_polygon(std::initializer_list<wirepoly::Point2> pts) {
  wirepoly::Polygon p;
  p.vertices = pts;
  return p;
}

// Axis-aligned rectangle polygon.
inline wirepoly::Polygon rect(double x0, double y0, double x1, double y1) {
  return make_polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

}  // namespace fixtures
