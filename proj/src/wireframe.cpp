#include "wirepoly/wireframe.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace wirepoly {

PositionMap junction_positions(const Wireframe& wf) {
  PositionMap out;
  out.reserve(wf.junctions.size());
  for (const Junction& j : wf.junctions) out[j.id] = j.position;
  return out;
}

void PlaneGraph::add_vertex(int id) {
  adjacency_.try_emplace(id);
}

bool PlaneGraph::add_edge(int line_id, int u, int v) {
  if (u == v) throw std::invalid_argument("PlaneGraph: self loop on junction " + std::to_string(u));
  if (u > v) std::swap(u, v);
  auto [it, inserted] = edge_by_pair_.try_emplace({u, v}, line_id);
  if (!inserted) {
    if (line_id < it->second) {
      lines_.erase(it->second);
      lines_[line_id] = {u, v};
      for (auto* adj : {&adjacency_[u], &adjacency_[v]}) {
        for (Neighbor& n : *adj) {
          if (n.line_id == it->second) n.line_id = line_id;
        }
        std::sort(adj->begin(), adj->end(), [](const Neighbor& a, const Neighbor& b) {
          return std::tie(a.vertex, a.line_id) < std::tie(b.vertex, b.line_id);
        });
      }
      it->second = line_id;
    }
    return false;
  }
  lines_[line_id] = {u, v};
  add_vertex(u);
  add_vertex(v);
  auto insert_sorted = [](std::vector<Neighbor>& adj, Neighbor n) {
    auto pos = std::lower_bound(adj.begin(), adj.end(), n, [](const Neighbor& a, const Neighbor& b) {
      return std::tie(a.vertex, a.line_id) < std::tie(b.vertex, b.line_id);
    });
    adj.insert(pos, n);
  };
  insert_sorted(adjacency_[u], {v, line_id});
  insert_sorted(adjacency_[v], {u, line_id});
  return true;
}

std::vector<int> PlaneGraph::vertices() const {
  std::vector<int> out;
  out.reserve(adjacency_.size());
  for (const auto& [id, _] : adjacency_) out.push_back(id);
  return out;
}

std::vector<PlaneGraph::Edge> PlaneGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(lines_.size());
  for (const auto& [line_id, uv] : lines_) out.push_back({line_id, uv.first, uv.second});
  return out;
}

const std::vector<PlaneGraph::Neighbor>& PlaneGraph::neighbors(int id) const {
  static const std::vector<Neighbor> empty;
  auto it = adjacency_.find(id);
  return it == adjacency_.end() ? empty : it->second;
}

std::optional<std::pair<int, int>> PlaneGraph::line_endpoints(int line_id) const {
  auto it = lines_.find(line_id);
  if (it == lines_.end()) return std::nullopt;
  return it->second;
}

PlaneGraph build_graph(const Wireframe& wf) {
  PlaneGraph g;
  for (const Junction& j : wf.junctions) g.add_vertex(j.id);
  for (const LineSegment& l : wf.lines) {
    if (!g.has_vertex(l.j1) || !g.has_vertex(l.j2)) {
      throw std::invalid_argument("build_graph: line " + std::to_string(l.id) +
                                  " references a missing junction");
    }
    if (l.j1 == l.j2) {
      throw std::invalid_argument("build_graph: line " + std::to_string(l.id) + " is a self loop");
    }
    if (!g.add_edge(l.id, l.j1, l.j2)) ++g.dropped_duplicates;
  }
  return g;
}

std::vector<PlaneGraph> connected_subgraphs(const PlaneGraph& g) {
  std::vector<PlaneGraph> out;
  std::map<int, bool> seen;
  for (int v : g.vertices()) seen[v] = false;

  for (int start : g.vertices()) {
    if (seen[start]) continue;
    PlaneGraph comp;
    std::deque<int> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      comp.add_vertex(v);
      for (const PlaneGraph::Neighbor& n : g.neighbors(v)) {
        comp.add_edge(n.line_id, v, n.vertex);
        if (!seen[n.vertex]) {
          seen[n.vertex] = true;
          queue.push_back(n.vertex);
        }
      }
    }
    comp.dropped_duplicates = 0;  // induced copy, duplicates already collapsed
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<Cycle> cycle_basis(const PlaneGraph& component, std::optional<int> root) {
  std::vector<Cycle> basis;
  std::vector<int> verts = component.vertices();
  if (verts.empty()) return basis;

  int start = root.value_or(verts.front());
  if (!component.has_vertex(start)) {
    throw std::invalid_argument("cycle_basis: root vertex not in component");
  }

  // BFS tree: parent vertex and the tree line used to reach each vertex.
  std::map<int, std::pair<int, int>> parent;  // vertex -> (parent, line id)
  std::map<int, int> depth;
  std::map<int, bool> tree_line;  // line id -> is tree edge
  depth[start] = 0;
  std::deque<int> queue{start};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (const PlaneGraph::Neighbor& n : component.neighbors(v)) {
      if (!depth.count(n.vertex)) {
        depth[n.vertex] = depth[v] + 1;
        parent[n.vertex] = {v, n.line_id};
        tree_line[n.line_id] = true;
        queue.push_back(n.vertex);
      }
    }
  }
  if (depth.size() != verts.size()) {
    throw std::invalid_argument("cycle_basis: graph is not connected");
  }

  for (const PlaneGraph::Edge& e : component.edges()) {
    if (tree_line.count(e.line_id)) continue;
    // Fundamental cycle: tree path u..lca, lca..v, plus the non-tree edge.
    int u = e.u, v = e.v;
    std::vector<int> path_u{u}, path_v{v};
    std::vector<int> lines_u, lines_v;
    int a = u, b = v;
    while (depth[a] > depth[b]) {
      auto [p, line] = parent[a];
      lines_u.push_back(line);
      a = p;
      path_u.push_back(a);
    }
    while (depth[b] > depth[a]) {
      auto [p, line] = parent[b];
      lines_v.push_back(line);
      b = p;
      path_v.push_back(b);
    }
    while (a != b) {
      auto [pa, la] = parent[a];
      auto [pb, lb] = parent[b];
      lines_u.push_back(la);
      lines_v.push_back(lb);
      a = pa;
      b = pb;
      path_u.push_back(a);
      path_v.push_back(b);
    }
    // path_u: u .. lca ; path_v: v .. lca. Cycle order: u .. lca .. v, close with e.
    Cycle c;
    c.vertex_seq = path_u;
    for (auto it = path_v.rbegin() + 1; it != path_v.rend(); ++it) c.vertex_seq.push_back(*it);
    c.line_ids = lines_u;
    c.line_ids.insert(c.line_ids.end(), lines_v.begin(), lines_v.end());
    c.line_ids.push_back(e.line_id);
    std::sort(c.line_ids.begin(), c.line_ids.end());
    basis.push_back(std::move(c));
  }
  return basis;
}

std::optional<std::vector<int>> cycle_vertex_order(const PlaneGraph& g, const std::vector<int>& line_ids) {
  if (line_ids.size() < 3) return std::nullopt;
  std::map<int, std::vector<int>> adj;  // vertex -> sorted neighbor vertices within the edge set
  for (int line : line_ids) {
    auto uv = g.line_endpoints(line);
    if (!uv) return std::nullopt;
    adj[uv->first].push_back(uv->second);
    adj[uv->second].push_back(uv->first);
  }
  for (auto& [v, ns] : adj) {
    if (ns.size() != 2) return std::nullopt;
    std::sort(ns.begin(), ns.end());
  }
  // Walk from the smallest vertex toward its smaller neighbor.
  int start = adj.begin()->first;
  std::vector<int> seq{start};
  int prev = start;
  int cur = adj[start][0];
  while (cur != start) {
    seq.push_back(cur);
    const auto& ns = adj[cur];
    int next = (ns[0] == prev) ? ns[1] : ns[0];
    prev = cur;
    cur = next;
  }
  // A disconnected union of cycles walks only one of them.
  if (seq.size() != adj.size()) return std::nullopt;
  return seq;
}

Polygon polygon_from_vertex_seq(const std::vector<int>& vertex_seq, const PositionMap& positions) {
  Polygon p;
  p.vertices.reserve(vertex_seq.size());
  p.vertex_ids = vertex_seq;
  for (int id : vertex_seq) {
    auto it = positions.find(id);
    if (it == positions.end()) {
      throw std::invalid_argument("polygon_from_vertex_seq: missing position for junction " + std::to_string(id));
    }
    p.vertices.push_back(it->second);
  }
  return p;
}

}  // namespace wirepoly
