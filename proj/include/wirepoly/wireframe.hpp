#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "wirepoly/geometry.hpp"

namespace wirepoly {

enum class JunctionKind { Proper, False };

struct Junction {
  int id = 0;
  Point2 position;
  JunctionKind kind = JunctionKind::Proper;
};

/// Undirected segment between two junctions; endpoint order carries no meaning.
struct LineSegment {
  int id = 0;
  int j1 = 0;
  int j2 = 0;
};

struct Wireframe {
  std::vector<Junction> junctions;
  std::vector<LineSegment> lines;
};

using PositionMap = std::unordered_map<int, Point2>;

PositionMap junction_positions(const Wireframe& wf);

/// Simple undirected graph over junction ids with line ids as edge labels.
/// No parallel edges, no self loops. Iteration orders are deterministic:
/// vertices ascending, edges by ascending line id, neighbor lists sorted.
class PlaneGraph {
 public:
  struct Edge {
    int line_id;
    int u, v;  // u < v
  };
  struct Neighbor {
    int vertex;
    int line_id;
  };

  void add_vertex(int id);
  /// Returns false when the (u,v) pair already exists; the lower line id wins.
  bool add_edge(int line_id, int u, int v);

  bool has_vertex(int id) const { return adjacency_.count(id) != 0; }
  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  int edge_count() const { return static_cast<int>(lines_.size()); }

  std::vector<int> vertices() const;
  /// Edges sorted by ascending line id.
  std::vector<Edge> edges() const;
  /// Sorted (vertex, line id) pairs; empty for unknown vertices.
  const std::vector<Neighbor>& neighbors(int id) const;
  /// Endpoints (u < v) of a line id; nullopt if absent.
  std::optional<std::pair<int, int>> line_endpoints(int line_id) const;

  int dropped_duplicates = 0;

 private:
  std::map<int, std::vector<Neighbor>> adjacency_;
  std::map<int, std::pair<int, int>> lines_;           // line id -> (u, v)
  std::map<std::pair<int, int>, int> edge_by_pair_;    // (u, v) -> line id
};

/// One vertex per junction, one edge per line segment; duplicate segments are
/// collapsed keeping the lowest line id (count reported on the graph).
/// Throws std::invalid_argument on dangling junction references or self loops.
PlaneGraph build_graph(const Wireframe& wf);

/// Maximal connected components with their induced edges, ordered by the
/// smallest contained vertex id. Isolated vertices form singleton components.
std::vector<PlaneGraph> connected_subgraphs(const PlaneGraph& g);

/// Closed walk through a degree-2 edge set. line_ids is the sorted edge set;
/// vertex_seq the induced cyclic vertex order (first vertex not repeated).
struct Cycle {
  std::vector<int> line_ids;
  std::vector<int> vertex_seq;
};

/// Fundamental cycle basis from a BFS spanning tree rooted at `root`
/// (default: smallest vertex id). One cycle per non-tree edge, in ascending
/// non-tree line id order; a tree graph yields an empty basis.
std::vector<Cycle> cycle_basis(const PlaneGraph& component, std::optional<int> root = {});

/// Orders the vertices of an edge set that forms a single cycle: every vertex
/// degree 2 and connected. Starts at the smallest vertex, walking toward its
/// smaller-id neighbor. Returns nullopt when the edge set is not one cycle.
std::optional<std::vector<int>> cycle_vertex_order(const PlaneGraph& g, const std::vector<int>& line_ids);

/// Polygon with coordinates looked up from `positions`; vertex_ids filled in.
Polygon polygon_from_vertex_seq(const std::vector<int>& vertex_seq, const PositionMap& positions);

}  // namespace wirepoly
