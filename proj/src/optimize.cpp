#include "wirepoly/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace wirepoly {

namespace {

struct PathResult {
  std::vector<int> vertex_seq;  // from source to target inclusive
  std::vector<int> line_ids;    // path edges, in walk order
  double total_weight = 0.0;
};

// Dijkstra from source to target, skipping the edge with id `skip_line`.
// Ties resolved toward the smaller vertex id for determinism.
std::optional<PathResult> shortest_path(const PlaneGraph& g, const std::map<int, double>& weights,
                                        int source, int target, int skip_line) {
  std::map<int, double> dist;
  std::map<int, std::pair<int, int>> parent;  // vertex -> (prev vertex, line id)
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    auto du = dist.find(u);
    if (du == dist.end() || d > du->second) continue;
    if (u == target) break;
    for (const PlaneGraph::Neighbor& n : g.neighbors(u)) {
      if (n.line_id == skip_line) continue;
      double nd = d + weights.at(n.line_id);
      auto dv = dist.find(n.vertex);
      if (dv == dist.end() || nd < dv->second) {
        dist[n.vertex] = nd;
        parent[n.vertex] = {u, n.line_id};
        heap.emplace(nd, n.vertex);
      }
    }
  }
  auto dt = dist.find(target);
  if (dt == dist.end()) return std::nullopt;
  PathResult out;
  out.total_weight = dt->second;
  int cur = target;
  while (cur != source) {
    auto [prev, line] = parent.at(cur);
    out.vertex_seq.push_back(cur);
    out.line_ids.push_back(line);
    cur = prev;
  }
  out.vertex_seq.push_back(source);
  std::reverse(out.vertex_seq.begin(), out.vertex_seq.end());
  std::reverse(out.line_ids.begin(), out.line_ids.end());
  return out;
}

}  // namespace

std::optional<Proposal> min_avg_weight_polygon(const WeightedGraph& g, const PositionMap& positions,
                                               int iterations) {
  if (iterations < 1) throw std::invalid_argument("min_avg_weight_polygon: iterations must be >= 1");
  std::vector<PlaneGraph::Edge> edges = g.graph.edges();
  for (const PlaneGraph::Edge& e : edges) {
    auto it = g.weights.find(e.line_id);
    if (it == g.weights.end() || !std::isfinite(it->second)) {
      throw std::invalid_argument("min_avg_weight_polygon: missing or non-finite weight for line " +
                                  std::to_string(e.line_id));
    }
  }

  std::vector<const PlaneGraph::Edge*> order;
  order.reserve(edges.size());
  for (const PlaneGraph::Edge& e : edges) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [&](const PlaneGraph::Edge* a, const PlaneGraph::Edge* b) {
    double wa = g.weights.at(a->line_id), wb = g.weights.at(b->line_id);
    if (wa != wb) return wa < wb;
    return a->line_id < b->line_id;
  });

  double best_avg = std::numeric_limits<double>::infinity();
  std::optional<Proposal> best;
  int rounds = std::min<int>(iterations, static_cast<int>(order.size()));
  for (int t = 0; t < rounds; ++t) {
    const PlaneGraph::Edge& seed = *order[t];
    auto path = shortest_path(g.graph, g.weights, seed.u, seed.v, seed.line_id);
    if (!path) continue;
    int num_edges = static_cast<int>(path->line_ids.size()) + 1;
    if (num_edges < 3) continue;
    double avg = (path->total_weight + g.weights.at(seed.line_id)) / num_edges;
    if (avg >= best_avg) continue;
    Polygon poly = polygon_from_vertex_seq(path->vertex_seq, positions);
    if (!polygon_is_simple(poly)) continue;
    Proposal p;
    p.polygon = std::move(poly);
    p.avg_weight = avg;
    p.line_ids = path->line_ids;
    p.line_ids.push_back(seed.line_id);
    std::sort(p.line_ids.begin(), p.line_ids.end());
    best_avg = avg;
    best = std::move(p);
  }
  return best;
}

std::optional<Proposal> propose_polygon(const Wireframe& wireframe,
                                        const std::map<int, double>& line_scores,
                                        const ProposalConfig& config) {
  if (!(config.kappa > 0.0 && config.kappa < 1.0)) {
    throw std::invalid_argument("propose_polygon: kappa must lie in (0, 1)");
  }
  if (config.iterations && *config.iterations < 1) {
    throw std::invalid_argument("propose_polygon: iterations must be >= 1");
  }

  Wireframe kept;
  for (const LineSegment& line : wireframe.lines) {
    auto it = line_scores.find(line.id);
    if (it == line_scores.end()) {
      throw std::invalid_argument("propose_polygon: missing score for line " + std::to_string(line.id));
    }
    double s = it->second;
    if (!(s >= 0.0 && s <= 1.0)) {
      throw std::invalid_argument("propose_polygon: score out of [0, 1] for line " +
                                  std::to_string(line.id));
    }
    if (s > config.kappa) kept.lines.push_back(line);
  }
  if (kept.lines.empty()) return std::nullopt;
  kept.junctions = wireframe.junctions;

  PlaneGraph g = build_graph(kept);
  PositionMap positions = junction_positions(wireframe);

  std::optional<Proposal> best;
  for (const PlaneGraph& comp : connected_subgraphs(g)) {
    if (comp.edge_count() == 0) continue;
    WeightedGraph wg;
    wg.graph = comp;
    for (const PlaneGraph::Edge& e : comp.edges()) wg.weights[e.line_id] = 1.0 - line_scores.at(e.line_id);
    int iters = config.iterations.value_or(comp.edge_count());
    auto cand = min_avg_weight_polygon(wg, positions, iters);
    if (cand && (!best || cand->avg_weight < best->avg_weight)) best = std::move(cand);
  }
  return best;
}

std::vector<std::optional<Proposal>> propose_all(const Wireframe& wireframe,
                                                 const std::vector<std::map<int, double>>& per_anchor_scores,
                                                 const ProposalConfig& config) {
  std::vector<std::optional<Proposal>> out;
  out.reserve(per_anchor_scores.size());
  for (const auto& scores : per_anchor_scores) out.push_back(propose_polygon(wireframe, scores, config));
  return out;
}

}  // namespace wirepoly
