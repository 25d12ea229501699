#include "insq/network/graph.hpp"

#include <cmath>
#include <string>

#include "insq/error.hpp"

namespace insq::net {

std::size_t Graph::vertex_index(VertexId id) const {
  const auto it = vertex_slot_.find(id);
  if (it == vertex_slot_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown vertex " + std::to_string(id));
  }
  return it->second;
}

std::size_t Graph::edge_index(EdgeId id) const {
  const auto it = edge_slot_.find(id);
  if (it == edge_slot_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown edge " + std::to_string(id));
  }
  return it->second;
}

std::optional<EdgeId> Graph::edge_between(VertexId a, VertexId b) const {
  if (!has_vertex(a) || !has_vertex(b)) return std::nullopt;
  const std::size_t ia = vertex_index(a);
  const std::size_t ib = vertex_index(b);
  std::optional<std::size_t> best;
  for (const Arc& arc : arcs_[ia]) {
    if (arc.other != ib) continue;
    if (!best || edges_[arc.edge].length < edges_[*best].length ||
        (edges_[arc.edge].length == edges_[*best].length &&
         edges_[arc.edge].id < edges_[*best].id)) {
      best = arc.edge;
    }
  }
  if (!best) return std::nullopt;
  return edges_[*best].id;
}

void Graph::check(const NetworkPosition& p) const {
  if (!has_edge(p.edge)) {
    throw Error(ErrorCode::kInvalidArgument, "position on unknown edge " + std::to_string(p.edge));
  }
  const Edge& e = edge(p.edge);
  if (!std::isfinite(p.offset) || p.offset < 0.0 || p.offset > e.length) {
    throw Error(ErrorCode::kInvalidArgument,
                "offset " + std::to_string(p.offset) + " outside edge " + std::to_string(e.id));
  }
}

geo::Point Graph::point_at(const NetworkPosition& p) const {
  const Edge& e = edge(p.edge);
  const geo::Point& a = vertex(e.u).pos;
  const geo::Point& b = vertex(e.v).pos;
  const double t = e.length > 0.0 ? p.offset / e.length : 0.0;
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

NetworkPosition Graph::position_of(VertexId v) const {
  const std::size_t iv = vertex_index(v);
  if (arcs_[iv].empty()) {
    throw Error(ErrorCode::kInvalidArgument, "vertex " + std::to_string(v) + " has no edges");
  }
  const Edge& e = edges_[arcs_[iv].front().edge];
  return {e.id, e.u == v ? 0.0 : e.length};
}

bool Graph::connected() const {
  if (vertices_.empty()) return true;
  std::vector<char> seen(vertices_.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    for (const Arc& arc : arcs_[cur]) {
      if (!seen[arc.other]) {
        seen[arc.other] = 1;
        ++count;
        stack.push_back(arc.other);
      }
    }
  }
  return count == vertices_.size();
}

Graph Graph::assemble(std::vector<Vertex> vertices, std::vector<Edge> edges) {
  Graph g;
  g.vertices_ = std::move(vertices);
  g.edges_ = std::move(edges);
  g.vertex_slot_.reserve(g.vertices_.size());
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    if (!g.vertex_slot_.emplace(g.vertices_[i].id, i).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate vertex id " + std::to_string(g.vertices_[i].id));
    }
  }
  g.arcs_.resize(g.vertices_.size());
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    const Edge& e = g.edges_[i];
    if (!g.edge_slot_.emplace(e.id, i).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate edge id " + std::to_string(e.id));
    }
    const std::size_t iu = g.vertex_index(e.u);
    const std::size_t iv = g.vertex_index(e.v);
    g.arcs_[iu].push_back({i, iv});
    g.arcs_[iv].push_back({i, iu});
  }
  return g;
}

Graph build_graph(std::vector<Vertex> vertices, const std::vector<EdgeSpec>& specs) {
  if (vertices.empty()) throw Error(ErrorCode::kInvalidArgument, "graph has no vertices");
  for (const Vertex& v : vertices) {
    if (!geo::is_finite(v.pos)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "vertex " + std::to_string(v.id) + " has a non-finite coordinate");
    }
  }
  std::unordered_map<VertexId, geo::Point> where;
  for (const Vertex& v : vertices) where.emplace(v.id, v.pos);

  std::vector<Edge> edges;
  edges.reserve(specs.size());
  for (const EdgeSpec& s : specs) {
    const auto u = where.find(s.u);
    const auto v = where.find(s.v);
    if (u == where.end() || v == where.end()) {
      throw Error(ErrorCode::kNotFound,
                  "edge " + std::to_string(s.id) + " references an unknown vertex");
    }
    if (s.u == s.v) {
      throw Error(ErrorCode::kInvalidLength, "edge " + std::to_string(s.id) + " is a self-loop");
    }
    const double length = s.length ? *s.length
                                   : std::hypot(u->second.x - v->second.x,
                                                u->second.y - v->second.y);
    if (!std::isfinite(length) || length <= 0.0) {
      throw Error(ErrorCode::kInvalidLength,
                  "edge " + std::to_string(s.id) + " has nonpositive length");
    }
    edges.push_back({s.id, s.u, s.v, length});
  }
  Graph g = Graph::assemble(std::move(vertices), std::move(edges));
  if (!g.connected()) throw Error(ErrorCode::kConnectivity, "graph is not connected");
  return g;
}

}  // namespace insq::net
